//! Built-in example graphs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::KGraph;

/// The named example families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Two vertices joined by a cycle of two edges.
    TwoCycle,
    /// The rank-1 graph of the Higman–Thompson group `V_{n,r}`.
    Higman { n: usize, r: usize },
    /// `k` colors, two edges each, trivial commutation: Brin's `kV`.
    Kv { k: usize },
    /// `k` colors, `n` edges each, `e^i_s e^j_t = e^j_s e^i_t`.
    Flip { k: usize, n: usize },
}

impl Preset {
    /// Parses a name and its numeric parameters.
    pub fn from_parts(name: &str, params: &[usize]) -> Result<Preset> {
        let bad = |msg: &str| Err(Error::BadParameters(format!("{name}: {msg}")));
        match (name, params) {
            ("twocycle", []) => Ok(Preset::TwoCycle),
            ("higman", &[n, r]) => {
                if n < 2 || r < 1 {
                    return bad("need n >= 2 and r >= 1");
                }
                Ok(Preset::Higman { n, r })
            }
            ("kv", &[k]) => {
                if k < 1 {
                    return bad("need k >= 1");
                }
                Ok(Preset::Kv { k })
            }
            ("flip", &[k, n]) => {
                if k < 2 || n < 2 {
                    return bad("need k >= 2 and n >= 2");
                }
                Ok(Preset::Flip { k, n })
            }
            ("twocycle" | "higman" | "kv" | "flip", _) => bad("wrong number of parameters"),
            _ => Err(Error::BadParameters(format!(
                "unknown preset `{name}` (expected twocycle, higman n r, kv k, flip k n)"
            ))),
        }
    }

    /// Parses `name` or `name:p1,p2`.
    pub fn from_spec(spec: &str) -> Result<Preset> {
        let (name, params) = spec.split_once(':').unwrap_or((spec, ""));
        let params = params
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadParameters(format!("bad preset parameter `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Preset::from_parts(name, &params)
    }

    /// Canonical graph file.
    pub fn text(&self) -> String {
        let mut out = String::new();
        match *self {
            Preset::TwoCycle => {
                out.push_str("rank 1\nvertex v1\nvertex v2\nedge e1: v1 -> v2\nedge e2: v2 -> v1\n");
            }
            Preset::Higman { n, r } => {
                out.push_str("rank 1\n");
                for i in 1..=r {
                    writeln!(out, "vertex v{i}").unwrap();
                }
                for i in 1..r {
                    writeln!(out, "edge e{i}: v{} -> v{i}", i + 1).unwrap();
                }
                for j in 1..=n {
                    writeln!(out, "edge f{j}: v1 -> v{r}").unwrap();
                }
            }
            Preset::Kv { k } => {
                writeln!(out, "rank {k}").unwrap();
                writeln!(out, "edges {}", vec!["2"; k].join(" ")).unwrap();
            }
            Preset::Flip { k, n } => {
                writeln!(out, "rank {k}").unwrap();
                writeln!(out, "edges {}", vec![n.to_string(); k].join(" ")).unwrap();
                for i in 1..=k {
                    for j in (i + 1)..=k {
                        for s in 1..=n {
                            for t in 1..=n {
                                writeln!(out, "theta {i} {j}: ({s},{t})->{t},{s}").unwrap();
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn graph(&self) -> KGraph {
        KGraph::parse(&self.text()).expect("presets are valid")
    }
}
