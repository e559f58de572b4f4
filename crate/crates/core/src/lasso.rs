//! Eventually periodic infinite paths.
//!
//! An infinite path `x` is determined by its diagonal blocks
//! `x(jc, (j+1)c)` with `c = (1,…,1)`; for rank one a block is a single
//! edge. A lasso stores blocks `h_0..h_{a-1}` followed by the repeating
//! blocks `c_0..c_{b-1}`, so `x = h_0⋯h_{a-1}(c_0⋯c_{b-1})^∞`.

use std::fmt;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::Path;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoPath {
    head: Vec<Path>,
    cycle: Vec<Path>,
}

fn block_degree(graph: &KGraph) -> Degree {
    Degree::ones(graph.rank())
}

/// Joins blocks into one normal-form path; `range` is used when empty.
fn concat(graph: &KGraph, blocks: &[Path], range: VertexId) -> Path {
    if blocks.is_empty() {
        return graph.vertex_path(range);
    }
    let word: Vec<_> = blocks.iter().flat_map(|b| b.edges().iter().copied()).collect();
    graph.path_from_word(&word).expect("blocks compose")
}

/// Splits a path of degree `j·c` into its `j` diagonal blocks.
fn split_blocks(graph: &KGraph, p: &Path) -> Result<Vec<Path>> {
    let c = block_degree(graph);
    let j = p.degree().max_component();
    if *p.degree() != c.scale(j) {
        return Err(Error::DegreeOutOfRange);
    }
    (0..j)
        .map(|i| graph.segment(p, &c.scale(i), &c.scale(i + 1)))
        .collect()
}

impl LassoPath {
    /// Builds `head·cycle^∞` from block lists, validating composability,
    /// then canonicalizes.
    pub fn from_blocks(graph: &KGraph, head: Vec<Path>, cycle: Vec<Path>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyInput);
        }
        let c = block_degree(graph);
        if head.iter().chain(&cycle).any(|b| *b.degree() != c) {
            return Err(Error::DegreeOutOfRange);
        }
        let chain: Vec<&Path> = head.iter().chain(&cycle).chain(cycle.first()).collect();
        if chain.windows(2).any(|w| w[0].source() != w[1].range()) {
            return Err(Error::NotComposable);
        }
        let mut l = LassoPath { head, cycle };
        l.canonicalize();
        Ok(l)
    }

    /// `head·cycle^∞` from paths of degrees `a·c` and `b·c`, `b ≥ 1`.
    pub fn from_paths(graph: &KGraph, head: &Path, cycle: &Path) -> Result<Self> {
        if cycle.is_vertex() {
            return Err(Error::EmptyInput);
        }
        if head.source() != cycle.range() || cycle.source() != cycle.range() {
            return Err(Error::NotComposable);
        }
        Self::from_blocks(graph, split_blocks(graph, head)?, split_blocks(graph, cycle)?)
    }

    fn canonicalize(&mut self) {
        let b = self.cycle.len();
        if let Some(p) = (1..=b)
            .filter(|p| b % p == 0)
            .find(|&p| (0..b).all(|j| self.cycle[j] == self.cycle[j % p]))
        {
            self.cycle.truncate(p);
        }
        while let Some(last) = self.head.last() {
            if last != self.cycle.last().expect("nonempty cycle") {
                break;
            }
            self.head.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn head_blocks(&self) -> &[Path] {
        &self.head
    }

    pub fn cycle_blocks(&self) -> &[Path] {
        &self.cycle
    }

    pub fn range(&self) -> VertexId {
        self.head.first().unwrap_or(&self.cycle[0]).range()
    }

    pub fn head_path(&self, graph: &KGraph) -> Path {
        concat(graph, &self.head, self.range())
    }

    pub fn cycle_path(&self, graph: &KGraph) -> Path {
        concat(graph, &self.cycle, self.cycle[0].range())
    }

    /// Block `j`, i.e. `x(jc, (j+1)c)`.
    pub fn block(&self, j: usize) -> &Path {
        if j < self.head.len() {
            &self.head[j]
        } else {
            &self.cycle[(j - self.head.len()) % self.cycle.len()]
        }
    }

    fn blocks_prefix(&self, graph: &KGraph, count: usize) -> Path {
        let blocks: Vec<Path> = (0..count).map(|j| self.block(j).clone()).collect();
        concat(graph, &blocks, self.range())
    }

    /// `x(0, n)`.
    pub fn prefix(&self, graph: &KGraph, n: &Degree) -> Path {
        let long = self.blocks_prefix(graph, n.max_component() as usize);
        graph.factorize(&long, n).expect("block prefix dominates").0
    }

    /// Whether `x ∈ Z(μ)`.
    pub fn starts_with(&self, graph: &KGraph, mu: &Path) -> bool {
        self.prefix(graph, mu.degree()) == *mu
    }

    /// `σ^m(x)`.
    pub fn shift(&self, graph: &KGraph, m: &Degree) -> LassoPath {
        let c = block_degree(graph);
        let (a, b) = (self.head.len(), self.cycle.len());
        let window = self.blocks_prefix(graph, m.max_component() as usize + a + b);
        let blocks: Vec<Path> = (0..(a + b) as u32)
            .map(|j| {
                graph
                    .segment(&window, &(m + &c.scale(j)), &(m + &c.scale(j + 1)))
                    .expect("inside window")
            })
            .collect();
        let mut out = LassoPath {
            head: blocks[..a].to_vec(),
            cycle: blocks[a..].to_vec(),
        };
        out.canonicalize();
        out
    }

    /// `αx`, defined when `s(α) = r(x)`.
    pub fn prepend(&self, graph: &KGraph, alpha: &Path) -> Result<LassoPath> {
        if alpha.source() != self.range() {
            return Err(Error::NotComposable);
        }
        let c = block_degree(graph);
        let (a, b) = (self.head.len(), self.cycle.len());
        let lead = a + alpha.degree().max_component() as usize;
        let total = c.scale((lead + b) as u32);
        let rest = total.checked_sub(alpha.degree()).expect("dominates");
        let window = graph.compose(alpha, &self.prefix(graph, &rest))?;
        let blocks = split_blocks(graph, &window)?;
        let mut out = LassoPath {
            head: blocks[..lead].to_vec(),
            cycle: blocks[lead..].to_vec(),
        };
        out.canonicalize();
        Ok(out)
    }

    /// `<head>|(<cycle>)` in path syntax.
    pub fn format(&self, graph: &KGraph) -> String {
        format!(
            "{}|({})",
            graph.format_path(&self.head_path(graph)),
            graph.format_path(&self.cycle_path(graph))
        )
    }

    pub fn parse(graph: &KGraph, text: &str) -> Result<Self> {
        let t = text.trim();
        let (head, cycle) = t
            .split_once('|')
            .ok_or_else(|| Error::parse(0, format!("lasso `{t}` needs `<head>|(<cycle>)`")))?;
        let cycle = cycle
            .trim()
            .strip_prefix('(')
            .and_then(|c| c.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, format!("lasso cycle in `{t}` needs parentheses")))?;
        let cycle = graph.parse_path(cycle)?;
        let head = if head.trim().is_empty() {
            graph.vertex_path(cycle.range())
        } else {
            graph.parse_path(head)?
        };
        Self::from_paths(graph, &head, &cycle)
    }
}

/// Displays a lasso with its graph.
pub struct LassoDisplay<'a>(pub &'a KGraph, pub &'a LassoPath);

impl fmt::Display for LassoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.1.format(self.0))
    }
}
