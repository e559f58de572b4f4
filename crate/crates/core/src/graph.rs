//! Finite presentations of k-graphs.
//!
//! Two classes are supported: arbitrary finite rank-1 graphs given by
//! vertex and edge lists, and single-vertex rank-k graphs given by edge
//! counts per color together with the commutation permutations
//! `θ_ij`, read as `e^i_s e^j_t = e^j_t' e^i_s'` whenever
//! `θ_ij(s,t) = (s',t')`.
//!
//! Composition convention: `r(μν) = r(μ)` and `s(μν) = s(ν)`, so a word
//! `e_1 e_2 ... e_n` is composable when `s(e_i) = r(e_{i+1})`, and `vΛ` is
//! the set of paths whose range is `v`. Under the opposite convention every
//! table would be transposed.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::degree::Degree;
use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// 0-based color.
    pub color: usize,
    /// 1-based index within its color.
    pub index: usize,
    pub source: VertexId,
    pub range: VertexId,
}

/// How the graph was presented; determines path syntax.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Presentation {
    /// One vertex `v`, edges `c<i>.<s>`, factorization rules from `θ`.
    SingleVertex,
    /// Rank one, named vertices and edges.
    Rank1,
}

/// One line `theta i j: (s,t)->s',t'`, 1-based throughout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaEntry {
    pub i: usize,
    pub j: usize,
    pub from: (usize, usize),
    pub to: (usize, usize),
}

/// Unvalidated presentation, as parsed from a graph file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawGraph {
    SingleVertex {
        rank: usize,
        counts: Vec<usize>,
        theta: Vec<ThetaEntry>,
    },
    Rank1 {
        vertices: Vec<String>,
        /// `(name, source, range)`.
        edges: Vec<(String, String, String)>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Theta {
    nj: usize,
    forward: Vec<(u32, u32)>,
    inverse: Vec<(u32, u32)>,
}

impl Theta {
    fn is_identity(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(k, &(s, t))| k == s as usize * self.nj + t as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGraph {
    rank: usize,
    presentation: Presentation,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    color_start: Vec<usize>,
    /// `incoming[v][c]`: color-`c` edges with range `v`, ascending.
    incoming: Vec<Vec<Vec<EdgeId>>>,
    /// Indexed by `i * rank + j` for `i < j`.
    thetas: Vec<Option<Theta>>,
    strongly_connected: bool,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.trim()
        .parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected a number, found `{}`", tok.trim())))
}

fn parse_index_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let t = text.trim();
    let t = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .unwrap_or(t);
    let mut it = t.split(',');
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((parse_usize(a, line)?, parse_usize(b, line)?)),
        _ => Err(Error::parse(line, format!("expected an index pair, found `{text}`"))),
    }
}

/// Parses the line-based graph file format without validating it.
pub fn parse_raw(text: &str) -> Result<RawGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, first) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty graph file"))?;
    let rank = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["rank", k] => parse_usize(k, ln)?,
        _ => return Err(Error::parse(ln, "expected `rank <k>`")),
    };
    if rank == 0 {
        return Err(Error::parse(ln, "rank must be at least 1"));
    }

    let mut counts: Option<Vec<usize>> = None;
    let mut theta = Vec::new();
    let mut vertices = Vec::new();
    let mut edges = Vec::new();

    for (ln, line) in lines {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match keyword {
            "edges" => {
                if counts.is_some() {
                    return Err(Error::parse(ln, "duplicate `edges` line"));
                }
                let c = rest
                    .split_whitespace()
                    .map(|t| parse_usize(t, ln))
                    .collect::<Result<Vec<_>>>()?;
                if c.len() != rank {
                    return Err(Error::parse(
                        ln,
                        format!("`edges` lists {} counts for rank {rank}", c.len()),
                    ));
                }
                counts = Some(c);
            }
            "theta" => {
                let (colors, mapping) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(ln, "expected `theta i j: (s,t)->s',t'`"))?;
                let cs = colors
                    .split_whitespace()
                    .map(|t| parse_usize(t, ln))
                    .collect::<Result<Vec<_>>>()?;
                let [i, j] = cs[..] else {
                    return Err(Error::parse(ln, "theta needs two colors"));
                };
                let (from, to) = mapping
                    .split_once("->")
                    .ok_or_else(|| Error::parse(ln, "theta mapping needs `->`"))?;
                theta.push(ThetaEntry {
                    i,
                    j,
                    from: parse_index_pair(from, ln)?,
                    to: parse_index_pair(to, ln)?,
                });
            }
            "vertex" => {
                if !valid_name(rest) {
                    return Err(Error::parse(ln, format!("bad vertex name `{rest}`")));
                }
                vertices.push(rest.to_string());
            }
            "edge" => {
                let (name, ends) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::parse(ln, "expected `edge <name>: <source> -> <range>`"))?;
                let (src, rng) = ends
                    .split_once("->")
                    .ok_or_else(|| Error::parse(ln, "expected `<source> -> <range>`"))?;
                let name = name.trim();
                if !valid_name(name) {
                    return Err(Error::parse(ln, format!("bad edge name `{name}`")));
                }
                edges.push((name.to_string(), src.trim().to_string(), rng.trim().to_string()));
            }
            other => return Err(Error::parse(ln, format!("unknown keyword `{other}`"))),
        }
    }

    match counts {
        Some(counts) => {
            if !vertices.is_empty() || !edges.is_empty() {
                return Err(Error::parse(0, "cannot mix `edges` with vertex/edge lists"));
            }
            Ok(RawGraph::SingleVertex {
                rank,
                counts,
                theta,
            })
        }
        None => {
            if !theta.is_empty() {
                return Err(Error::parse(0, "theta lines need an `edges` line"));
            }
            if rank != 1 {
                return Err(Error::parse(0, "vertex/edge lists are only supported for rank 1"));
            }
            if vertices.is_empty() {
                return Err(Error::parse(0, "no vertices"));
            }
            Ok(RawGraph::Rank1 { vertices, edges })
        }
    }
}

/// Validates a raw presentation: source-freeness, bijectivity of every
/// `θ_ij`, the cube condition for rank at least three, and edge endpoints.
pub fn validate_graph(raw: RawGraph) -> Result<KGraph> {
    match raw {
        RawGraph::SingleVertex {
            rank,
            counts,
            theta,
        } => validate_single_vertex(rank, counts, theta),
        RawGraph::Rank1 { vertices, edges } => validate_rank1(vertices, edges),
    }
}

fn validate_single_vertex(rank: usize, counts: Vec<usize>, entries: Vec<ThetaEntry>) -> Result<KGraph> {
    for (c, &n) in counts.iter().enumerate() {
        if n == 0 {
            return Err(Error::NotSourceFree {
                vertex: "v".into(),
                color: c + 1,
            });
        }
    }
    let mut edges = Vec::new();
    let mut color_start = Vec::with_capacity(rank + 1);
    for (c, &n) in counts.iter().enumerate() {
        color_start.push(edges.len());
        for s in 1..=n {
            edges.push(Edge {
                name: format!("c{}.{}", c + 1, s),
                color: c,
                index: s,
                source: 0,
                range: 0,
            });
        }
    }
    color_start.push(edges.len());

    let mut maps: Vec<Option<Vec<Option<(u32, u32)>>>> = vec![None; rank * rank];
    for e in &entries {
        if !(1 <= e.i && e.i < e.j && e.j <= rank) {
            return Err(Error::parse(0, format!("theta colors {} {} out of range", e.i, e.j)));
        }
        let (ni, nj) = (counts[e.i - 1], counts[e.j - 1]);
        let in_range = |(s, t): (usize, usize)| (1..=ni).contains(&s) && (1..=nj).contains(&t);
        if !in_range(e.from) || !in_range(e.to) {
            return Err(Error::parse(0, format!("theta {} {} index out of range", e.i, e.j)));
        }
        let slot = &mut maps[(e.i - 1) * rank + (e.j - 1)];
        let table = slot.get_or_insert_with(|| vec![None; ni * nj]);
        let k = (e.from.0 - 1) * nj + (e.from.1 - 1);
        if table[k].is_some() {
            return Err(Error::parse(
                0,
                format!("theta {} {} lists ({},{}) twice", e.i, e.j, e.from.0, e.from.1),
            ));
        }
        table[k] = Some(((e.to.0 - 1) as u32, (e.to.1 - 1) as u32));
    }

    let mut thetas = vec![None; rank * rank];
    for i in 0..rank {
        for j in (i + 1)..rank {
            let (ni, nj) = (counts[i], counts[j]);
            let given = maps[i * rank + j].take().unwrap_or_else(|| vec![None; ni * nj]);
            let forward: Vec<(u32, u32)> = given
                .iter()
                .enumerate()
                .map(|(k, m)| m.unwrap_or(((k / nj) as u32, (k % nj) as u32)))
                .collect();
            let mut inverse = vec![None; ni * nj];
            for (k, &(s, t)) in forward.iter().enumerate() {
                let slot = &mut inverse[s as usize * nj + t as usize];
                if slot.is_some() {
                    return Err(Error::ThetaNotBijective { i: i + 1, j: j + 1 });
                }
                *slot = Some(((k / nj) as u32, (k % nj) as u32));
            }
            let inverse = inverse.into_iter().map(|m| m.expect("bijective")).collect();
            thetas[i * rank + j] = Some(Theta {
                nj,
                forward,
                inverse,
            });
        }
    }

    let mut incoming = vec![vec![Vec::new(); rank]];
    for (id, e) in edges.iter().enumerate() {
        incoming[0][e.color].push(id as EdgeId);
    }
    let graph = KGraph {
        rank,
        presentation: Presentation::SingleVertex,
        vertices: vec!["v".into()],
        edges,
        color_start,
        incoming,
        thetas,
        strongly_connected: true,
    };
    if rank >= 3 {
        graph.check_cube_condition()?;
    }
    Ok(graph)
}

fn validate_rank1(vertices: Vec<String>, raw_edges: Vec<(String, String, String)>) -> Result<KGraph> {
    let mut ids = HashMap::new();
    for (i, v) in vertices.iter().enumerate() {
        if ids.insert(v.clone(), i as VertexId).is_some() {
            return Err(Error::parse(0, format!("duplicate vertex `{v}`")));
        }
    }
    let mut names = HashSet::new();
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (k, (name, src, rng)) in raw_edges.into_iter().enumerate() {
        if !names.insert(name.clone()) {
            return Err(Error::parse(0, format!("duplicate edge `{name}`")));
        }
        let lookup = |v: &str| {
            ids.get(v).copied().ok_or_else(|| Error::DanglingEdge {
                edge: name.clone(),
                vertex: v.to_string(),
            })
        };
        let source = lookup(&src)?;
        let range = lookup(&rng)?;
        edges.push(Edge {
            name,
            color: 0,
            index: k + 1,
            source,
            range,
        });
    }
    let mut incoming = vec![vec![Vec::new()]; vertices.len()];
    for (id, e) in edges.iter().enumerate() {
        incoming[e.range as usize][0].push(id as EdgeId);
    }
    for (v, inc) in incoming.iter().enumerate() {
        if inc[0].is_empty() {
            return Err(Error::NotSourceFree {
                vertex: vertices[v].clone(),
                color: 1,
            });
        }
    }
    let color_start = vec![0, edges.len()];
    let mut graph = KGraph {
        rank: 1,
        presentation: Presentation::Rank1,
        vertices,
        edges,
        color_start,
        incoming,
        thetas: vec![None],
        strongly_connected: false,
    };
    graph.strongly_connected = graph.compute_strong_connectivity();
    Ok(graph)
}

impl KGraph {
    /// Parses and validates a graph file.
    pub fn parse(text: &str) -> Result<KGraph> {
        validate_graph(parse_raw(text)?)
    }

    /// Single-vertex graph with the given per-color edge counts; `theta`
    /// entries not listed are identity.
    pub fn single_vertex(counts: &[usize], theta: Vec<ThetaEntry>) -> Result<KGraph> {
        validate_graph(RawGraph::SingleVertex {
            rank: counts.len(),
            counts: counts.to_vec(),
            theta,
        })
    }

    /// Rank-1 graph from vertex names and `(name, source, range)` edges.
    pub fn rank1(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<KGraph> {
        validate_graph(RawGraph::Rank1 {
            vertices: vertices.iter().map(|v| v.to_string()).collect(),
            edges: edges
                .iter()
                .map(|(n, s, r)| (n.to_string(), s.to_string(), r.to_string()))
                .collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.vertices.len() as VertexId
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v as usize]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .iter()
            .position(|v| v == name)
            .map(|i| i as VertexId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id as usize]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges
            .iter()
            .position(|e| e.name == name)
            .map(|i| i as EdgeId)
    }

    /// Edge id of `e^{color+1}_{index+1}` in a single-vertex graph.
    pub fn colored_edge(&self, color: usize, index: usize) -> EdgeId {
        (self.color_start[color] + index) as EdgeId
    }

    /// Number of edges per color (`n_i` for single-vertex graphs).
    pub fn color_counts(&self) -> Vec<usize> {
        self.color_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Edges of the given color with range `v`.
    pub fn incoming(&self, v: VertexId, color: usize) -> &[EdgeId] {
        &self.incoming[v as usize][color]
    }

    pub fn is_single_vertex(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected
    }

    /// `|Λ^n|` for a single-vertex graph, i.e. `𝐧^n`; saturates on overflow.
    pub fn count_single_vertex(&self, n: &Degree) -> u128 {
        self.color_counts()
            .iter()
            .zip(n.components())
            .fold(1u128, |acc, (&c, &e)| acc.saturating_mul((c as u128).saturating_pow(e)))
    }

    /// True for the single-vertex flip graph: rank at least two, equal edge
    /// counts, and `θ_ij(s,t) = (t,s)` for every pair of colors.
    pub fn is_flip(&self) -> bool {
        if self.presentation != Presentation::SingleVertex || self.rank < 2 {
            return false;
        }
        let counts = self.color_counts();
        if counts.iter().any(|&c| c != counts[0]) {
            return false;
        }
        (0..self.rank).all(|i| {
            ((i + 1)..self.rank).all(|j| {
                let th = self.thetas[i * self.rank + j].as_ref().expect("theta");
                th.forward
                    .iter()
                    .enumerate()
                    .all(|(k, &(s, t))| (s as usize, t as usize) == (k % th.nj, k / th.nj))
            })
        })
    }

    /// `θ_ij(s,t)`, 0-based colors and indices, `i < j`.
    pub fn theta(&self, i: usize, j: usize, s: usize, t: usize) -> (usize, usize) {
        let th = self.thetas[i * self.rank + j].as_ref().expect("theta for i < j");
        let (a, b) = th.forward[s * th.nj + t];
        (a as usize, b as usize)
    }

    /// `θ_ij^{-1}(s',t')`.
    pub fn theta_inverse(&self, i: usize, j: usize, s: usize, t: usize) -> (usize, usize) {
        let th = self.thetas[i * self.rank + j].as_ref().expect("theta for i < j");
        let (a, b) = th.inverse[s * th.nj + t];
        (a as usize, b as usize)
    }

    /// Rewrites the two adjacent edges at `pos`, `pos + 1` (of different
    /// colors) into the unique equal word with their colors exchanged.
    pub fn swap_adjacent(&self, word: &mut [EdgeId], pos: usize) {
        let (a, b) = (self.edge(word[pos]), self.edge(word[pos + 1]));
        assert_ne!(a.color, b.color, "only edges of different colors commute");
        if a.color < b.color {
            let (i, j) = (a.color, b.color);
            let (s2, t2) = self.theta(i, j, a.index - 1, b.index - 1);
            word[pos] = self.colored_edge(j, t2);
            word[pos + 1] = self.colored_edge(i, s2);
        } else {
            let (i, j) = (b.color, a.color);
            let (s, t) = self.theta_inverse(i, j, b.index - 1, a.index - 1);
            word[pos] = self.colored_edge(i, s);
            word[pos + 1] = self.colored_edge(j, t);
        }
    }

    fn check_cube_condition(&self) -> Result<()> {
        let counts = self.color_counts();
        for i in 0..self.rank {
            for j in (i + 1)..self.rank {
                for l in (j + 1)..self.rank {
                    for a in 0..counts[i] {
                        for b in 0..counts[j] {
                            for c in 0..counts[l] {
                                let word = [
                                    self.colored_edge(i, a),
                                    self.colored_edge(j, b),
                                    self.colored_edge(l, c),
                                ];
                                let mut first = word;
                                for p in [0, 1, 0] {
                                    self.swap_adjacent(&mut first, p);
                                }
                                let mut second = word;
                                for p in [1, 0, 1] {
                                    self.swap_adjacent(&mut second, p);
                                }
                                if first != second {
                                    return Err(Error::CubeConditionFailed {
                                        colors: [i + 1, j + 1, l + 1],
                                        indices: [a + 1, b + 1, c + 1],
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn compute_strong_connectivity(&self) -> bool {
        let n = self.vertices.len();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for e in &self.edges {
                    let (from, to) = if forward {
                        (e.range, e.source)
                    } else {
                        (e.source, e.range)
                    };
                    if from as usize == v && !seen[to as usize] {
                        seen[to as usize] = true;
                        queue.push_back(to as usize);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    /// Canonical presentation in the graph file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "rank {}", self.rank).unwrap();
        match self.presentation {
            Presentation::SingleVertex => {
                let counts = self.color_counts();
                let list: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                writeln!(out, "edges {}", list.join(" ")).unwrap();
                for i in 0..self.rank {
                    for j in (i + 1)..self.rank {
                        let th = self.thetas[i * self.rank + j].as_ref().expect("theta");
                        if th.is_identity() {
                            continue;
                        }
                        for (k, &(s2, t2)) in th.forward.iter().enumerate() {
                            writeln!(
                                out,
                                "theta {} {}: ({},{})->{},{}",
                                i + 1,
                                j + 1,
                                k / th.nj + 1,
                                k % th.nj + 1,
                                s2 + 1,
                                t2 + 1
                            )
                            .unwrap();
                        }
                    }
                }
            }
            Presentation::Rank1 => {
                for v in &self.vertices {
                    writeln!(out, "vertex {v}").unwrap();
                }
                for e in &self.edges {
                    writeln!(
                        out,
                        "edge {}: {} -> {}",
                        e.name,
                        self.vertices[e.source as usize],
                        self.vertices[e.range as usize]
                    )
                    .unwrap();
                }
            }
        }
        out
    }
}
