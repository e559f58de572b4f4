//! The relation `μ ∼ ν` (`μx = νx` for every infinite `x`), the periodicity
//! group, the kernel of the action, and the flip-graph quotient.
//!
//! Period test: `σ^m = σ^n` on `Λ^∞` iff `λ(m, m+c) = λ(n, n+c)` for every
//! `λ ∈ Λ^{(m∨n)+c}`, `c = (1,…,1)`. Necessity holds because every finite
//! path starts some infinite path; sufficiency because an infinite path is
//! determined by its diagonal blocks `x(jc, (j+1)c)`, and each block of
//! `σ^m x` is the `(m, m+c)` segment of a window `x(jc, jc+(m∨n)+c)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{KGraph, VertexId};
use crate::path::Path;
use crate::table::{make_unitary, UTable};

/// The class `m − n ∈ ℤ^k`, stored with disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodCandidate {
    m: Degree,
    n: Degree,
}

impl PeriodCandidate {
    pub fn new(m: Degree, n: Degree) -> Result<Self> {
        if m.rank() != n.rank() {
            return Err(Error::BadParameters("degrees of different ranks".into()));
        }
        if !m.disjoint(&n) {
            return Err(Error::BadParameters(format!("{m} and {n} have overlapping supports")));
        }
        Ok(PeriodCandidate { m, n })
    }

    /// Splits a class into its positive and negative parts.
    pub fn from_class(class: &[i64]) -> Self {
        let pos: Vec<u32> = class.iter().map(|&x| x.max(0) as u32).collect();
        let neg: Vec<u32> = class.iter().map(|&x| (-x).max(0) as u32).collect();
        PeriodCandidate {
            m: Degree::from_slice(&pos),
            n: Degree::from_slice(&neg),
        }
    }

    /// `d(μ) − d(ν)` as a candidate.
    pub fn difference(a: &Degree, b: &Degree) -> Self {
        let class: Vec<i64> = a
            .components()
            .iter()
            .zip(b.components())
            .map(|(&x, &y)| x as i64 - y as i64)
            .collect();
        Self::from_class(&class)
    }

    pub fn m(&self) -> &Degree {
        &self.m
    }

    pub fn n(&self) -> &Degree {
        &self.n
    }

    pub fn class(&self) -> Vec<i64> {
        self.m
            .components()
            .iter()
            .zip(self.n.components())
            .map(|(&x, &y)| x as i64 - y as i64)
            .collect()
    }
}

impl fmt::Display for PeriodCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.class().iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Bounded aperiodicity verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Periodic(PeriodCandidate),
    NoPeriodUpToBound(u32),
}

/// Whether `σ^m = σ^n` on `Λ^∞`.
pub fn is_period(graph: &KGraph, candidate: &PeriodCandidate) -> Result<bool> {
    let (m, n) = (&candidate.m, &candidate.n);
    if m.rank() != graph.rank() {
        return Err(Error::BadParameters("candidate rank differs from graph rank".into()));
    }
    if m == n {
        return Ok(true);
    }
    let c = Degree::ones(graph.rank());
    let window = &m.join(n) + &c;
    let (mc, nc) = (m + &c, n + &c);
    for lambda in graph.enumerate_all(&window) {
        if graph.segment(&lambda, m, &mc)? != graph.segment(&lambda, n, &nc)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonzero classes with entries in `[-bound, bound]`, up to sign, ordered by
/// absolute sum then lexicographically.
fn candidate_classes(rank: usize, bound: u32) -> Vec<Vec<i64>> {
    let b = bound as i64;
    let mut out = Vec::new();
    let mut cur = vec![-b; rank];
    loop {
        if let Some(&first) = cur.iter().find(|&&x| x != 0) {
            if first > 0 {
                out.push(cur.clone());
            }
        }
        let mut i = rank;
        loop {
            if i == 0 {
                out.sort_by_key(|v: &Vec<i64>| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
                return out;
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                break;
            }
            cur[i] = -b;
        }
    }
}

/// Hermite normal form rows of the lattice spanned by `rows`.
pub fn hermite_basis(mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let Some(width) = rows.first().map(|r| r.len()) else {
        return Vec::new();
    };
    let mut pivot_row = 0;
    for col in 0..width {
        loop {
            let best = (pivot_row..rows.len())
                .filter(|&r| rows[r][col] != 0)
                .min_by_key(|&r| rows[r][col].abs());
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for r in (pivot_row + 1)..rows.len() {
                let q = rows[r][col] / rows[pivot_row][col];
                if q != 0 {
                    for j in 0..width {
                        rows[r][j] -= q * rows[pivot_row][j];
                    }
                }
                if rows[r][col] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < rows.len() && rows[pivot_row][col] != 0 {
            if rows[pivot_row][col] < 0 {
                for x in rows[pivot_row].iter_mut() {
                    *x = -*x;
                }
            }
            let p = rows[pivot_row][col];
            for r in 0..pivot_row {
                let q = rows[r][col].div_euclid(p);
                for j in 0..width {
                    rows[r][j] -= q * rows[pivot_row][j];
                }
            }
            pivot_row += 1;
        }
    }
    rows.truncate(pivot_row);
    rows
}

/// A generating set (in Hermite form) of the subgroup spanned by all
/// periods with entries bounded by `bound`.
pub fn per_group_generators(graph: &KGraph, bound: u32) -> Result<Vec<PeriodCandidate>> {
    let mut found = Vec::new();
    for class in candidate_classes(graph.rank(), bound) {
        if is_period(graph, &PeriodCandidate::from_class(&class))? {
            found.push(class);
        }
    }
    Ok(hermite_basis(found)
        .iter()
        .map(|row| PeriodCandidate::from_class(row))
        .collect())
}

pub fn is_aperiodic(graph: &KGraph, bound: u32) -> Result<Verdict> {
    for class in candidate_classes(graph.rank(), bound) {
        let cand = PeriodCandidate::from_class(&class);
        if is_period(graph, &cand)? {
            return Ok(Verdict::Periodic(cand));
        }
    }
    Ok(Verdict::NoPeriodUpToBound(bound))
}

/// Vertices `w` with `uΛw ≠ ∅`.
fn reachable_from(graph: &KGraph, u: VertexId) -> Vec<VertexId> {
    let mut seen = BTreeSet::from([u]);
    let mut stack = vec![u];
    while let Some(x) = stack.pop() {
        for c in 0..graph.rank() {
            for &e in graph.incoming(x, c) {
                let y = graph.edge(e).source;
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Decides `μ ∼ ν` exactly.
pub fn paths_equivalent(graph: &KGraph, mu: &Path, nu: &Path) -> Result<bool> {
    if mu.source() != nu.source() {
        return Err(Error::SourceMismatch { index: 0 });
    }
    if mu.range() != nu.range() {
        return Ok(false);
    }
    if graph.is_single_vertex() {
        let cand = PeriodCandidate::difference(mu.degree(), nu.degree());
        if !is_period(graph, &cand)? {
            return Ok(false);
        }
        let ext = mu.degree().join(nu.degree()).checked_sub(mu.degree()).expect("join");
        for w in graph.extensions(mu, &ext) {
            if graph.factorize(&w, nu.degree())?.0 != *nu {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    if graph.rank() != 1 {
        return Err(Error::UnsupportedGraphClass);
    }
    let (short, long) = if mu.len() <= nu.len() { (mu, nu) } else { (nu, mu) };
    if !long.edges().starts_with(short.edges()) {
        return Ok(false);
    }
    let l = long.len() - short.len();
    if l == 0 {
        return Ok(true);
    }
    // μx = νx for all x iff every infinite path from s(μ) is l-periodic.
    let step = Degree::from_slice(&[l as u32 + 1]);
    for w in reachable_from(graph, mu.source()) {
        for p in graph.enumerate(w, &step) {
            if p.edges()[0] != p.edges()[l] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Some `w ∈ s(μ)Λ^depth` with `(μw)(0,D) ≠ (νw)(0,D)`, where
/// `D = (d(μ)+depth) ∧ (d(ν)+depth)`.
pub fn refute_equivalence(graph: &KGraph, mu: &Path, nu: &Path, depth: &Degree) -> Result<Option<Path>> {
    if mu.source() != nu.source() {
        return Err(Error::SourceMismatch { index: 0 });
    }
    let d = (mu.degree() + depth).meet(&(nu.degree() + depth));
    for w in graph.enumerate(mu.source(), depth) {
        let a = graph.compose(mu, &w)?;
        let b = graph.compose(nu, &w)?;
        if a.range() != b.range() || graph.factorize(&a, &d)?.0 != graph.factorize(&b, &d)?.0 {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Whether every pair, after refining the right column to a common degree,
/// consists of equivalent paths; these tables act trivially on `Λ^∞`.
pub fn in_kernel_n(u: &UTable) -> Result<bool> {
    let g = u.graph();
    let q = u.as_pis().right_degree();
    for (a, b) in u.as_pis().refine_right(&q) {
        if !paths_equivalent(g, &a, &b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The single-vertex 1-graph on `n` letters carrying the quotient of a flip
/// graph with `n` edges per color.
pub fn flip_quotient_graph(graph: &KGraph) -> Result<Arc<KGraph>> {
    if !graph.is_flip() {
        return Err(Error::NotFlipGraph);
    }
    Ok(Arc::new(KGraph::single_vertex(&[graph.color_counts()[0]], vec![])?))
}

/// Erases colors: the index word of `p`, read in normal-form order.
pub fn flip_quotient_path(graph: &KGraph, quotient: &KGraph, p: &Path) -> Path {
    if p.is_vertex() {
        return quotient.vertex_path(0);
    }
    let word: Vec<_> = p
        .edges()
        .iter()
        .map(|&e| quotient.colored_edge(0, graph.edge(e).index - 1))
        .collect();
    quotient.path_from_word(&word).expect("single vertex words compose")
}

/// The induced table over the quotient 1-graph.
pub fn flip_quotient(u: &UTable) -> Result<UTable> {
    let g = u.graph();
    let q = flip_quotient_graph(g)?;
    let pairs = u
        .pairs()
        .iter()
        .map(|(a, b)| (flip_quotient_path(g, &q, a), flip_quotient_path(g, &q, b)))
        .collect();
    make_unitary(&q, pairs).map_err(|e| Error::IllFormedImage(e.to_string()))
}
