//! Paths, unique factorization and enumeration.
//!
//! Paths are stored as edge words in normal form: for single-vertex graphs
//! the word is sorted by color (all color-1 edges, then color 2, ...), which
//! is reached by repeatedly applying the commutation rules. Two stored paths
//! are equal exactly when they denote the same morphism.

use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, KGraph, Presentation, VertexId};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    edges: Vec<EdgeId>,
    range: VertexId,
    source: VertexId,
    degree: Degree,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.edges
            .cmp(&other.edges)
            .then(self.range.cmp(&other.range))
            .then(self.source.cmp(&other.source))
            .then_with(|| self.degree.cmp(&other.degree))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn range(&self) -> VertexId {
        self.range
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Colors of the concatenation of normal blocks of the given degrees.
fn block_pattern(blocks: &[&Degree]) -> Vec<usize> {
    let mut out = Vec::new();
    for d in blocks {
        for (c, &n) in d.components().iter().enumerate() {
            out.extend(std::iter::repeat(c).take(n as usize));
        }
    }
    out
}

impl KGraph {
    pub fn vertex_path(&self, v: VertexId) -> Path {
        Path {
            edges: Vec::new(),
            range: v,
            source: v,
            degree: Degree::zero(self.rank()),
        }
    }

    /// Builds a path from a composable edge word, normalizing it.
    pub fn path_from_word(&self, word: &[EdgeId]) -> Result<Path> {
        let Some(&first) = word.first() else {
            return Err(Error::EmptyInput);
        };
        for w in word.windows(2) {
            if self.edge(w[0]).source != self.edge(w[1]).range {
                return Err(Error::NotComposable);
            }
        }
        let mut degree = Degree::zero(self.rank());
        let mut counts = vec![0u32; self.rank()];
        for &e in word {
            counts[self.edge(e).color] += 1;
        }
        if !counts.is_empty() {
            degree = Degree::from_slice(&counts);
        }
        let mut edges = word.to_vec();
        self.normalize(&mut edges);
        Ok(Path {
            range: self.edge(first).range,
            source: self.edge(*word.last().expect("nonempty")).source,
            edges,
            degree,
        })
    }

    /// Rewrites a word of a single-vertex graph into color-sorted form.
    pub fn normalize(&self, word: &mut [EdgeId]) {
        if self.rank() == 1 {
            return;
        }
        let n = word.len();
        for end in (1..n).rev() {
            let mut moved = false;
            for pos in 0..end {
                if self.edge(word[pos]).color > self.edge(word[pos + 1]).color {
                    self.swap_adjacent(word, pos);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    /// Rewrites `word` into the factorization whose color sequence is
    /// `pattern` (same color multiset). Each adjacent exchange is a
    /// commutation rule, so the result denotes the same path.
    fn rewrite_to_pattern(&self, word: &mut [EdgeId], pattern: &[usize]) {
        if self.rank() == 1 {
            return;
        }
        let k = self.rank();
        let mut target_slots: Vec<Vec<usize>> = vec![Vec::new(); k];
        for (pos, &c) in pattern.iter().enumerate() {
            target_slots[c].push(pos);
        }
        let mut seen = vec![0usize; k];
        let mut keys: Vec<usize> = word
            .iter()
            .map(|&e| {
                let c = self.edge(e).color;
                let key = target_slots[c][seen[c]];
                seen[c] += 1;
                key
            })
            .collect();
        let n = word.len();
        for end in (1..n).rev() {
            let mut moved = false;
            for pos in 0..end {
                if keys[pos] > keys[pos + 1] {
                    self.swap_adjacent(word, pos);
                    keys.swap(pos, pos + 1);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }

    fn path_of_normal_word(&self, edges: Vec<EdgeId>, range: VertexId, source: VertexId) -> Path {
        let mut counts = vec![0u32; self.rank()];
        for &e in &edges {
            counts[self.edge(e).color] += 1;
        }
        Path {
            edges,
            range,
            source,
            degree: Degree::from_slice(&counts),
        }
    }

    /// `μν`, defined when `s(μ) = r(ν)`.
    pub fn compose(&self, mu: &Path, nu: &Path) -> Result<Path> {
        if mu.source != nu.range {
            return Err(Error::NotComposable);
        }
        let mut edges = Vec::with_capacity(mu.len() + nu.len());
        edges.extend_from_slice(&mu.edges);
        edges.extend_from_slice(&nu.edges);
        self.normalize(&mut edges);
        Ok(Path {
            edges,
            range: mu.range,
            source: nu.source,
            degree: &mu.degree + &nu.degree,
        })
    }

    /// Unique factorization `λ = λ(0,n) λ(n,d(λ))`.
    pub fn factorize(&self, path: &Path, n: &Degree) -> Result<(Path, Path)> {
        let rest = path.degree.checked_sub(n).ok_or(Error::DegreeOutOfRange)?;
        let mut word = path.edges.clone();
        self.rewrite_to_pattern(&mut word, &block_pattern(&[n, &rest]));
        let cut = n.total() as usize;
        let (head, tail) = word.split_at(cut);
        let mid = if cut == 0 {
            path.range
        } else {
            self.edge(head[cut - 1]).source
        };
        let mut tail = tail.to_vec();
        self.normalize(&mut tail);
        Ok((
            self.path_of_normal_word(head.to_vec(), path.range, mid),
            self.path_of_normal_word(tail, mid, path.source),
        ))
    }

    /// The segment `λ(m,n)` for `m ≤ n ≤ d(λ)`.
    pub fn segment(&self, path: &Path, m: &Degree, n: &Degree) -> Result<Path> {
        let middle = n.checked_sub(m).ok_or(Error::DegreeOutOfRange)?;
        let rest = path.degree.checked_sub(n).ok_or(Error::DegreeOutOfRange)?;
        let mut word = path.edges.clone();
        self.rewrite_to_pattern(&mut word, &block_pattern(&[m, &middle, &rest]));
        let a = m.total() as usize;
        let b = a + middle.total() as usize;
        let range = if a == 0 {
            path.range
        } else {
            self.edge(word[a - 1]).source
        };
        let source = if b == 0 {
            path.range
        } else {
            self.edge(word[b - 1]).source
        };
        Ok(self.path_of_normal_word(word[a..b].to_vec(), range, source))
    }

    /// `vΛ^d` in canonical (lexicographic edge-id) order.
    pub fn enumerate(&self, v: VertexId, d: &Degree) -> Vec<Path> {
        let pattern = block_pattern(&[d]);
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(pattern.len());
        self.enumerate_rec(&pattern, v, v, &mut word, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        pattern: &[usize],
        range: VertexId,
        current: VertexId,
        word: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) {
        let depth = word.len();
        if depth == pattern.len() {
            out.push(self.path_of_normal_word(word.clone(), range, current));
            return;
        }
        for &e in self.incoming(current, pattern[depth]) {
            word.push(e);
            self.enumerate_rec(pattern, range, self.edge(e).source, word, out);
            word.pop();
        }
    }

    /// `Λ^d` over all vertices, grouped by range.
    pub fn enumerate_all(&self, d: &Degree) -> Vec<Path> {
        self.vertices().flat_map(|v| self.enumerate(v, d)).collect()
    }

    /// `|vΛ^d|`, saturating.
    pub fn count_paths(&self, v: VertexId, d: &Degree) -> u128 {
        if self.is_single_vertex() && self.presentation() == Presentation::SingleVertex {
            return self.count_single_vertex(d);
        }
        // Rank one: walk the length-n layers backwards from v.
        let n = d.total();
        let mut layer = vec![0u128; self.vertex_count()];
        layer[v as usize] = 1;
        for _ in 0..n {
            let mut next = vec![0u128; self.vertex_count()];
            for e in self.edges() {
                let add = layer[e.range as usize];
                if add > 0 {
                    let slot = &mut next[e.source as usize];
                    *slot = slot.saturating_add(add);
                }
            }
            layer = next;
        }
        layer.into_iter().fold(0u128, |a, b| a.saturating_add(b))
    }

    /// `{μα : α ∈ s(μ)Λ^d}`, ordered as the `α` are enumerated.
    pub fn extensions(&self, mu: &Path, d: &Degree) -> Vec<Path> {
        self.enumerate(mu.source, d)
            .into_iter()
            .map(|alpha| self.compose(mu, &alpha).expect("composable by construction"))
            .collect()
    }

    /// True when `μ` is an initial segment of `λ`.
    pub fn is_prefix(&self, mu: &Path, lambda: &Path) -> bool {
        if mu.range != lambda.range || !mu.degree.le(&lambda.degree) {
            return false;
        }
        if self.rank() == 1 {
            return lambda.edges.starts_with(&mu.edges);
        }
        match self.factorize(lambda, &mu.degree) {
            Ok((head, _)) => head == *mu,
            Err(_) => false,
        }
    }

    /// `Λ^min(μ,ν)`: pairs `(α,β)` with `μα = νβ` and
    /// `d(μα) = d(μ) ∨ d(ν)`.
    pub fn lambda_min(&self, mu: &Path, nu: &Path) -> Vec<(Path, Path)> {
        if mu.range != nu.range {
            return Vec::new();
        }
        let m = mu.degree.join(&nu.degree);
        if self.rank() == 1 {
            let (short, long, swapped) = if mu.len() <= nu.len() {
                (mu, nu, false)
            } else {
                (nu, mu, true)
            };
            if !long.edges.starts_with(&short.edges) {
                return Vec::new();
            }
            let mid = if short.is_vertex() {
                long.range
            } else {
                short.source
            };
            let tail = self.path_of_normal_word(long.edges[short.len()..].to_vec(), mid, long.source);
            let stay = self.vertex_path(long.source);
            return vec![if swapped { (stay, tail) } else { (tail, stay) }];
        }
        // Common extensions agree on the common initial degree.
        let meet = mu.degree.meet(&nu.degree);
        if !meet.is_zero() {
            let (a, _) = self.factorize(mu, &meet).expect("in range");
            let (b, _) = self.factorize(nu, &meet).expect("in range");
            if a != b {
                return Vec::new();
            }
        }
        let ext = m.checked_sub(&mu.degree).expect("join dominates");
        let mut out = Vec::new();
        for alpha in self.enumerate(mu.source, &ext) {
            let lambda = self.compose(mu, &alpha).expect("composable");
            let (head, tail) = self.factorize(&lambda, &nu.degree).expect("in range");
            if head == *nu {
                out.push((alpha, tail));
            }
        }
        out
    }

    pub fn has_common_extension(&self, mu: &Path, nu: &Path) -> bool {
        !self.lambda_min(mu, nu).is_empty()
    }

    /// Shortest path with range `u` and source `v`, lexicographically least
    /// among shortest ones.
    pub fn connecting_path(&self, u: VertexId, v: VertexId) -> Option<Path> {
        if u == v {
            return Some(self.vertex_path(u));
        }
        let n = self.vertex_count();
        let mut parent: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[u as usize] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for c in 0..self.rank() {
                for &e in self.incoming(x, c) {
                    let y = self.edge(e).source;
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        parent[y as usize] = Some(e);
                        queue.push_back(y);
                    }
                }
            }
        }
        if !seen[v as usize] {
            return None;
        }
        let mut word = Vec::new();
        let mut cur = v;
        while cur != u {
            let e = parent[cur as usize].expect("reached");
            word.push(e);
            cur = self.edge(e).range;
        }
        word.reverse();
        Some(self.path_from_word(&word).expect("composable by construction"))
    }

    /// Formats a path: `v:<name>` for vertices, otherwise edge names joined
    /// by `.` (so `c1.1.c2.2` for single-vertex graphs).
    pub fn format_path(&self, p: &Path) -> String {
        if p.is_vertex() {
            return format!("v:{}", self.vertex_name(p.range));
        }
        p.edges
            .iter()
            .map(|&e| self.edge(e).name.as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses the syntax produced by [`KGraph::format_path`]. Single-vertex
    /// words need not be in normal form.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let t = text.trim();
        if let Some(name) = t.strip_prefix("v:") {
            let v = self
                .vertex_id(name)
                .ok_or_else(|| Error::parse(0, format!("unknown vertex `{name}`")))?;
            return Ok(self.vertex_path(v));
        }
        let tokens: Vec<&str> = t.split('.').collect();
        let mut word = Vec::new();
        match self.presentation() {
            Presentation::SingleVertex => {
                if tokens.len() % 2 != 0 {
                    return Err(Error::parse(0, format!("bad path `{t}`")));
                }
                for pair in tokens.chunks(2) {
                    let name = format!("{}.{}", pair[0], pair[1]);
                    word.push(
                        self.edge_by_name(&name)
                            .ok_or_else(|| Error::parse(0, format!("unknown edge `{name}`")))?,
                    );
                }
            }
            Presentation::Rank1 => {
                for name in tokens {
                    word.push(
                        self.edge_by_name(name)
                            .ok_or_else(|| Error::parse(0, format!("unknown edge `{name}`")))?,
                    );
                }
            }
        }
        self.path_from_word(&word)
    }
}
