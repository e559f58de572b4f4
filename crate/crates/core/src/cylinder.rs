//! Clopen subsets of the infinite-path space, as finite disjoint unions of
//! cylinders `Z(μ)`.
//!
//! Every set-theoretic operation refines its operands to a common degree,
//! where distinct paths have disjoint cylinders, and then works on plain
//! path sets.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::path::Path;

/// Refinements larger than this fall back to pairwise overlap checks.
const REFINE_LIMIT: u128 = 1 << 18;

#[derive(Clone, Debug)]
pub struct CylinderSet {
    graph: Arc<KGraph>,
    paths: Vec<Path>,
}

impl PartialEq for CylinderSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_set(other)
    }
}

impl Eq for CylinderSet {}

/// `μΛ^{d - d(μ)}` for every member; requires `d(μ) ≤ d`.
pub fn refine_to(graph: &KGraph, paths: &[Path], d: &Degree) -> Vec<Path> {
    let mut out = Vec::new();
    for p in paths {
        let ext = d.checked_sub(p.degree()).expect("refinement degree dominates");
        out.extend(graph.extensions(p, &ext));
    }
    out
}

/// Size of `refine_to(graph, paths, d)` without materializing it.
pub fn refined_count(graph: &KGraph, paths: &[Path], d: &Degree) -> u128 {
    paths
        .iter()
        .map(|p| {
            let ext = d.checked_sub(p.degree()).expect("refinement degree dominates");
            graph.count_paths(p.source(), &ext)
        })
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// `Σ_v |vΛ^d|`.
pub fn total_count(graph: &KGraph, d: &Degree) -> u128 {
    graph
        .vertices()
        .map(|v| graph.count_paths(v, d))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// First pair of indices `(i, j)`, `i < j`, whose cylinders intersect.
pub fn find_overlap(graph: &KGraph, paths: &[Path]) -> Option<(usize, usize)> {
    if paths.len() < 2 {
        return None;
    }
    if graph.rank() == 1 {
        // In prefix order a path and any extension of it are separated only
        // by other extensions, so checking neighbours suffices.
        let mut order: Vec<usize> = (0..paths.len()).collect();
        order.sort_by(|&a, &b| {
            (paths[a].range(), paths[a].edges()).cmp(&(paths[b].range(), paths[b].edges()))
        });
        let mut best: Option<(usize, usize)> = None;
        for w in order.windows(2) {
            let (a, b) = (&paths[w[0]], &paths[w[1]]);
            if a.range() == b.range() && b.edges().starts_with(a.edges()) {
                let pair = (w[0].min(w[1]), w[0].max(w[1]));
                best = Some(best.map_or(pair, |p| p.min(pair)));
            }
        }
        return best;
    }
    let d = Degree::join_all(graph.rank(), paths.iter().map(|p| p.degree()));
    if refined_count(graph, paths, &d) <= REFINE_LIMIT {
        let mut owner: HashMap<Path, usize> = HashMap::new();
        let mut best: Option<(usize, usize)> = None;
        for (i, p) in paths.iter().enumerate() {
            let ext = d.checked_sub(p.degree()).expect("join dominates");
            for q in graph.extensions(p, &ext) {
                if let Some(&j) = owner.get(&q) {
                    let pair = (j.min(i), j.max(i));
                    best = Some(best.map_or(pair, |b| b.min(pair)));
                } else {
                    owner.insert(q, i);
                }
            }
        }
        return best;
    }
    for i in 0..paths.len() {
        for j in (i + 1)..paths.len() {
            if graph.has_common_extension(&paths[i], &paths[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Collapses full sibling families `{μf : f ∈ s(μ)Λ^{e_c}}` to `μ`,
/// scanning colors in increasing order until nothing changes, and sorts.
pub(crate) fn merge_families(graph: &KGraph, mut paths: Vec<Path>) -> Vec<Path> {
    'outer: loop {
        for c in 0..graph.rank() {
            let unit = Degree::unit(graph.rank(), c);
            let mut groups: BTreeMap<Path, Vec<usize>> = BTreeMap::new();
            for (i, p) in paths.iter().enumerate() {
                if p.degree().get(c) == 0 {
                    continue;
                }
                let parent_degree = p.degree().checked_sub(&unit).expect("positive");
                let (parent, _) = graph.factorize(p, &parent_degree).expect("in range");
                groups.entry(parent).or_default().push(i);
            }
            let mut remove = BTreeSet::new();
            let mut add = Vec::new();
            for (parent, members) in groups {
                if members.len() == graph.incoming(parent.source(), c).len() {
                    remove.extend(members);
                    add.push(parent);
                }
            }
            if !add.is_empty() {
                let mut next: Vec<Path> = paths
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !remove.contains(i))
                    .map(|(_, p)| p)
                    .collect();
                next.extend(add);
                paths = next;
                continue 'outer;
            }
        }
        break;
    }
    paths.sort();
    paths
}

impl CylinderSet {
    /// Validates pairwise disjointness and canonicalizes.
    pub fn new(graph: Arc<KGraph>, paths: Vec<Path>) -> Result<Self> {
        if let Some((i, j)) = find_overlap(&graph, &paths) {
            return Err(Error::OverlappingCylinders {
                first: graph.format_path(&paths[i]),
                second: graph.format_path(&paths[j]),
            });
        }
        let paths = merge_families(&graph, paths);
        Ok(CylinderSet { graph, paths })
    }

    /// Builds from paths known to be pairwise disjoint.
    pub(crate) fn from_disjoint(graph: Arc<KGraph>, paths: Vec<Path>) -> Self {
        let paths = merge_families(&graph, paths);
        CylinderSet { graph, paths }
    }

    pub fn empty(graph: Arc<KGraph>) -> Self {
        CylinderSet {
            graph,
            paths: Vec::new(),
        }
    }

    /// `Λ^∞`, as the union of all vertex cylinders.
    pub fn full(graph: Arc<KGraph>) -> Self {
        let paths = graph.vertices().map(|v| graph.vertex_path(v)).collect();
        CylinderSet { graph, paths }
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.graph
    }

    /// Canonical members, sorted.
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    fn join_degree(&self, other: &CylinderSet) -> Degree {
        Degree::join_all(
            self.graph.rank(),
            self.paths.iter().chain(&other.paths).map(|p| p.degree()),
        )
    }

    fn refined(&self, d: &Degree) -> BTreeSet<Path> {
        refine_to(&self.graph, &self.paths, d).into_iter().collect()
    }

    pub fn same_set(&self, other: &CylinderSet) -> bool {
        let d = self.join_degree(other);
        self.refined(&d) == other.refined(&d)
    }

    pub fn is_subset(&self, other: &CylinderSet) -> bool {
        let d = self.join_degree(other);
        self.refined(&d).is_subset(&other.refined(&d))
    }

    pub fn is_disjoint(&self, other: &CylinderSet) -> bool {
        let d = self.join_degree(other);
        self.refined(&d).is_disjoint(&other.refined(&d))
    }

    /// True when every infinite path extending `w` lies in the set; `w`
    /// need not be long enough to decide membership of a single point.
    pub fn contains_cylinder(&self, w: &Path) -> bool {
        let single = CylinderSet {
            graph: self.graph.clone(),
            paths: vec![w.clone()],
        };
        single.is_subset(self)
    }

    pub fn union(&self, other: &CylinderSet) -> CylinderSet {
        let d = self.join_degree(other);
        let all: BTreeSet<Path> = self.refined(&d).union(&other.refined(&d)).cloned().collect();
        CylinderSet::from_disjoint(self.graph.clone(), all.into_iter().collect())
    }

    pub fn intersection(&self, other: &CylinderSet) -> CylinderSet {
        let d = self.join_degree(other);
        let all: Vec<Path> = self.refined(&d).intersection(&other.refined(&d)).cloned().collect();
        CylinderSet::from_disjoint(self.graph.clone(), all)
    }

    pub fn difference(&self, other: &CylinderSet) -> CylinderSet {
        let d = self.join_degree(other);
        let all: Vec<Path> = self.refined(&d).difference(&other.refined(&d)).cloned().collect();
        CylinderSet::from_disjoint(self.graph.clone(), all)
    }

    pub fn complement(&self) -> CylinderSet {
        CylinderSet::full(self.graph.clone()).difference(self)
    }
}
