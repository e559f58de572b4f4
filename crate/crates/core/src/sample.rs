//! Random generation of graphs, paths, families and tables for tests and
//! the example replays. All functions are deterministic given the RNG.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cylinder::CylinderSet;
use crate::degree::Degree;
use crate::graph::{KGraph, ThetaEntry, VertexId};
use crate::lasso::LassoPath;
use crate::path::Path;
use crate::table::{make_pis, Pair, PisTable, UTable};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A single-vertex 2-graph with a uniformly random `θ_12`.
pub fn random_two_graph(rng: &mut impl Rng, n1: usize, n2: usize) -> KGraph {
    let mut targets: Vec<(usize, usize)> = (1..=n1).flat_map(|s| (1..=n2).map(move |t| (s, t))).collect();
    targets.shuffle(rng);
    let theta = (1..=n1)
        .flat_map(|s| (1..=n2).map(move |t| (s, t)))
        .zip(targets)
        .map(|(from, to)| ThetaEntry { i: 1, j: 2, from, to })
        .collect();
    KGraph::single_vertex(&[n1, n2], theta).expect("any permutation is a valid 2-graph")
}

/// A uniformly random path in `vΛ^d`, built edge by edge.
pub fn random_path(graph: &KGraph, rng: &mut impl Rng, v: VertexId, d: &Degree) -> Path {
    let mut word = Vec::new();
    let mut cur = v;
    for (c, &count) in d.components().iter().enumerate() {
        for _ in 0..count {
            let e = *graph.incoming(cur, c).choose(rng).expect("source-free");
            word.push(e);
            cur = graph.edge(e).source;
        }
    }
    if word.is_empty() {
        graph.vertex_path(v)
    } else {
        graph.path_from_word(&word).expect("composable by construction")
    }
}

/// A random degree with every component at most `max`.
pub fn random_degree(rng: &mut impl Rng, rank: usize, max: u32) -> Degree {
    let parts: Vec<u32> = (0..rank).map(|_| rng.gen_range(0..=max)).collect();
    Degree::from_slice(&parts)
}

fn split_at(graph: &KGraph, family: &mut Vec<Path>, index: usize, color: usize) {
    let p = family.remove(index);
    family.extend(graph.extensions(&p, &Degree::unit(graph.rank(), color)));
}

/// A complete orthogonal family obtained from `Λ^0` by `splits` random
/// single-color splits.
pub fn random_complete_family(graph: &KGraph, rng: &mut impl Rng, splits: usize) -> Vec<Path> {
    let mut family: Vec<Path> = graph.vertices().map(|v| graph.vertex_path(v)).collect();
    for _ in 0..splits {
        let i = rng.gen_range(0..family.len());
        let c = rng.gen_range(0..graph.rank());
        split_at(graph, &mut family, i, c);
    }
    family.sort();
    family
}

fn by_source(family: &[Path]) -> BTreeMap<VertexId, Vec<Path>> {
    let mut out: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
    for p in family {
        out.entry(p.source()).or_default().push(p.clone());
    }
    out
}

fn pair_up(rng: &mut impl Rng, left: &[Path], right: &[Path]) -> Option<Vec<Pair>> {
    let (l, r) = (by_source(left), by_source(right));
    if l.len() != r.len() || l.iter().zip(&r).any(|(a, b)| a.0 != b.0 || a.1.len() != b.1.len()) {
        return None;
    }
    let mut pairs = Vec::new();
    for (v, ls) in l {
        let mut rs = r[&v].clone();
        rs.shuffle(rng);
        pairs.extend(ls.into_iter().zip(rs));
    }
    Some(pairs)
}

/// One random "atom": two complete families paired bijectively within
/// source classes.
pub fn random_atom(graph: &Arc<KGraph>, rng: &mut impl Rng, splits: usize) -> UTable {
    let g = &**graph;
    let branching: Vec<usize> = (0..g.rank())
        .filter(|&c| g.vertices().any(|v| g.incoming(v, c).len() >= 2))
        .collect();
    for _ in 0..20 {
        let (sl, sr) = (rng.gen_range(0..=splits), rng.gen_range(0..=splits));
        let mut left = random_complete_family(g, rng, sl);
        let mut right = random_complete_family(g, rng, sr);
        if g.is_single_vertex() && !branching.is_empty() {
            for _ in 0..200 {
                if left.len() == right.len() {
                    break;
                }
                let side = if left.len() < right.len() { &mut left } else { &mut right };
                let i = rng.gen_range(0..side.len());
                let c = *branching.choose(rng).expect("nonempty");
                split_at(g, side, i, c);
            }
        }
        if let Some(pairs) = pair_up(rng, &left, &right) {
            return UTable::from_pis(make_pis(graph, pairs).expect("orthogonal families"))
                .expect("complete families");
        }
    }
    let family = random_complete_family(g, rng, splits);
    let pairs = pair_up(rng, &family, &family).expect("same family");
    UTable::from_pis(make_pis(graph, pairs).expect("orthogonal")).expect("complete")
}

/// A random unitary: a reduced product of `atoms` random atoms.
pub fn random_unitary(graph: &Arc<KGraph>, rng: &mut impl Rng, atoms: usize, splits: usize) -> UTable {
    let mut acc = UTable::identity(graph);
    for _ in 0..atoms {
        let a = random_atom(graph, rng, splits);
        acc = acc.multiply(&a).expect("same graph").reduce();
    }
    acc
}

/// A random partial isometry: a nonempty random subset of the pairs of a
/// random unitary.
pub fn random_pis(graph: &Arc<KGraph>, rng: &mut impl Rng, atoms: usize, splits: usize) -> PisTable {
    let u = random_unitary(graph, rng, atoms, splits);
    let mut pairs: Vec<Pair> = u.pairs().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
    if pairs.is_empty() {
        pairs.push(u.pairs().choose(rng).expect("nonempty").clone());
    }
    make_pis(graph, pairs).expect("subsets of orthogonal columns are orthogonal")
}

/// A random element of the kernel on a flip graph: each member of a random
/// complete family is paired with a recoloring that keeps its index word.
pub fn random_kernel_element(graph: &Arc<KGraph>, rng: &mut impl Rng, splits: usize) -> UTable {
    let g = &**graph;
    assert!(g.is_flip(), "kernel sampling needs a flip graph");
    let family = random_complete_family(g, rng, splits);
    let pairs = family
        .iter()
        .map(|beta| (recolor(g, rng, beta), beta.clone()))
        .collect();
    UTable::from_pis(make_pis(graph, pairs).expect("equal cylinders are orthogonal"))
        .expect("equal cylinders are complete")
}

fn recolor(graph: &KGraph, rng: &mut impl Rng, p: &Path) -> Path {
    if p.is_vertex() {
        return p.clone();
    }
    let mut counts = vec![0usize; graph.rank()];
    for _ in 0..p.len() {
        counts[rng.gen_range(0..graph.rank())] += 1;
    }
    let colors = counts.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat(c).take(n));
    let word: Vec<_> = p
        .edges()
        .iter()
        .zip(colors)
        .map(|(&e, c)| graph.colored_edge(c, graph.edge(e).index - 1))
        .collect();
    graph.path_from_word(&word).expect("single vertex words compose")
}

/// A random nonempty clopen set; proper (not the whole space) when
/// `proper` is set and the graph has more than one point.
pub fn random_cylinder_set(graph: &Arc<KGraph>, rng: &mut impl Rng, splits: usize, proper: bool) -> CylinderSet {
    loop {
        let family = random_complete_family(graph, rng, splits.max(1));
        let chosen: Vec<Path> = family.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
        if chosen.is_empty() || (proper && chosen.len() == family.len()) {
            continue;
        }
        return CylinderSet::new(graph.clone(), chosen).expect("subfamily of an orthogonal family");
    }
}

/// A random eventually periodic path.
pub fn random_lasso(graph: &KGraph, rng: &mut impl Rng, max_head: usize, max_cycle: usize) -> LassoPath {
    let c = Degree::ones(graph.rank());
    if graph.is_single_vertex() {
        let head_len = rng.gen_range(0..=max_head);
        let cycle_len = rng.gen_range(1..=max_cycle.max(1));
        let mut block = || random_path(graph, rng, 0, &c);
        let head: Vec<Path> = (0..head_len).map(|_| block()).collect();
        let cycle: Vec<Path> = (0..cycle_len).map(|_| block()).collect();
        return LassoPath::from_blocks(graph, head, cycle).expect("single-vertex blocks compose");
    }
    // Rank one: walk until a vertex repeats.
    let start = rng.gen_range(0..graph.vertex_count()) as VertexId;
    let mut visited = vec![start];
    let mut edges = Vec::new();
    loop {
        let cur = *visited.last().expect("nonempty");
        let e = *graph.incoming(cur, 0).choose(rng).expect("source-free");
        let next = graph.edge(e).source;
        edges.push(e);
        if let Some(pos) = visited.iter().position(|&v| v == next) {
            let blocks: Vec<Path> = edges.iter().map(|&e| graph.path_from_word(&[e]).expect("edge")).collect();
            let (head, cycle) = blocks.split_at(pos);
            return LassoPath::from_blocks(graph, head.to_vec(), cycle.to_vec()).expect("walk composes");
        }
        visited.push(next);
    }
}
