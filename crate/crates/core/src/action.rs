//! The action of unitary tables on infinite paths by prefix exchange, and
//! constructive dynamical witnesses.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cylinder::CylinderSet;
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::extension::extend_to_unitary;
use crate::graph::KGraph;
use crate::lasso::LassoPath;
use crate::path::Path;
use crate::table::{make_pis, PisTable, UTable};

/// Maps a finite prefix through the pair `(α, β)` whose `β` begins `w`:
/// `βx ↦ αx`. Every `w` of degree at least the right-column join lies in
/// exactly one `Z(β)`.
pub fn apply_prefix(u: &UTable, w: &Path) -> Result<Path> {
    let g = u.graph();
    for (alpha, beta) in u.pairs() {
        if beta.range() == w.range() && beta.degree().le(w.degree()) {
            let (head, tail) = g.factorize(w, beta.degree())?;
            if head == *beta {
                return g.compose(alpha, &tail);
            }
        }
    }
    Err(Error::PrefixTooShort {
        required: u.as_pis().right_degree(),
    })
}

/// Exact image of an eventually periodic path.
pub fn apply_lasso(u: &UTable, x: &LassoPath) -> Result<LassoPath> {
    let g = u.graph();
    for (alpha, beta) in u.pairs() {
        if beta.range() == x.range() && x.starts_with(g, beta) {
            return x.shift(g, beta.degree()).prepend(g, alpha);
        }
    }
    // Unreachable for a complete right column.
    Err(Error::NotComplete {
        column: crate::error::Column::Right,
        uncovered: x.format(g),
    })
}

/// Union of `Z(α)` over the diagonal pairs of the reduced form.
pub fn fix_interior(u: &UTable) -> CylinderSet {
    let diagonal = u
        .reduce()
        .pairs()
        .iter()
        .filter(|(a, b)| a == b)
        .map(|(a, _)| a.clone())
        .collect();
    CylinderSet::from_disjoint(u.graph().clone(), diagonal)
}

/// `{w ∈ Λ^m : apply_prefix(U, w) = w}`.
pub fn fixed_prefixes(u: &UTable, m: &Degree) -> Result<Vec<Path>> {
    let mut out = Vec::new();
    for w in u.graph().enumerate_all(m) {
        if apply_prefix(u, &w)? == w {
            out.push(w);
        }
    }
    Ok(out)
}

/// All images of `x` under words of length at most `radius` in the
/// generators and their inverses, sorted.
pub fn orbit(x: &LassoPath, generators: &[UTable], radius: usize) -> Result<Vec<LassoPath>> {
    let mut all: Vec<UTable> = generators.to_vec();
    all.extend(generators.iter().map(|u| u.inverse()));
    let mut seen = BTreeSet::from([x.clone()]);
    let mut frontier = vec![x.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for y in &frontier {
            for u in &all {
                let z = apply_lasso(u, y)?;
                if seen.insert(z.clone()) {
                    next.push(z);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(seen.into_iter().collect())
}

/// Degrees ordered by total, then lexicographically, starting at zero.
fn degrees_by_total(rank: usize) -> impl Iterator<Item = Degree> {
    (0u32..).flat_map(move |total| {
        let mut level = Vec::new();
        compositions(rank, total, &mut Vec::new(), &mut level);
        level.into_iter()
    })
}

fn compositions(rank: usize, total: u32, cur: &mut Vec<u32>, out: &mut Vec<Degree>) {
    if cur.len() + 1 == rank {
        cur.push(total);
        out.push(Degree::from_slice(cur));
        cur.pop();
        return;
    }
    for first in (0..=total).rev() {
        cur.push(first);
        compositions(rank, total - first, cur, out);
        cur.pop();
    }
}

/// A table `g` with `g·Y ⊆ Z(target)`: the members `μ_i` of `Y` are sent to
/// `target·ν_i` for the lexicographically first `ν_i` of the least degree
/// with enough paths, and the result is completed to a unitary.
pub fn compress(y: &CylinderSet, target: &Path) -> Result<UTable> {
    let g = y.graph();
    if !g.is_single_vertex() {
        return Err(Error::MultiVertexUnsupported);
    }
    if y.is_empty() {
        return Err(Error::EmptyCylinderSet);
    }
    if y.is_full() {
        return Err(Error::FullSpaceNotCompressible);
    }
    let mus = y.paths();
    let n = mus.len() as u128;
    // A vertex target with exactly n slots would make the left column
    // complete while the right one is not.
    let need = if target.is_vertex() { n + 1 } else { n };
    let d = degrees_by_total(g.rank())
        .take_while(|d| d.total() <= 64)
        .find(|d| g.count_paths(target.source(), d) >= need)
        .ok_or(Error::InsufficientRoom)?;
    let nus = g.enumerate(target.source(), &d);
    let pairs = nus
        .iter()
        .zip(mus)
        .map(|(nu, mu)| Ok((g.compose(target, nu)?, mu.clone())))
        .collect::<Result<Vec<_>>>()?;
    extend_to_unitary(g, pairs).map_err(|e| Error::ExtensionFailed(Box::new(e)))
}

/// Replaces `ν` by its extensions of the least degree that gives at least
/// two of them, if any exists within `limit` steps.
fn split_once(g: &KGraph, nu: &Path, limit: u32) -> Option<Vec<Path>> {
    for len in 1..=limit {
        for c in 0..g.rank() {
            let d = Degree::unit(g.rank(), c).scale(len);
            if g.count_paths(nu.source(), &d) >= 2 {
                return Some(g.extensions(nu, &d));
            }
        }
    }
    None
}

/// A partial isometry `U` with `s(U) = A` and `r(U) ⊆ B`: `B` is split
/// until it has at least as many pieces as `A`, and each `μ_i` is sent to
/// `ν_i λ_i` with `λ_i` a connecting path from `s(ν_i)` to `s(μ_i)`.
pub fn transport(a: &CylinderSet, b: &CylinderSet) -> Result<PisTable> {
    let g: &Arc<KGraph> = a.graph();
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mus = a.paths();
    let mut nus: Vec<Path> = b.paths().to_vec();
    let limit = g.vertex_count() as u32 + 1;
    while nus.len() < mus.len() {
        let pos = (0..nus.len())
            .find_map(|i| split_once(g, &nus[i], limit).map(|kids| (i, kids)))
            .ok_or(Error::InsufficientRoom)?;
        let (i, kids) = pos;
        nus.splice(i..=i, kids);
    }
    let mut pairs = Vec::with_capacity(mus.len());
    for (mu, nu) in mus.iter().zip(&nus) {
        let lambda = g
            .connecting_path(nu.source(), mu.source())
            .ok_or(Error::NotStronglyConnected)?;
        pairs.push((g.compose(nu, &lambda)?, mu.clone()));
    }
    make_pis(g, pairs)
}
