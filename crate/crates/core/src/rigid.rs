//! The embeddings `I_μ(A) = s_μ A s_μ* + (I − s_μ s_μ*)` and rigid
//! stabilizers of clopen sets.

use std::sync::Arc;

use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};
use crate::graph::KGraph;
use crate::path::Path;
use crate::table::{make_pis, make_unitary, PisElement, UTable};

/// `{(μα_i, μβ_i)} ∪ {(ν, ν) : ν ∈ Λ^{d(μ)}, ν ≠ μ}` for `A = {(α_i, β_i)}`.
pub fn i_mu(mu: &Path, a: &UTable) -> Result<UTable> {
    let g: &Arc<KGraph> = a.graph();
    if !g.is_single_vertex() {
        return Err(Error::MultiVertexUnsupported);
    }
    let mut pairs = Vec::with_capacity(a.len());
    for (alpha, beta) in a.pairs() {
        pairs.push((g.compose(mu, alpha)?, g.compose(mu, beta)?));
    }
    for nu in g.enumerate(mu.range(), mu.degree()) {
        if nu != *mu {
            pairs.push((nu.clone(), nu));
        }
    }
    make_unitary(g, pairs)
}

/// Recovers `A` from `U = I_μ(A)` as `s_μ* U s_μ`.
pub fn i_mu_preimage(mu: &Path, u: &UTable) -> Result<UTable> {
    let g = u.graph();
    let w = PisElement::Table(make_pis(g, vec![(mu.clone(), g.vertex_path(mu.source()))])?);
    let conj = w.adjoint().multiply(&PisElement::Table(u.as_pis().clone()))?.multiply(&w)?;
    match conj {
        PisElement::Zero => Err(Error::EmptyTable),
        PisElement::Table(t) => UTable::from_pis(t),
    }
}

/// Whether `U` fixes everything outside `S`: every non-diagonal pair of the
/// reduced form has its right cylinder inside `S`.
pub fn in_rigid_stabilizer(u: &UTable, s: &CylinderSet) -> bool {
    let g = u.graph();
    u.reduce()
        .pairs()
        .iter()
        .filter(|(a, b)| a != b)
        .all(|(_, b)| CylinderSet::from_disjoint(g.clone(), vec![b.clone()]).is_subset(s))
}
