//! Completing a partial isometry to a unitary table.
//!
//! Given orthogonal families `μ_1..μ_n` (left) and `ν_1..ν_n` (right) on a
//! single-vertex graph, let `M = Σ d(μ_i)`, `N = Σ d(ν_i)` and
//!
//! ```text
//! Ω = Λ^M \ ∪ μ_i Λ^{M-d(μ_i)} = {ω_1..ω_s},   Γ = Λ^N \ ∪ ν_i Λ^{N-d(ν_i)} = {γ_1..γ_t}.
//! ```
//!
//! When `s, t ≥ n+1` the leftover columns are padded to equal length
//!
//! ```text
//! μ_1..μ_n, ω_1Λ^{M-d(μ_1)}..ω_nΛ^{M-d(μ_n)}, ω_{n+1}Λ^N, ω_{n+2}..ω_s
//! ν_1..ν_n, γ_1Λ^{N-d(ν_1)}..γ_nΛ^{N-d(ν_n)}, γ_{n+1}Λ^M, γ_{n+2}..γ_t
//! ```
//!
//! giving `𝐧^M + 𝐧^N − 1` entries per column, and the padding is paired
//! in order. Outside that regime the canonical complements are balanced by
//! single-color splits and paired in canonical order.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::cylinder::{refine_to, CylinderSet};
use crate::degree::Degree;
use crate::error::{Column, Error, Result};
use crate::graph::KGraph;
use crate::path::Path;
use crate::table::{make_pis, make_unitary, Pair, UTable};

/// Options for [`extend_to_unitary`].
#[derive(Debug, Clone, Default)]
pub struct ExtendOptions {
    /// Maximum number of single-color splits in the balancing fallback;
    /// defaults to `𝐧^c · (s + t + n)`.
    pub budget: Option<usize>,
}

/// Which construction produced an extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendMethod {
    AlreadyUnitary,
    Interleaved,
    Balanced,
}

pub fn extend_to_unitary(graph: &Arc<KGraph>, pairs: Vec<Pair>) -> Result<UTable> {
    extend_with(graph, pairs, &ExtendOptions::default()).map(|(u, _)| u)
}

pub fn extend_with(
    graph: &Arc<KGraph>,
    pairs: Vec<Pair>,
    options: &ExtendOptions,
) -> Result<(UTable, ExtendMethod)> {
    if !graph.is_single_vertex() {
        return Err(Error::MultiVertexUnsupported);
    }
    let pis = make_pis(graph, pairs)?;
    if let Ok(u) = UTable::from_pis(pis.clone()) {
        return Ok((u, ExtendMethod::AlreadyUnitary));
    }
    let input: Vec<Pair> = pis.pairs().to_vec();
    let mus = pis.left();
    let nus = pis.right();
    let rank = graph.rank();
    let n = input.len();

    let sum = |ps: &[Path]| ps.iter().fold(Degree::zero(rank), |acc, p| &acc + p.degree());
    let m_deg = sum(&mus);
    let n_deg = sum(&nus);
    let leftovers = |ps: &[Path], d: &Degree| {
        let covered: BTreeSet<Path> = refine_to(graph, ps, d).into_iter().collect();
        graph
            .enumerate(0, d)
            .into_iter()
            .filter(|p| !covered.contains(p))
            .collect::<Vec<_>>()
    };
    let omega = leftovers(&mus, &m_deg);
    let gamma = leftovers(&nus, &n_deg);
    match (omega.is_empty(), gamma.is_empty()) {
        (true, false) => return Err(Error::NotExtendable { complete: Column::Left }),
        (false, true) => return Err(Error::NotExtendable { complete: Column::Right }),
        _ => {}
    }

    if omega.len() > n && gamma.len() > n {
        let pad = |given: &[Path], rest: &[Path], total: &Degree, other: &Degree| {
            let mut out = Vec::new();
            for (w, p) in rest.iter().zip(given) {
                let ext = total.checked_sub(p.degree()).expect("sum dominates");
                out.extend(graph.extensions(w, &ext));
            }
            out.extend(graph.extensions(&rest[n], other));
            out.extend(rest[n + 1..].iter().cloned());
            out
        };
        let left = pad(&mus, &omega, &m_deg, &n_deg);
        let right = pad(&nus, &gamma, &n_deg, &m_deg);
        debug_assert_eq!(left.len(), right.len());
        let mut all = input;
        all.extend(left.into_iter().zip(right));
        return Ok((make_unitary(graph, all)?, ExtendMethod::Interleaved));
    }

    let mut left = CylinderSet::full(graph.clone())
        .difference(&pis.range_set())
        .paths()
        .to_vec();
    let mut right = CylinderSet::full(graph.clone())
        .difference(&pis.source_set())
        .paths()
        .to_vec();
    let counts = graph.color_counts();
    let block: usize = counts.iter().product();
    let budget = options
        .budget
        .unwrap_or(block.saturating_mul(left.len() + right.len() + n));
    let moves = balance_schedule(&counts, left.len() as i64 - right.len() as i64, budget)
        .ok_or(Error::BalancingFailed { budget })?;
    for (side, color) in moves {
        let list = match side {
            Column::Left => &mut left,
            Column::Right => &mut right,
        };
        let first = list.remove(0);
        list.extend(graph.extensions(&first, &Degree::unit(rank, color)));
        list.sort();
    }
    let mut all = input;
    all.extend(left.into_iter().zip(right));
    Ok((make_unitary(graph, all)?, ExtendMethod::Balanced))
}

/// Shortest list of splits `(side, color)` bringing `diff = |left| - |right|`
/// to zero; a left split adds `n_c - 1`, a right split subtracts it.
fn balance_schedule(counts: &[usize], diff: i64, budget: usize) -> Option<Vec<(Column, usize)>> {
    let steps: Vec<(Column, usize, i64)> = [Column::Left, Column::Right]
        .into_iter()
        .flat_map(|side| {
            counts.iter().enumerate().filter(|(_, &n)| n >= 2).map(move |(c, &n)| {
                let step = n as i64 - 1;
                (side, c, if side == Column::Left { step } else { -step })
            })
        })
        .collect();
    let window = diff.abs() + steps.iter().map(|s| s.2.abs()).max().unwrap_or(0);
    let mut parent: HashMap<i64, (i64, Column, usize)> = HashMap::new();
    let mut depth: HashMap<i64, usize> = HashMap::from([(diff, 0)]);
    let mut queue = VecDeque::from([diff]);
    while let Some(x) = queue.pop_front() {
        if x == 0 {
            let mut out = Vec::new();
            let mut cur = 0;
            while let Some(&(prev, side, c)) = parent.get(&cur) {
                out.push((side, c));
                cur = prev;
                if cur == diff {
                    break;
                }
            }
            out.reverse();
            return Some(out);
        }
        let dx = depth[&x];
        if dx >= budget {
            continue;
        }
        for &(side, c, step) in &steps {
            let y = x + step;
            if y.abs() > window || depth.contains_key(&y) {
                continue;
            }
            depth.insert(y, dx + 1);
            parent.insert(y, (x, side, c));
            queue.push_back(y);
        }
    }
    None
}
