//! Path-pair tables: finite sums `Σ s_α s_β*` with orthogonal columns.
//!
//! A pair `(α, β)` is read as the partial bijection `βx ↦ αx` on infinite
//! paths. [`PisTable`] is an element of the inverse semigroup of such
//! partial isometries; [`UTable`] additionally has both columns complete
//! and is an element of the group of unitary tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cylinder::{find_overlap, refined_count, total_count, CylinderSet};
use crate::degree::Degree;
use crate::error::{Column, Error, Result};
use crate::graph::KGraph;
use crate::path::Path;

pub type Pair = (Path, Path);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PisTable {
    graph: Arc<KGraph>,
    /// Sorted by right path, then left path.
    pairs: Vec<Pair>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UTable {
    table: PisTable,
    certificate: Degree,
}

/// An element of the inverse semigroup, including its zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PisElement {
    Zero,
    Table(PisTable),
}

fn sort_pairs(pairs: &mut [Pair]) {
    pairs.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
}

fn same_graph(a: &Arc<KGraph>, b: &Arc<KGraph>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

fn column(pairs: &[Pair], side: Column) -> Vec<Path> {
    pairs
        .iter()
        .map(|(a, b)| match side {
            Column::Left => a.clone(),
            Column::Right => b.clone(),
        })
        .collect()
}

/// Whether the cylinders of an orthogonal family cover `Λ^∞`.
pub fn is_complete(graph: &KGraph, column: &[Path]) -> bool {
    let m = Degree::join_all(graph.rank(), column.iter().map(|p| p.degree()));
    refined_count(graph, column, &m) == total_count(graph, &m)
}

/// First path of `Λ^M` (canonical order) not covered by the family.
fn first_uncovered(graph: &KGraph, column: &[Path]) -> Option<Path> {
    let m = Degree::join_all(graph.rank(), column.iter().map(|p| p.degree()));
    let covered: BTreeSet<Path> = crate::cylinder::refine_to(graph, column, &m)
        .into_iter()
        .collect();
    graph.enumerate_all(&m).into_iter().find(|p| !covered.contains(p))
}

/// Validates a partial-isometry table.
pub fn make_pis(graph: &Arc<KGraph>, mut pairs: Vec<Pair>) -> Result<PisTable> {
    if pairs.is_empty() {
        return Err(Error::EmptyTable);
    }
    for (index, (a, b)) in pairs.iter().enumerate() {
        if a.source() != b.source() {
            return Err(Error::SourceMismatch { index });
        }
    }
    for side in [Column::Left, Column::Right] {
        if let Some((first, second)) = find_overlap(graph, &column(&pairs, side)) {
            return Err(Error::ColumnNotOrthogonal {
                column: side,
                first,
                second,
            });
        }
    }
    sort_pairs(&mut pairs);
    Ok(PisTable {
        graph: graph.clone(),
        pairs,
    })
}

/// Validates a unitary table: a partial isometry with both columns complete.
pub fn make_unitary(graph: &Arc<KGraph>, pairs: Vec<Pair>) -> Result<UTable> {
    UTable::from_pis(make_pis(graph, pairs)?)
}

impl PisTable {
    pub(crate) fn from_trusted(graph: Arc<KGraph>, mut pairs: Vec<Pair>) -> PisTable {
        sort_pairs(&mut pairs);
        pairs.dedup();
        PisTable { graph, pairs }
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.graph
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn left(&self) -> Vec<Path> {
        column(&self.pairs, Column::Left)
    }

    pub fn right(&self) -> Vec<Path> {
        column(&self.pairs, Column::Right)
    }

    /// `W*`: the columns swapped.
    pub fn adjoint(&self) -> PisTable {
        PisTable::from_trusted(
            self.graph.clone(),
            self.pairs.iter().map(|(a, b)| (b.clone(), a.clone())).collect(),
        )
    }

    /// Idempotents of the inverse semigroup are exactly the diagonal tables.
    pub fn is_idempotent(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    /// Join of the right-column degrees.
    pub fn right_degree(&self) -> Degree {
        Degree::join_all(self.graph.rank(), self.pairs.iter().map(|(_, b)| b.degree()))
    }

    /// Every pair `(α, β)` replaced by `{(αf, βf) : f ∈ s(β)Λ^{q - d(β)}}`.
    pub fn refine_right(&self, q: &Degree) -> Vec<Pair> {
        let g = &self.graph;
        let mut out = Vec::new();
        for (a, b) in &self.pairs {
            let ext = q.checked_sub(b.degree()).expect("refinement degree dominates");
            for f in g.enumerate(b.source(), &ext) {
                out.push((
                    g.compose(a, &f).expect("composable"),
                    g.compose(b, &f).expect("composable"),
                ));
            }
        }
        sort_pairs(&mut out);
        out
    }

    pub fn source_set(&self) -> CylinderSet {
        CylinderSet::from_disjoint(self.graph.clone(), self.right())
    }

    pub fn range_set(&self) -> CylinderSet {
        CylinderSet::from_disjoint(self.graph.clone(), self.left())
    }

    /// Collapses full sibling families; see [`UTable::reduce`].
    pub fn reduce(&self) -> PisTable {
        PisTable::from_trusted(self.graph.clone(), reduce_pairs(&self.graph, self.pairs.clone()))
    }

    /// Equality as partial isometries (equivalently, as bisections).
    pub fn equals(&self, other: &PisTable) -> Result<bool> {
        same_graph(&self.graph, &other.graph)?;
        let q = self.right_degree().join(&other.right_degree());
        Ok(self.refine_right(&q) == other.refine_right(&q))
    }
}

/// `Σ s_α s_β* · Σ s_γ s_δ* = Σ s_{αρ} s_{δσ}*` over `(ρ,σ) ∈ Λ^min(β,γ)`.
fn product_pairs(graph: &KGraph, u: &[Pair], v: &[Pair]) -> Vec<Pair> {
    let mut out = Vec::new();
    for (alpha, beta) in u {
        for (gamma, delta) in v {
            for (rho, sigma) in graph.lambda_min(beta, gamma) {
                out.push((
                    graph.compose(alpha, &rho).expect("composable"),
                    graph.compose(delta, &sigma).expect("composable"),
                ));
            }
        }
    }
    out
}

/// Product in the inverse semigroup; `Zero` when no pair survives.
pub fn semigroup_multiply(w1: &PisTable, w2: &PisTable) -> Result<PisElement> {
    same_graph(&w1.graph, &w2.graph)?;
    let pairs = product_pairs(&w1.graph, &w1.pairs, &w2.pairs);
    if pairs.is_empty() {
        Ok(PisElement::Zero)
    } else {
        Ok(PisElement::Table(PisTable::from_trusted(w1.graph.clone(), pairs)))
    }
}

impl PisElement {
    pub fn is_zero(&self) -> bool {
        matches!(self, PisElement::Zero)
    }

    pub fn table(&self) -> Option<&PisTable> {
        match self {
            PisElement::Zero => None,
            PisElement::Table(t) => Some(t),
        }
    }

    pub fn multiply(&self, other: &PisElement) -> Result<PisElement> {
        match (self, other) {
            (PisElement::Table(a), PisElement::Table(b)) => semigroup_multiply(a, b),
            _ => Ok(PisElement::Zero),
        }
    }

    pub fn adjoint(&self) -> PisElement {
        match self {
            PisElement::Zero => PisElement::Zero,
            PisElement::Table(t) => PisElement::Table(t.adjoint()),
        }
    }

    pub fn equals(&self, other: &PisElement) -> Result<bool> {
        match (self, other) {
            (PisElement::Zero, PisElement::Zero) => Ok(true),
            (PisElement::Table(a), PisElement::Table(b)) => a.equals(b),
            _ => Ok(false),
        }
    }
}

/// Greedy color-ascending collapse of full sibling families
/// `{(μf, νf) : f ∈ s(μ)Λ^{e_c}}` to `(μ, ν)`, repeated to a fixpoint.
pub(crate) fn reduce_pairs(graph: &KGraph, mut pairs: Vec<Pair>) -> Vec<Pair> {
    'outer: loop {
        for c in 0..graph.rank() {
            let unit = Degree::unit(graph.rank(), c);
            let mut families: BTreeMap<(Path, Path), Vec<usize>> = BTreeMap::new();
            for (i, (a, b)) in pairs.iter().enumerate() {
                if a.degree().get(c) == 0 || b.degree().get(c) == 0 {
                    continue;
                }
                let da = a.degree().checked_sub(&unit).expect("positive");
                let db = b.degree().checked_sub(&unit).expect("positive");
                let (mu, f) = graph.factorize(a, &da).expect("in range");
                let (nu, g) = graph.factorize(b, &db).expect("in range");
                if f == g {
                    families.entry((mu, nu)).or_default().push(i);
                }
            }
            let mut remove = BTreeSet::new();
            let mut add = Vec::new();
            for ((mu, nu), members) in families {
                if members.len() == graph.incoming(mu.source(), c).len() {
                    remove.extend(members);
                    add.push((mu, nu));
                }
            }
            if !add.is_empty() {
                let mut next: Vec<Pair> = pairs
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !remove.contains(i))
                    .map(|(_, p)| p)
                    .collect();
                next.extend(add);
                pairs = next;
                continue 'outer;
            }
        }
        break;
    }
    sort_pairs(&mut pairs);
    pairs
}

impl UTable {
    pub fn from_pis(table: PisTable) -> Result<UTable> {
        let g = table.graph.clone();
        for side in [Column::Left, Column::Right] {
            let col = column(&table.pairs, side);
            if !is_complete(&g, &col) {
                let uncovered = first_uncovered(&g, &col)
                    .map(|p| g.format_path(&p))
                    .unwrap_or_default();
                return Err(Error::NotComplete {
                    column: side,
                    uncovered,
                });
            }
        }
        Ok(UTable::from_complete(table))
    }

    fn from_complete(table: PisTable) -> UTable {
        let certificate = Degree::join_all(
            table.graph.rank(),
            table.pairs.iter().flat_map(|(a, b)| [a.degree(), b.degree()]),
        );
        UTable { table, certificate }
    }

    /// `{(v, v) : v ∈ Λ^0}`.
    pub fn identity(graph: &Arc<KGraph>) -> UTable {
        let pairs = graph
            .vertices()
            .map(|v| (graph.vertex_path(v), graph.vertex_path(v)))
            .collect();
        UTable::from_complete(PisTable::from_trusted(graph.clone(), pairs))
    }

    pub fn graph(&self) -> &Arc<KGraph> {
        &self.table.graph
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.table.pairs
    }

    pub fn len(&self) -> usize {
        self.table.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.pairs.is_empty()
    }

    pub fn as_pis(&self) -> &PisTable {
        &self.table
    }

    pub fn into_pis(self) -> PisTable {
        self.table
    }

    /// Join of every degree in both columns; both columns refined to this
    /// degree exhaust `Λ^certificate`.
    pub fn certificate(&self) -> &Degree {
        &self.certificate
    }

    pub fn multiply(&self, other: &UTable) -> Result<UTable> {
        same_graph(self.graph(), other.graph())?;
        let pairs = product_pairs(self.graph(), self.pairs(), other.pairs());
        Ok(UTable::from_complete(PisTable::from_trusted(
            self.graph().clone(),
            pairs,
        )))
    }

    pub fn inverse(&self) -> UTable {
        UTable {
            table: self.table.adjoint(),
            certificate: self.certificate.clone(),
        }
    }

    pub fn reduce(&self) -> UTable {
        UTable::from_complete(self.table.reduce())
    }

    pub fn equals(&self, other: &UTable) -> Result<bool> {
        self.table.equals(&other.table)
    }

    pub fn is_identity(&self) -> bool {
        self.equals(&UTable::identity(self.graph())).unwrap_or(false)
    }

    pub fn pow(&self, exponent: i64) -> UTable {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut acc = UTable::identity(self.graph());
        for _ in 0..exponent.unsigned_abs() {
            acc = acc.multiply(&base).expect("same graph").reduce();
        }
        acc
    }

    pub fn source_set(&self) -> CylinderSet {
        self.table.source_set()
    }

    pub fn range_set(&self) -> CylinderSet {
        self.table.range_set()
    }
}

pub fn multiply(u: &UTable, v: &UTable) -> Result<UTable> {
    u.multiply(v)
}

pub fn inverse(u: &UTable) -> UTable {
    u.inverse()
}

pub fn reduce(u: &UTable) -> UTable {
    u.reduce()
}

pub fn equals(u: &UTable, v: &UTable) -> Result<bool> {
    u.equals(v)
}
