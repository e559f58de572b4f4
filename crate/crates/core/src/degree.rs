//! Degrees in `N^k`, ordered componentwise.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::Error;

/// A vector of non-negative edge counts, one per color.
///
/// The derived `Ord` is lexicographic and only used for canonical storage;
/// the partial order of the k-graph is [`Degree::le`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Degree(SmallVec<[u32; 4]>);

impl Degree {
    pub fn zero(rank: usize) -> Self {
        Degree(SmallVec::from_elem(0, rank))
    }

    /// The generator `e_color` (0-based color).
    pub fn unit(rank: usize, color: usize) -> Self {
        let mut d = Self::zero(rank);
        d.0[color] = 1;
        d
    }

    /// `(1, ..., 1)`.
    pub fn ones(rank: usize) -> Self {
        Degree(SmallVec::from_elem(1, rank))
    }

    pub fn from_slice(components: &[u32]) -> Self {
        Degree(SmallVec::from_slice(components))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, color: usize) -> u32 {
        self.0[color]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn max_component(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Degree) -> bool {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn meet(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<SmallVec<_>>>()
            .map(Degree)
    }

    pub fn scale(&self, factor: u32) -> Degree {
        Degree(self.0.iter().map(|c| c * factor).collect())
    }

    /// Join of an iterator of degrees; `zero(rank)` when empty.
    pub fn join_all<'a>(rank: usize, degrees: impl IntoIterator<Item = &'a Degree>) -> Degree {
        degrees
            .into_iter()
            .fold(Degree::zero(rank), |acc, d| acc.join(d))
    }

    /// Supports are disjoint: `self ∧ other = 0`.
    pub fn disjoint(&self, other: &Degree) -> bool {
        self.meet(other).is_zero()
    }
}

impl std::ops::Add for &Degree {
    type Output = Degree;

    fn add(self, rhs: &Degree) -> Degree {
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Degree {
    type Err = Error;

    /// Accepts `(1,0)`, `1,0` or a bare `3` for rank one.
    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(inner);
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<u32>())
            .collect::<Result<SmallVec<_>, _>>()
            .map_err(|e| Error::parse(0, format!("bad degree `{s}`: {e}")))?;
        if parts.is_empty() {
            return Err(Error::parse(0, format!("empty degree `{s}`")));
        }
        Ok(Degree(parts))
    }
}
