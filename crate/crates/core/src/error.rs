use std::fmt;

use thiserror::Error;

use crate::degree::Degree;

/// Which column of a path-pair table an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    /// Range words `α_i`.
    Left,
    /// Source words `β_i`.
    Right,
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Left => write!(f, "left"),
            Column::Right => write!(f, "right"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error (line {line}): {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} receives no edge of color {color}")]
    NotSourceFree { vertex: String, color: usize },

    #[error("theta {i} {j} is not a bijection on index pairs")]
    ThetaNotBijective { i: usize, j: usize },

    #[error("cube condition fails for colors {colors:?} at edge indices {indices:?}")]
    CubeConditionFailed {
        colors: [usize; 3],
        indices: [usize; 3],
    },

    #[error("edge {edge} references unknown vertex {vertex}")]
    DanglingEdge { edge: String, vertex: String },

    #[error("paths are not composable")]
    NotComposable,

    #[error("degree out of range")]
    DegreeOutOfRange,

    #[error("pair {index} has different sources on its two sides")]
    SourceMismatch { index: usize },

    #[error("{column} column is not orthogonal: entries {first} and {second} overlap")]
    ColumnNotOrthogonal {
        column: Column,
        first: usize,
        second: usize,
    },

    #[error("{column} column is not complete: {uncovered} is not covered")]
    NotComplete { column: Column, uncovered: String },

    #[error("cylinders {first} and {second} overlap")]
    OverlappingCylinders { first: String, second: String },

    #[error("a table needs at least one pair")]
    EmptyTable,

    #[error("operands belong to different graphs")]
    GraphMismatch,

    #[error("no unitary extension exists: the {complete} column is already complete")]
    NotExtendable { complete: Column },

    #[error("could not balance leftover columns within {budget} splits")]
    BalancingFailed { budget: usize },

    #[error("operation requires a single-vertex graph")]
    MultiVertexUnsupported,

    #[error("operation is not supported for this graph class")]
    UnsupportedGraphClass,

    #[error("graph is not a flip graph")]
    NotFlipGraph,

    #[error("internal consistency failure: quotient image is not a unitary ({0})")]
    IllFormedImage(String),

    #[error("prefix too short: degree at least {required} is required")]
    PrefixTooShort { required: Degree },

    #[error("the full space is not compressible")]
    FullSpaceNotCompressible,

    #[error("the cylinder set is empty")]
    EmptyCylinderSet,

    #[error("extension failed: {0}")]
    ExtensionFailed(Box<Error>),

    #[error("graph is not strongly connected")]
    NotStronglyConnected,

    #[error("empty input")]
    EmptyInput,

    #[error("target cylinders cannot be subdivided into enough pieces")]
    InsufficientRoom,

    #[error("bad parameters: {0}")]
    BadParameters(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Stable variant name, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "Parse",
            Error::NotSourceFree { .. } => "NotSourceFree",
            Error::ThetaNotBijective { .. } => "ThetaNotBijective",
            Error::CubeConditionFailed { .. } => "CubeConditionFailed",
            Error::DanglingEdge { .. } => "DanglingEdge",
            Error::NotComposable => "NotComposable",
            Error::DegreeOutOfRange => "DegreeOutOfRange",
            Error::SourceMismatch { .. } => "SourceMismatch",
            Error::ColumnNotOrthogonal { .. } => "ColumnNotOrthogonal",
            Error::NotComplete { .. } => "NotComplete",
            Error::OverlappingCylinders { .. } => "OverlappingCylinders",
            Error::EmptyTable => "EmptyTable",
            Error::GraphMismatch => "GraphMismatch",
            Error::NotExtendable { .. } => "NotExtendable",
            Error::BalancingFailed { .. } => "BalancingFailed",
            Error::MultiVertexUnsupported => "MultiVertexUnsupported",
            Error::UnsupportedGraphClass => "UnsupportedGraphClass",
            Error::NotFlipGraph => "NotFlipGraph",
            Error::IllFormedImage(_) => "IllFormedImage",
            Error::PrefixTooShort { .. } => "PrefixTooShort",
            Error::FullSpaceNotCompressible => "FullSpaceNotCompressible",
            Error::EmptyCylinderSet => "EmptyCylinderSet",
            Error::ExtensionFailed(_) => "ExtensionFailed",
            Error::NotStronglyConnected => "NotStronglyConnected",
            Error::EmptyInput => "EmptyInput",
            Error::InsufficientRoom => "InsufficientRoom",
            Error::BadParameters(_) => "BadParameters",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
