//! Finitely presented higher-rank graphs and the Thompson-like groups of
//! path-pair tables acting on their infinite paths.

pub mod action;
pub mod cylinder;
pub mod degree;
pub mod error;
pub mod extension;
pub mod graph;
pub mod lasso;
pub mod literal;
pub mod path;
pub mod periodicity;
pub mod presets;
pub mod rigid;
pub mod sample;
pub mod table;

pub use degree::Degree;
pub use error::{Column, Error, Result};
pub use graph::{Edge, EdgeId, KGraph, Presentation, RawGraph, ThetaEntry, VertexId};
pub use path::Path;
pub use cylinder::CylinderSet;
pub use table::{make_pis, make_unitary, semigroup_multiply, Pair, PisElement, PisTable, UTable};
pub use extension::{extend_to_unitary, extend_with, ExtendMethod, ExtendOptions};
pub use rigid::{i_mu, i_mu_preimage, in_rigid_stabilizer};
pub use periodicity::{
    flip_quotient, in_kernel_n, is_aperiodic, is_period, paths_equivalent, per_group_generators,
    refute_equivalence, PeriodCandidate, Verdict,
};
pub use action::{apply_lasso, apply_prefix, compress, fix_interior, orbit, transport};
pub use lasso::LassoPath;
pub use presets::Preset;
