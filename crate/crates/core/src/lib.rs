//! Computational theory of `POPI_n(Y)`, the semigroup of injective
//! orientation-preserving partial transformations of the chain `{1, ..., n}`
//! whose image lies inside a fixed nonempty subset `Y`.
//!
//! Every structural result has two routes here: a closed-form
//! characterization and an exhaustive oracle working on the finite semigroup
//! itself. The test suites check that both routes agree.
//!
//! Transformations act on the right, so products read left to right:
//! `x(ab) = (xa)b`.

pub mod dihedral;
pub mod error;
pub mod green;
pub mod points;
pub mod rank;
pub mod selftest;
pub mod semigroup;
pub mod transform;

pub use error::{Error, Result};
pub use points::{PointSet, MAX_N};
pub use semigroup::{cardinality_formula, closure, enumerate, rank_layer, ElementSet, RangeContext};
pub use transform::{is_cyclic, PartialInjection, Point, PointSequence};

/// Version string embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
