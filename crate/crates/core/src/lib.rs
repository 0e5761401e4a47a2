//! Operator-theoretic toolkit for partially-defined linear operators on
//! finite-dimensional complex Hilbert spaces.
//!
//! The ambient space is coordinate space `C^n` with the standard inner
//! product. Operators may be defined on a proper subspace (given by an
//! orthonormal frame) and the crate computes numerical ranges against
//! convex polyhedral regions of the plane, decides Omega-maximality,
//! applies Cayley-type transforms, verifies semigroup growth bounds and
//! models sesquilinear forms at desk scale.

pub mod error;
pub mod forms;
pub mod hilbert;
pub mod io;
mod lp;
pub mod maximality;
pub mod numrange;
pub mod regions;
pub mod semigroups;
pub mod suites;
pub mod tol;
pub mod transforms;
pub mod zoo;

pub use error::Error;
pub use hilbert::{CMat, CVec, PartialOperator, Subspace, C64};
pub use regions::Region;
pub use tol::ToleranceConfig;

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
