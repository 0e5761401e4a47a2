//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: String,
    },

    #[error("matrix is not Hermitian (deviation {deviation:.3e} > tol {tol:.3e})")]
    NonHermitian { deviation: f64, tol: f64 },

    #[error("operator domain is empty")]
    EmptyDomain,

    #[error("operation requires a total operator (domain = C^n)")]
    NotTotal,

    #[error("operation requires a proper-domain operator, but the operator is total")]
    AlreadyTotal,

    #[error("region is empty or improper: {0}")]
    BadRegion(String),

    #[error("numerical range is not contained in the region ({0})")]
    ContainmentViolated(String),

    #[error("singular or near-singular operator: {0}")]
    Singular(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("input schema violation: {0}")]
    Schema(String),

    #[error("construction failed after {retries} retries: {context}")]
    RetriesExhausted { retries: usize, context: String },
}
