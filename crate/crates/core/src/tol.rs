//! Tolerance configuration shared by every numerical decision in the crate.

/// Tolerances used by frame orthogonality checks, rank decisions,
/// positive-semidefiniteness tests and entrywise equality.
///
/// `tol_rank` is relative (scaled by the largest singular value of the
/// matrix being ranked); the other three are absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Orthonormality of frames: `||Q^* Q - I|| <= tol_ortho`.
    pub tol_ortho: f64,
    /// Relative rank threshold: singular values below
    /// `tol_rank * sigma_max` count as zero.
    pub tol_rank: f64,
    /// Slack for positive-semidefiniteness: `lambda_min >= beta - tol_psd`.
    pub tol_psd: f64,
    /// Entrywise / spectral-norm equality of matrices.
    pub tol_eq: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_ortho: 1e-10,
            tol_rank: 1e-9,
            tol_psd: 1e-9,
            tol_eq: 1e-9,
        }
    }
}

impl ToleranceConfig {
    /// A looser profile for discretized or fuzz-generated instances.
    pub fn loose() -> Self {
        Self {
            tol_ortho: 1e-8,
            tol_rank: 1e-8,
            tol_psd: 1e-7,
            tol_eq: 1e-7,
        }
    }
}
