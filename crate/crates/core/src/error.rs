use thiserror::Error;

/// Largest basis any builder will materialize.
pub const MAX_DIM: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid sector: L = {len}, n = {count} ({reason})")]
    InvalidSector { len: usize, count: usize, reason: &'static str },

    #[error("configuration {0:?} does not belong to the sector")]
    ConfigOutsideSector(Vec<i64>),

    #[error("dimension {dim} exceeds the guard of {limit}")]
    DimensionGuard { dim: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid bracket: {0}")]
    InvalidBracket(String),

    #[error("bond {bond} out of range for a chain of {len} sites")]
    BondOutOfRange { bond: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("theta = {theta} lies outside the open zone (-pi/{n}, pi/{n})")]
    ThetaOutOfZone { theta: f64, n: usize },

    #[error("Bethe solution is not normalizable: |tail product| = {ratio} at k = {k}")]
    NotNormalizable { k: usize, ratio: f64 },

    #[error("closed-form energy {closed} disagrees with telescoped sum {summed}")]
    EnergyMismatch { closed: f64, summed: f64 },

    #[error("Gram matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("{method} did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { method: &'static str, iterations: usize, residual: f64 },

    #[error("operator is not {0}")]
    Symmetry(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects dimensions above [`MAX_DIM`].
pub(crate) fn guard_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        Err(Error::DimensionGuard { dim, limit: MAX_DIM })
    } else {
        Ok(())
    }
}
