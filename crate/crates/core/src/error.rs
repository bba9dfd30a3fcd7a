use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ray matrix is not unimodular: AD - BC = {det}")]
    NotUnimodular { det: f64 },

    #[error("(s, r) pair violates |s|^2 - |r|^2 = 1: got {value}")]
    NotNormalizedPair { value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Fresnel kernel is degenerate for |B| = {0:e}; use the B -> 0 limit")]
    DegenerateKernel(f64),

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureTolerance { estimate: f64, tolerance: f64 },

    #[error("Wigner function has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
