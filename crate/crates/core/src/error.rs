use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("density id {0} is outside 1..=15")]
    UnknownDensity(u32),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("sample is not whitened: {0}")]
    NotWhitened(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("evaluation grid misses {0:e} of the target mass")]
    GridCoverage(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
