use thiserror::Error;

/// Errors produced by graph construction, solving, ingestion, and metrics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("initialization failed: {0}")]
    Initialization(String),
    #[error("degenerate cluster: {0}")]
    DegenerateCluster(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("estimation failed: {0}")]
    Estimation(String),
    #[error("degenerate synthetic spec: {0}")]
    DegenerateSpec(String),
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
