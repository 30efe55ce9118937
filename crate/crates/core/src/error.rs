use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A quadrature hit its subdivision cap before reaching tolerance.
    #[error("accuracy warning: {0}")]
    Accuracy(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("certificate construction failed: {0}")]
    Certificate(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A certified lower bound was violated by measured data. Either the
    /// solver run is unfaithful or a certificate constant is wrong.
    #[error("bound violated: {0}")]
    BoundViolated(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
