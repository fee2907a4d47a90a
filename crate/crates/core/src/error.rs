use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("code distance must be odd and at least 3, got {0}")]
    InvalidDistance(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration over 2^{generators} group elements exceeds the supported limit")]
    SizeLimit { generators: usize },

    /// A matrix that must be inverted during the covariance update is
    /// numerically singular.
    #[error("singular covariance update in column {column} (condition number {condition:.3e})")]
    Singular { column: usize, condition: f64 },

    #[error("internal numerical error: {0}")]
    Numerical(String),

    /// All amplitudes of a matrix product state vanished.
    #[error("degenerate (zero) matrix product state")]
    DegenerateState,

    #[error("decoder failure: {0}")]
    DecoderFailure(String),

    #[error("perfect matching requires an even node count, got {0}")]
    OddNodeCount(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
