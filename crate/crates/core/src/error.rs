use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid parameters: {0}")]
    InvalidGrid(String),

    #[error("coordinate {value} at position {index} is out of range [0, {n})")]
    CoordinateOutOfRange { index: usize, value: i64, n: u64 },

    #[error("point has {got} coordinates but the grid has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("value {value} is out of range [0, {size})")]
    RankOutOfRange { value: u64, size: u64 },

    #[error("point sets live in different grids")]
    GridMismatch,

    #[error("seed set is not a Sidon set")]
    NotSidon,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{0}")]
    TooLarge(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
