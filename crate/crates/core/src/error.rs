use thiserror::Error;

/// Errors shared by every layer of the toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is rank deficient: rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("precision budget exceeded: {0}")]
    Precision(String),
    #[error("combinatorial budget exceeded: {0}")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for this error: 1 for bad input, 3 for exhausted budgets.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precision(_) | Error::Budget(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
