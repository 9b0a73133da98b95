use thiserror::Error;

/// Errors produced by partition construction, enumeration and I/O.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be odd and at least 3")]
    InvalidModulus(i64),

    #[error("rank {rank}: computed last entry {value} is already used")]
    Collision { rank: usize, value: i64 },

    #[error("rank {rank}: computed last entry {value} is negative")]
    Negative { rank: usize, value: i64 },

    #[error("horizon {requested} exceeds the {stored} stored columns")]
    Horizon { requested: usize, stored: usize },

    #[error("enumeration exceeded the node budget of {budget}")]
    Resource { budget: u64 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("modulus mismatch: expected m = {expected}, found m = {found}")]
    ConfigMismatch { expected: i64, found: i64 },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
