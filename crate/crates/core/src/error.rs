use thiserror::Error;

use crate::word::Reject;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: a bad word, graph file or argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configuration outside the regime an operation supports.
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("word is not perfect: {0}")]
    Imperfect(#[from] Reject),

    /// An internal consistency check failed.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A configured cap (state count, proposal count, order) was exceeded.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Config(_) | Error::Imperfect(_) | Error::Io(_) => 1,
            Error::Invariant(_) | Error::Csv(_) | Error::Json(_) => 2,
            Error::ResourceCap(_) => 3,
        }
    }
}
