use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the CLI exit codes: `Parse` and `InvalidInput` are
/// user-input problems (exit 2), `Infeasible` means the model cannot be run
/// on the given data/configuration (exit 3), and `Numeric`/`Io` are internal
/// failures (exit 4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("model infeasible: {0}")]
    Infeasible(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
