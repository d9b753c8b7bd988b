use thiserror::Error;

/// Errors raised by the library. Variants map onto the CLI exit-code classes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("unsupported prime {p}: {reason}")]
    UnsupportedPrime { p: u64, reason: String },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
