use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolarError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for PolarError {
    fn from(e: std::io::Error) -> Self {
        PolarError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, PolarError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(PolarError::InvalidArgument(msg.into()))
}
