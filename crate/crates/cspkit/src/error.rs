use thiserror::Error;

/// Toolkit-wide error type.
///
/// Resource exhaustion (`Budget`) is kept distinct from everything else:
/// oracles and enumeration-based procedures must abort rather than silently
/// approximate, and the CLI maps budget errors to their own exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("semantic error: {0}")]
    Semantic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
