use thiserror::Error;

use cayley::error::{BundleError, DerivedError, G2Error};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at {pos}: weight {weight:?} is not non-increasing")]
    NotDominant { pos: usize, weight: Vec<i64> },
    #[error("shift not allowed on a plain bundle: {what}")]
    ShiftNotAllowed { what: String },
    #[error("sums and products of complexes are not supported: {0}")]
    Unsupported(String),
    #[error("line {line}: {inner}")]
    Line { line: usize, inner: Box<ParseError> },
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// Errors that end a command; each maps to an exit code.
#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Derived(#[from] DerivedError),
    #[error(transparent)]
    G2(#[from] G2Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) | CommandError::Parse(_) | CommandError::Io(_) => crate::EXIT_USAGE,
            CommandError::Derived(_) | CommandError::G2(_) => crate::EXIT_FAIL,
        }
    }
}
