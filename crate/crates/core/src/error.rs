use std::fmt;

use thiserror::Error;

/// A parse failure with a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct SyntaxError {
    pub position: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            position,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("unknown word '{0}'")]
    UnknownWord(String),
    #[error("unknown fragment '{0}'")]
    UnknownFragment(String),
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
    #[error("invalid lexicon: {0}")]
    Lexicon(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("domain too large to tabulate: {0}")]
    DomainTooLarge(String),
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("derivation limit of {limit} exceeded")]
    TooManyDerivations { limit: usize },
    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub fn eval(msg: impl fmt::Display) -> Self {
        Error::Eval(msg.to_string())
    }

    /// Byte offset for syntax errors, if any.
    pub fn position(&self) -> Option<usize> {
        match self {
            Error::Syntax(e) => Some(e.position),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
