use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid readability level {0} (expected 1..=5)")]
    InvalidLevel(i64),

    #[error("duplicate key {0}")]
    Duplicate(String),

    #[error("fragment {0} has no tokens")]
    EmptyFragment(String),

    #[error("invalid token {0:?}: {1}")]
    InvalidToken(String, &'static str),

    #[error("fragment {key}: {message}")]
    InconsistentFragment { key: String, message: String },

    #[error("missing gold label: {0}")]
    MissingGold(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid cascade: {0}")]
    InvalidCascade(String),

    #[error("layer {layer} needs a {resource} that was not provided")]
    MissingResource { layer: String, resource: &'static str },

    #[error("coverage mismatch: {0}")]
    Coverage(String),

    #[error("prediction for {key} word {index} is out of range (fragment has {len} words)")]
    PredictionOutOfRange { key: String, index: usize, len: usize },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
