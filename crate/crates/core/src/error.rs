use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("token id {id} out of range for vocabulary of size {size}")]
    InvalidToken { id: usize, size: usize },

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("invalid log-probability matrix: {0}")]
    InvalidMatrix(String),

    #[error("word sequence contains the blank token at position {0}")]
    BlankInWords(usize),

    #[error("unknown word `{0}`")]
    UnknownWord(String),

    #[error("enumeration of {paths} paths exceeds the cap of {cap}")]
    TooLarge { paths: u128, cap: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
