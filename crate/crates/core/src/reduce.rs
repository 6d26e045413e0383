//! CTC path reductions.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::tokens::{TokenPath, Vocabulary, WordSequence};

/// Which reduction maps a slot path to its output words.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// Standard CTC: merge adjacent repeats, then drop blanks.
    #[default]
    Merge,
    /// Drop blanks only; repeats survive.
    NoMerge,
}

impl Reduction {
    pub fn apply(self, path: &TokenPath, vocab: &Vocabulary) -> Result<WordSequence> {
        match self {
            Reduction::Merge => reduce_merge(path, vocab),
            Reduction::NoMerge => reduce_nomerge(path, vocab),
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduction::Merge => "merge",
            Reduction::NoMerge => "nomerge",
        })
    }
}

impl FromStr for Reduction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "merge" => Ok(Reduction::Merge),
            "nomerge" | "no-merge" => Ok(Reduction::NoMerge),
            _ => Err(format!("unknown reduction `{s}` (merge|nomerge)")),
        }
    }
}

/// Collapses runs of the same non-blank token, then removes blanks.
pub fn reduce_merge(path: &TokenPath, vocab: &Vocabulary) -> Result<WordSequence> {
    let mut words = Vec::new();
    let mut prev = None;
    for &tok in path.iter() {
        vocab.check(tok)?;
        if !vocab.is_blank(tok) && prev != Some(tok) {
            words.push(tok);
        }
        prev = Some(tok);
    }
    WordSequence::new(words, vocab)
}

/// Removes blanks and keeps everything else verbatim.
pub fn reduce_nomerge(path: &TokenPath, vocab: &Vocabulary) -> Result<WordSequence> {
    let mut words = Vec::with_capacity(path.len());
    for &tok in path.iter() {
        vocab.check(tok)?;
        if !vocab.is_blank(tok) {
            words.push(tok);
        }
    }
    WordSequence::new(words, vocab)
}
