use std::str::FromStr;

use crate::length::LengthWeights;
use crate::tokens::{Vocabulary, WordSequence};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TruncateMode {
    /// Cut the rendered text at the budget, possibly mid-word.
    Char,
    /// Drop trailing whole words until the sequence fits.
    #[default]
    Word,
}

impl FromStr for TruncateMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "char" => Ok(TruncateMode::Char),
            "word" => Ok(TruncateMode::Word),
            _ => Err(format!("unknown truncation mode `{s}` (char|word)")),
        }
    }
}

/// Output of [`truncate`]. In `Char` mode `text` may end in a partial word
/// or a space; `words` then holds only the words that survived whole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncated {
    pub words: WordSequence,
    pub text: String,
}

/// Post-hoc budget enforcement for decoders without length control.
pub fn truncate(
    words: &WordSequence,
    budget: usize,
    weights: LengthWeights,
    mode: TruncateMode,
    vocab: &Vocabulary,
) -> Truncated {
    match mode {
        TruncateMode::Word => {
            let mut len = 0;
            let mut keep = 0;
            for (i, &w) in words.words().iter().enumerate() {
                let next = len + weights.increment(vocab.width(w), i);
                if next > budget {
                    break;
                }
                len = next;
                keep = i + 1;
            }
            let kept = WordSequence::new(words.words()[..keep].to_vec(), vocab).expect("prefix of a valid sequence");
            let text = kept.text().to_string();
            Truncated { words: kept, text }
        }
        TruncateMode::Char => {
            let text: String = words.text().chars().take(budget).collect();
            // whole words are those whose last character made it in
            let mut end = 0;
            let mut keep = 0;
            for (i, &w) in words.words().iter().enumerate() {
                end += vocab.width(w) + usize::from(i > 0);
                if end > budget {
                    break;
                }
                keep = i + 1;
            }
            let kept = WordSequence::new(words.words()[..keep].to_vec(), vocab).expect("prefix of a valid sequence");
            Truncated { words: kept, text }
        }
    }
}
