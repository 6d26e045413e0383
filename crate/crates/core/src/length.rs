use std::fmt;
use std::str::FromStr;

use crate::tokens::{Vocabulary, WordSequence};

/// How a reduced word sequence is measured against a character budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum LengthWeights {
    /// Word characters plus one space between adjacent words; the rendered
    /// text length.
    #[default]
    Separator,
    /// Every word pays for one trailing space.
    Appended,
    /// Every word costs one; turns the budget into a word count.
    Unit,
}

impl LengthWeights {
    /// Length added by appending a word of `width` characters to a sequence
    /// that already holds `words_so_far` words.
    #[inline]
    pub fn increment(self, width: usize, words_so_far: usize) -> usize {
        match self {
            LengthWeights::Separator if words_so_far == 0 => width,
            LengthWeights::Separator | LengthWeights::Appended => width + 1,
            LengthWeights::Unit => 1,
        }
    }

    /// Same as [`increment`](Self::increment), keyed on the current length
    /// instead of the word count. Valid because every word has width >= 1, so
    /// a length of zero means no words.
    #[inline]
    pub(crate) fn increment_after(self, width: usize, current_len: usize) -> usize {
        self.increment(width, usize::from(current_len > 0))
    }

    pub fn measure(self, widths: impl IntoIterator<Item = usize>) -> usize {
        widths.into_iter().enumerate().map(|(i, w)| self.increment(w, i)).sum()
    }
}

impl fmt::Display for LengthWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LengthWeights::Separator => "separator",
            LengthWeights::Appended => "appended",
            LengthWeights::Unit => "unit",
        })
    }
}

impl FromStr for LengthWeights {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "separator" => Ok(LengthWeights::Separator),
            "appended" => Ok(LengthWeights::Appended),
            "unit" => Ok(LengthWeights::Unit),
            _ => Err(format!("unknown weight convention `{s}` (separator|appended|unit)")),
        }
    }
}

/// Character length of `words` under `weights`.
pub fn reduced_length(words: &WordSequence, weights: LengthWeights, vocab: &Vocabulary) -> usize {
    weights.measure(words.words().iter().map(|&w| vocab.width(w)))
}
