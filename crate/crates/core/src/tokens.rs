//! Vocabulary, per-slot log-probability matrices, and the path / word
//! sequence types the decoders exchange.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Index into a [`Vocabulary`].
pub type TokenId = usize;

/// Tolerance on `|sum(exp(row)) - 1|` accepted by [`LogProbMatrix::new`].
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

/// Ordered token table with a distinguished blank and per-token character
/// widths.
///
/// Widths count Unicode scalar values. The blank has width zero; every other
/// token is a non-empty word without whitespace, so a word sequence always
/// renders unambiguously with single-space separators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    widths: Vec<usize>,
    blank: TokenId,
    index: HashMap<String, TokenId>,
}

impl Vocabulary {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>, blank: TokenId) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        if blank >= tokens.len() {
            return Err(Error::InvalidVocabulary(format!(
                "blank id {blank} out of range for {} tokens",
                tokens.len()
            )));
        }
        let mut index = HashMap::with_capacity(tokens.len());
        let mut widths = Vec::with_capacity(tokens.len());
        for (id, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(Error::InvalidVocabulary(format!("token {id} is empty")));
            }
            if tok.chars().any(char::is_whitespace) {
                return Err(Error::InvalidVocabulary(format!(
                    "token {id} ({tok:?}) contains whitespace"
                )));
            }
            if index.insert(tok.clone(), id).is_some() {
                return Err(Error::InvalidVocabulary(format!("duplicate token {tok:?}")));
            }
            widths.push(if id == blank { 0 } else { tok.chars().count() });
        }
        Ok(Vocabulary {
            tokens,
            widths,
            blank,
            index,
        })
    }

    /// Builds a vocabulary whose blank is identified by its string.
    pub fn with_blank_token<S: Into<String>>(tokens: impl IntoIterator<Item = S>, blank: &str) -> Result<Self> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        let id = tokens
            .iter()
            .position(|t| t == blank)
            .ok_or_else(|| Error::InvalidVocabulary(format!("blank token {blank:?} not in vocabulary")))?;
        Vocabulary::new(tokens, id)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn blank_id(&self) -> TokenId {
        self.blank
    }

    pub fn is_blank(&self, id: TokenId) -> bool {
        id == self.blank
    }

    pub fn token(&self, id: TokenId) -> &str {
        &self.tokens[id]
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn width(&self, id: TokenId) -> usize {
        self.widths[id]
    }

    pub fn id_of(&self, token: &str) -> Option<TokenId> {
        self.index.get(token).copied()
    }

    /// Ids of every non-blank token, ascending.
    pub fn word_ids(&self) -> impl Iterator<Item = TokenId> + '_ {
        (0..self.len()).filter(move |&id| id != self.blank)
    }

    pub(crate) fn check(&self, id: TokenId) -> Result<()> {
        if id < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidToken { id, size: self.len() })
        }
    }

    /// Looks up whitespace-separated words, rejecting unknown words and the
    /// blank.
    pub fn parse_words(&self, text: &str) -> Result<WordSequence> {
        let words = text
            .split_whitespace()
            .map(|w| match self.id_of(w) {
                Some(id) if !self.is_blank(id) => Ok(id),
                _ => Err(Error::UnknownWord(w.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        WordSequence::new(words, self)
    }
}

/// `S x V` matrix of natural-log probabilities, one row per prediction slot.
#[derive(Clone, Debug, PartialEq)]
pub struct LogProbMatrix {
    slots: usize,
    vocab_size: usize,
    values: Vec<f64>,
}

impl LogProbMatrix {
    /// Row-major values. Every entry must be finite or `-inf` and every row
    /// must exponentiate to a distribution.
    pub fn new(slots: usize, vocab_size: usize, values: Vec<f64>) -> Result<Self> {
        if slots == 0 || vocab_size == 0 {
            return Err(Error::InvalidMatrix(format!(
                "shape {slots}x{vocab_size} must be non-empty"
            )));
        }
        if values.len() != slots * vocab_size {
            return Err(Error::InvalidMatrix(format!(
                "expected {} values for shape {slots}x{vocab_size}, got {}",
                slots * vocab_size,
                values.len()
            )));
        }
        for (s, row) in values.chunks_exact(vocab_size).enumerate() {
            if let Some(v) = row.iter().find(|v| v.is_nan() || **v == f64::INFINITY) {
                return Err(Error::InvalidMatrix(format!("slot {s} holds illegal value {v}")));
            }
            let total: f64 = row.iter().map(|v| v.exp()).sum();
            if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::InvalidMatrix(format!("slot {s} probabilities sum to {total}")));
            }
        }
        Ok(LogProbMatrix {
            slots,
            vocab_size,
            values,
        })
    }

    /// Takes the log of linear probabilities given row by row.
    pub fn from_probs<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let vocab_size = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(rows.len() * vocab_size);
        for (s, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != vocab_size {
                return Err(Error::InvalidMatrix(format!(
                    "row {s} has {} entries, expected {vocab_size}",
                    row.len()
                )));
            }
            values.extend(row.iter().map(|p| p.ln()));
        }
        LogProbMatrix::new(rows.len(), vocab_size, values)
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    /// `log P_s(token)` for zero-based slot `s`.
    #[inline]
    pub fn get(&self, slot: usize, token: TokenId) -> f64 {
        self.values[slot * self.vocab_size + token]
    }

    pub fn row(&self, slot: usize) -> &[f64] {
        &self.values[slot * self.vocab_size..(slot + 1) * self.vocab_size]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Sum of slot log-probabilities along `path`.
    pub fn path_score(&self, path: &TokenPath) -> f64 {
        path.iter().enumerate().map(|(s, &t)| self.get(s, t)).sum()
    }

    pub(crate) fn check_vocab(&self, vocab: &Vocabulary) -> Result<()> {
        if vocab.len() != self.vocab_size {
            return Err(Error::InvalidInput(format!(
                "matrix has {} columns but vocabulary has {} tokens",
                self.vocab_size,
                vocab.len()
            )));
        }
        Ok(())
    }
}

/// One token per prediction slot, blanks included.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TokenPath(pub Vec<TokenId>);

impl TokenPath {
    pub fn blanks(slots: usize, vocab: &Vocabulary) -> Self {
        TokenPath(vec![vocab.blank_id(); slots])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TokenId> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[TokenId] {
        &self.0
    }

    /// Maps token strings to a path; handy for fixtures.
    pub fn from_tokens(tokens: &[&str], vocab: &Vocabulary) -> Result<Self> {
        tokens
            .iter()
            .map(|t| vocab.id_of(t).ok_or_else(|| Error::UnknownWord(t.to_string())))
            .collect::<Result<Vec<_>>>()
            .map(TokenPath)
    }
}

impl From<Vec<TokenId>> for TokenPath {
    fn from(v: Vec<TokenId>) -> Self {
        TokenPath(v)
    }
}

/// A reduced output: blank-free word ids plus their single-space rendering.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WordSequence {
    words: Vec<TokenId>,
    text: String,
}

impl WordSequence {
    pub fn new(words: Vec<TokenId>, vocab: &Vocabulary) -> Result<Self> {
        for (i, &w) in words.iter().enumerate() {
            vocab.check(w)?;
            if vocab.is_blank(w) {
                return Err(Error::BlankInWords(i));
            }
        }
        let text = words.iter().map(|&w| vocab.token(w)).collect::<Vec<_>>().join(" ");
        Ok(WordSequence { words, text })
    }

    pub fn empty() -> Self {
        WordSequence::default()
    }

    pub fn words(&self) -> &[TokenId] {
        &self.words
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl fmt::Display for WordSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
