//! Length-controlled decoding over a per-slot log-probability matrix.
//!
//! The decoder treats summary length as a knapsack weight. Lengths are
//! grouped into buckets of `bucket_size` characters and the table keeps the
//! single most probable slot prefix for every `(prefix, bucket)` pair. With
//! `bucket_size == 1` and [`Reduction::NoMerge`] the table is exact; merging
//! repeats or coarser buckets make it an approximation that never exceeds the
//! true optimum.

mod greedy;
mod table;
mod truncate;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

pub use greedy::decode_greedy;
pub use table::{bucket_range, DpCell, DpTable};
pub use truncate::{truncate, TruncateMode, Truncated};

use crate::error::{Error, Result};
use crate::length::{reduced_length, LengthWeights};
use crate::reduce::Reduction;
use crate::tokens::{LogProbMatrix, TokenPath, Vocabulary, WordSequence};

pub const DEFAULT_BUCKET_SIZE: usize = 4;
pub const DEFAULT_TOP_K: usize = 20;

/// Which final-column cell becomes the answer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Selection {
    /// Highest score among all cells within the budget.
    #[default]
    BestFeasible,
    /// The reachable cell with the largest length within the budget.
    Longest,
    /// A single bucket, regardless of the others.
    Bucket(usize),
}

impl fmt::Display for Selection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selection::BestFeasible => f.write_str("best"),
            Selection::Longest => f.write_str("longest"),
            Selection::Bucket(l) => write!(f, "bucket:{l}"),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "best" => Ok(Selection::BestFeasible),
            "longest" => Ok(Selection::Longest),
            _ => s
                .strip_prefix("bucket:")
                .and_then(|n| n.parse().ok())
                .map(Selection::Bucket)
                .ok_or_else(|| format!("unknown selection `{s}` (best|longest|bucket:N)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderConfig {
    /// Character budget.
    pub budget: usize,
    pub bucket_size: usize,
    /// Non-blank words considered per slot. The blank is always considered.
    pub top_k: usize,
    pub reduction: Reduction,
    pub weights: LengthWeights,
    /// `true`: length <= budget. `false`: length < budget.
    pub inclusive_budget: bool,
    pub selection: Selection,
}

impl DecoderConfig {
    pub fn new(budget: usize) -> Self {
        DecoderConfig {
            budget,
            bucket_size: DEFAULT_BUCKET_SIZE,
            top_k: DEFAULT_TOP_K,
            reduction: Reduction::Merge,
            weights: LengthWeights::Separator,
            inclusive_budget: true,
            selection: Selection::BestFeasible,
        }
    }

    /// Exact configuration: unit buckets, no merging, no pruning.
    pub fn exact(budget: usize, weights: LengthWeights) -> Self {
        DecoderConfig {
            bucket_size: 1,
            top_k: usize::MAX,
            reduction: Reduction::NoMerge,
            weights,
            ..DecoderConfig::new(budget)
        }
    }

    pub fn with_bucket_size(mut self, bucket_size: usize) -> Self {
        self.bucket_size = bucket_size;
        self
    }

    pub fn with_top_k(mut self, top_k: usize) -> Self {
        self.top_k = top_k;
        self
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    pub fn with_weights(mut self, weights: LengthWeights) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_inclusive_budget(mut self, inclusive: bool) -> Self {
        self.inclusive_budget = inclusive;
        self
    }

    pub fn with_selection(mut self, selection: Selection) -> Self {
        self.selection = selection;
        self
    }

    /// Largest admissible length, or `None` when even the empty summary is
    /// over budget (strict budget of zero).
    pub fn max_len(&self) -> Option<usize> {
        if self.inclusive_budget {
            Some(self.budget)
        } else {
            self.budget.checked_sub(1)
        }
    }

    /// Highest bucket index the table needs.
    pub fn buckets(&self) -> usize {
        self.max_len().unwrap_or(0).div_ceil(self.bucket_size)
    }

    pub fn admits(&self, len: usize) -> bool {
        self.max_len().is_some_and(|m| len <= m)
    }

    fn validate(&self) -> Result<()> {
        if self.bucket_size == 0 {
            return Err(Error::InvalidInput("bucket size must be positive".into()));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidInput("top-k must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub path: TokenPath,
    pub words: WordSequence,
    pub char_len: usize,
    /// Sum of slot log-probabilities along `path`.
    pub score: f64,
    /// Bucket of the selected cell; `None` for decoders without buckets.
    pub bucket: Option<usize>,
    /// Set when nothing within the budget was reachable and the all-blank
    /// path was returned instead.
    pub fallback: bool,
    pub elapsed: Duration,
}

impl DecodeResult {
    pub fn probability(&self) -> f64 {
        self.score.exp()
    }
}

/// Fills the table for `config` without choosing an answer.
pub fn fill_table(matrix: &LogProbMatrix, vocab: &Vocabulary, config: &DecoderConfig) -> Result<DpTable> {
    config.validate()?;
    DpTable::fill(
        matrix,
        vocab,
        config.buckets(),
        config.bucket_size,
        config.top_k,
        config.reduction,
        config.weights,
    )
}

/// Picks the final-column bucket that `config.selection` asks for.
pub fn select_bucket(table: &DpTable, config: &DecoderConfig) -> Option<usize> {
    let feasible = |l: usize| table.last(l).filter(|c| config.admits(c.exact_len));
    match config.selection {
        Selection::Bucket(l) => feasible(l).map(|_| l),
        Selection::BestFeasible => {
            let mut best: Option<(usize, f64)> = None;
            for l in 0..=table.buckets() {
                if let Some(c) = feasible(l) {
                    if best.is_none_or(|(_, s)| c.score > s) {
                        best = Some((l, c.score));
                    }
                }
            }
            best.map(|(l, _)| l)
        }
        Selection::Longest => (0..=table.buckets()).rev().find(|&l| feasible(l).is_some()),
    }
}

/// Builds the result for the final-column cell in bucket `l`.
pub fn result_at(table: &DpTable, vocab: &Vocabulary, l: usize) -> Result<Option<DecodeResult>> {
    let Some(cell) = table.last(l) else {
        return Ok(None);
    };
    let path = table.reconstruct(table.slots(), l).expect("reachable cell");
    let words = table.reduction().apply(&path, vocab)?;
    let char_len = reduced_length(&words, table.weights(), vocab);
    debug_assert_eq!(char_len, cell.exact_len);
    Ok(Some(DecodeResult {
        score: cell.score,
        path,
        words,
        char_len,
        bucket: Some(l),
        fallback: false,
        elapsed: Duration::ZERO,
    }))
}

fn empty_result(matrix: &LogProbMatrix, vocab: &Vocabulary) -> DecodeResult {
    let path = TokenPath::blanks(matrix.slots(), vocab);
    DecodeResult {
        score: matrix.path_score(&path),
        path,
        words: WordSequence::empty(),
        char_len: 0,
        bucket: Some(0),
        fallback: true,
        elapsed: Duration::ZERO,
    }
}

/// Runs the length-control dynamic program and returns the selected summary.
///
/// When no cell within the budget is reachable, the all-blank path is
/// returned with `fallback` set.
pub fn decode_length_control(
    matrix: &LogProbMatrix,
    vocab: &Vocabulary,
    config: &DecoderConfig,
) -> Result<DecodeResult> {
    let start = Instant::now();
    let table = fill_table(matrix, vocab, config)?;
    let mut result = match select_bucket(&table, config) {
        Some(l) => result_at(&table, vocab, l)?.expect("selected cell is reachable"),
        None => empty_result(matrix, vocab),
    };
    result.elapsed = start.elapsed();
    Ok(result)
}

/// Exact decoding: the most probable path whose blank-only reduction fits
/// the budget.
pub fn decode_exact(
    matrix: &LogProbMatrix,
    vocab: &Vocabulary,
    budget: usize,
    weights: LengthWeights,
) -> Result<DecodeResult> {
    decode_length_control(matrix, vocab, &DecoderConfig::exact(budget, weights))
}
