//! Exhaustive constrained decoding for small instances.
//!
//! Enumerates every slot path, reduces it, measures it, and keeps the best.
//! Shares nothing with the dynamic program beyond the reductions and the
//! length convention, which is what makes it useful as a reference.

use std::collections::BTreeMap;

use crate::decode::{bucket_range, decode_length_control, DecoderConfig, Selection};
use crate::enumerate::{for_each_path, DEFAULT_ENUMERATION_CAP};
use crate::error::Result;
use crate::length::{reduced_length, LengthWeights};
use crate::reduce::Reduction;
use crate::tokens::{LogProbMatrix, TokenPath, Vocabulary, WordSequence};

/// Admissible reduced lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthConstraint {
    AtMost(usize),
    Below(usize),
    /// Inclusive range.
    Between(usize, usize),
}

impl LengthConstraint {
    pub fn from_budget(budget: usize, inclusive: bool) -> Self {
        if inclusive {
            LengthConstraint::AtMost(budget)
        } else {
            LengthConstraint::Below(budget)
        }
    }

    pub fn exactly(len: usize) -> Self {
        LengthConstraint::Between(len, len)
    }

    pub fn admits(self, len: usize) -> bool {
        match self {
            LengthConstraint::AtMost(u) => len <= u,
            LengthConstraint::Below(u) => len < u,
            LengthConstraint::Between(lo, hi) => lo <= len && len <= hi,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub best_path: TokenPath,
    pub best_words: WordSequence,
    pub best_score: f64,
    pub char_len: usize,
    /// `false` when no path satisfies the constraint; the all-blank path is
    /// reported in that case.
    pub feasible: bool,
}

/// Brute-force search with a configurable enumeration cap.
#[derive(Clone, Copy, Debug)]
pub struct BruteForce {
    pub cap: u64,
}

impl Default for BruteForce {
    fn default() -> Self {
        BruteForce {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl BruteForce {
    pub fn new(cap: u64) -> Self {
        BruteForce { cap }
    }

    /// Highest-scoring path whose reduction satisfies `constraint`. Ties go
    /// to the lexicographically first path.
    pub fn decode(
        &self,
        matrix: &LogProbMatrix,
        vocab: &Vocabulary,
        constraint: LengthConstraint,
        weights: LengthWeights,
        reduction: Reduction,
    ) -> Result<OracleResult> {
        matrix.check_vocab(vocab)?;
        let mut best: Option<(f64, Vec<usize>, usize)> = None;
        for_each_path(matrix.slots(), matrix.vocab_size(), self.cap, |p| {
            let path = TokenPath(p.to_vec());
            let words = reduction.apply(&path, vocab).expect("enumerated ids are in range");
            let len = reduced_length(&words, weights, vocab);
            if !constraint.admits(len) {
                return;
            }
            let score = matrix.path_score(&path);
            if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
                best = Some((score, path.0, len));
            }
        })?;
        Ok(match best {
            Some((score, path, len)) => {
                let path = TokenPath(path);
                OracleResult {
                    best_words: reduction.apply(&path, vocab)?,
                    best_path: path,
                    best_score: score,
                    char_len: len,
                    feasible: true,
                }
            }
            None => {
                let path = TokenPath::blanks(matrix.slots(), vocab);
                OracleResult {
                    best_score: matrix.path_score(&path),
                    best_path: path,
                    best_words: WordSequence::empty(),
                    char_len: 0,
                    feasible: false,
                }
            }
        })
    }

    /// Best path for every reduced length that some path attains.
    pub fn best_by_length(
        &self,
        matrix: &LogProbMatrix,
        vocab: &Vocabulary,
        weights: LengthWeights,
        reduction: Reduction,
    ) -> Result<BTreeMap<usize, (f64, TokenPath)>> {
        matrix.check_vocab(vocab)?;
        let mut best: BTreeMap<usize, (f64, TokenPath)> = BTreeMap::new();
        for_each_path(matrix.slots(), matrix.vocab_size(), self.cap, |p| {
            let path = TokenPath(p.to_vec());
            let words = reduction.apply(&path, vocab).expect("enumerated ids are in range");
            let len = reduced_length(&words, weights, vocab);
            let score = matrix.path_score(&path);
            match best.get(&len) {
                Some((b, _)) if score <= *b => {}
                _ => {
                    best.insert(len, (score, path));
                }
            }
        })?;
        Ok(best)
    }
}

/// [`BruteForce::decode`] with the default cap and a plain budget.
pub fn brute_decode(
    matrix: &LogProbMatrix,
    vocab: &Vocabulary,
    budget: usize,
    weights: LengthWeights,
    reduction: Reduction,
    inclusive: bool,
) -> Result<OracleResult> {
    BruteForce::default().decode(
        matrix,
        vocab,
        LengthConstraint::from_budget(budget, inclusive),
        weights,
        reduction,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    pub dp_score: f64,
    pub oracle_score: f64,
    /// `oracle_score - dp_score`; zero when both are `-inf`.
    pub gap: f64,
}

/// Runs the dynamic program and the oracle under the same constraints.
///
/// A `Selection::Bucket` config restricts the oracle to that bucket's range
/// as well; other selections compare against the whole budget.
pub fn gap_report(matrix: &LogProbMatrix, vocab: &Vocabulary, config: &DecoderConfig) -> Result<GapReport> {
    gap_report_capped(matrix, vocab, config, DEFAULT_ENUMERATION_CAP)
}

pub fn gap_report_capped(
    matrix: &LogProbMatrix,
    vocab: &Vocabulary,
    config: &DecoderConfig,
    cap: u64,
) -> Result<GapReport> {
    let constraint = match (config.selection, config.max_len()) {
        (_, None) => LengthConstraint::Below(0),
        (Selection::Bucket(l), Some(max)) => {
            let (lo, hi) = bucket_range(l, config.bucket_size);
            LengthConstraint::Between(lo, hi.min(max))
        }
        (_, Some(max)) => LengthConstraint::AtMost(max),
    };
    let oracle = BruteForce::new(cap).decode(matrix, vocab, constraint, config.weights, config.reduction)?;
    let dp = decode_length_control(matrix, vocab, config)?;
    let dp_score = if dp.fallback && !constraint.admits(0) {
        f64::NEG_INFINITY
    } else {
        dp.score
    };
    let oracle_score = if oracle.feasible {
        oracle.best_score
    } else {
        f64::NEG_INFINITY
    };
    let gap = if oracle_score == dp_score {
        0.0
    } else {
        oracle_score - dp_score
    };
    Ok(GapReport {
        dp_score,
        oracle_score,
        gap,
    })
}
