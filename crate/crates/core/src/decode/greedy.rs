use std::time::Instant;

use super::DecodeResult;
use crate::error::Result;
use crate::length::{reduced_length, LengthWeights};
use crate::reduce::Reduction;
use crate::tokens::{LogProbMatrix, TokenPath, Vocabulary};

/// Per-slot argmax followed by `reduction`. No length control; ties go to
/// the smaller token id.
pub fn decode_greedy(
    matrix: &LogProbMatrix,
    vocab: &Vocabulary,
    reduction: Reduction,
    weights: LengthWeights,
) -> Result<DecodeResult> {
    let start = Instant::now();
    matrix.check_vocab(vocab)?;
    let path: Vec<usize> = (0..matrix.slots())
        .map(|s| {
            let row = matrix.row(s);
            let mut best = 0;
            for (t, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = t;
                }
            }
            best
        })
        .collect();
    let path = TokenPath(path);
    let words = reduction.apply(&path, vocab)?;
    Ok(DecodeResult {
        score: matrix.path_score(&path),
        char_len: reduced_length(&words, weights, vocab),
        path,
        words,
        bucket: None,
        fallback: false,
        elapsed: start.elapsed(),
    })
}
