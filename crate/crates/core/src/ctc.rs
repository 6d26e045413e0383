//! CTC marginal likelihood of a word sequence.

use std::collections::HashMap;

use crate::enumerate::{for_each_path, DEFAULT_ENUMERATION_CAP};
use crate::error::Result;
use crate::reduce::Reduction;
use crate::tokens::{LogProbMatrix, TokenPath, Vocabulary, WordSequence};

/// Natural-log probability of a word sequence; `-inf` when no path reduces
/// to it.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MarginalScore(pub f64);

impl MarginalScore {
    pub fn log_prob(self) -> f64 {
        self.0
    }

    pub fn prob(self) -> f64 {
        self.0.exp()
    }

    pub fn is_impossible(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }
}

/// `log(exp(a) + exp(b))` without overflow; `-inf` is the identity.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// Forward algorithm over the blank-interleaved target
/// `e y1 e y2 ... yT e`, in log space.
pub fn ctc_forward(matrix: &LogProbMatrix, target: &WordSequence, vocab: &Vocabulary) -> Result<MarginalScore> {
    matrix.check_vocab(vocab)?;
    let blank = vocab.blank_id();
    let ext: Vec<usize> = std::iter::once(blank)
        .chain(target.words().iter().flat_map(|&w| [w, blank]))
        .collect();
    let n = ext.len();
    let neg = f64::NEG_INFINITY;

    let mut alpha = vec![neg; n];
    alpha[0] = matrix.get(0, ext[0]);
    if n > 1 {
        alpha[1] = matrix.get(0, ext[1]);
    }
    let mut next = vec![neg; n];
    for s in 1..matrix.slots() {
        // states beyond 2s+1 are unreachable after s+1 slots
        let hi = n.min(2 * s + 2);
        for i in 0..n {
            if i >= hi {
                next[i] = neg;
                continue;
            }
            let mut acc = alpha[i];
            if i >= 1 {
                acc = log_add(acc, alpha[i - 1]);
            }
            if i >= 2 && ext[i] != blank && ext[i] != ext[i - 2] {
                acc = log_add(acc, alpha[i - 2]);
            }
            next[i] = acc + matrix.get(s, ext[i]);
        }
        std::mem::swap(&mut alpha, &mut next);
    }
    let total = if n == 1 {
        alpha[0]
    } else {
        log_add(alpha[n - 1], alpha[n - 2])
    };
    Ok(MarginalScore(total))
}

/// Sums the probability of every path whose reduction equals `target`.
pub fn brute_marginal(
    matrix: &LogProbMatrix,
    target: &WordSequence,
    vocab: &Vocabulary,
    reduction: Reduction,
) -> Result<MarginalScore> {
    brute_marginal_capped(matrix, target, vocab, reduction, DEFAULT_ENUMERATION_CAP)
}

pub fn brute_marginal_capped(
    matrix: &LogProbMatrix,
    target: &WordSequence,
    vocab: &Vocabulary,
    reduction: Reduction,
    cap: u64,
) -> Result<MarginalScore> {
    matrix.check_vocab(vocab)?;
    let mut terms = Vec::new();
    let mut failure = None;
    for_each_path(matrix.slots(), matrix.vocab_size(), cap, |p| {
        if failure.is_some() {
            return;
        }
        let path = TokenPath(p.to_vec());
        match reduction.apply(&path, vocab) {
            Ok(w) if w.words() == target.words() => terms.push(matrix.path_score(&path)),
            Ok(_) => {}
            Err(e) => failure = Some(e),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MarginalScore(log_sum_exp(&terms)))
}

/// Every word sequence reachable from some path, with its brute-force
/// marginal. Used to check that marginals form a distribution.
pub fn brute_distribution(
    matrix: &LogProbMatrix,
    vocab: &Vocabulary,
    reduction: Reduction,
    cap: u64,
) -> Result<HashMap<Vec<usize>, MarginalScore>> {
    matrix.check_vocab(vocab)?;
    let mut terms: HashMap<Vec<usize>, Vec<f64>> = HashMap::new();
    for_each_path(matrix.slots(), matrix.vocab_size(), cap, |p| {
        let path = TokenPath(p.to_vec());
        let words = reduction.apply(&path, vocab).expect("enumerated ids are in range");
        terms
            .entry(words.words().to_vec())
            .or_default()
            .push(matrix.path_score(&path));
    })?;
    Ok(terms
        .into_iter()
        .map(|(k, v)| (k, MarginalScore(log_sum_exp(&v))))
        .collect())
}

/// Parses `text` against `vocab` and scores it with [`ctc_forward`].
pub fn ctc_score_text(matrix: &LogProbMatrix, vocab: &Vocabulary, text: &str) -> Result<MarginalScore> {
    let target = vocab.parse_words(text)?;
    ctc_forward(matrix, &target, vocab)
}
