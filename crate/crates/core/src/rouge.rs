//! ROUGE-1, ROUGE-2 and ROUGE-L.
//!
//! Text is lowercased and split on whitespace. No stemming and no stopword
//! removal, so absolute numbers can differ slightly from the original Perl
//! toolkit.

use std::collections::HashMap;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    fn from_counts(hits: usize, candidate: usize, reference: usize) -> Self {
        let precision = if candidate == 0 {
            0.0
        } else {
            hits as f64 / candidate as f64
        };
        let recall = if reference == 0 {
            0.0
        } else {
            hits as f64 / reference as f64
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Prf { precision, recall, f1 }
    }

    pub fn get(&self, mode: RougeMode) -> f64 {
        match mode {
            RougeMode::F1 => self.f1,
            RougeMode::Recall => self.recall,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RougeScore {
    pub r1: Prf,
    pub r2: Prf,
    pub rl: Prf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RougeMode {
    #[default]
    F1,
    Recall,
}

impl FromStr for RougeMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f1" => Ok(RougeMode::F1),
            "recall" => Ok(RougeMode::Recall),
            _ => Err(format!("unknown ROUGE mode `{s}` (f1|recall)")),
        }
    }
}

pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_lowercase).collect()
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w.iter().map(AsRef::as_ref).collect()).or_insert(0) += 1;
        }
    }
    counts
}

fn rouge_n<S: AsRef<str>>(candidate: &[S], reference: &[S], n: usize) -> Prf {
    let cand = ngram_counts(candidate, n);
    let refs = ngram_counts(reference, n);
    let hits = cand
        .iter()
        .map(|(g, &c)| c.min(refs.get(g).copied().unwrap_or(0)))
        .sum();
    Prf::from_counts(
        hits,
        candidate.len().saturating_sub(n - 1),
        reference.len().saturating_sub(n - 1),
    )
}

pub fn lcs_len<S: AsRef<str>>(a: &[S], b: &[S]) -> usize {
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        let mut diag = 0;
        for (j, y) in b.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if x.as_ref() == y.as_ref() {
                diag + 1
            } else {
                up.max(row[j])
            };
            diag = up;
        }
    }
    row[b.len()]
}

/// Scores pre-tokenized text. Empty input on either side scores zero.
pub fn rouge<S: AsRef<str>>(candidate: &[S], reference: &[S]) -> RougeScore {
    RougeScore {
        r1: rouge_n(candidate, reference, 1),
        r2: rouge_n(candidate, reference, 2),
        rl: Prf::from_counts(lcs_len(candidate, reference), candidate.len(), reference.len()),
    }
}

pub fn rouge_text(candidate: &str, reference: &str) -> RougeScore {
    rouge(&tokenize(candidate), &tokenize(reference))
}

/// Per-pair mean over a corpus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorpusRouge {
    pub mean: RougeScore,
    pub mode: RougeMode,
    pub pairs: usize,
}

impl CorpusRouge {
    /// `(R-1, R-2, R-L)` in the selected mode.
    pub fn headline(&self) -> (f64, f64, f64) {
        (
            self.mean.r1.get(self.mode),
            self.mean.r2.get(self.mode),
            self.mean.rl.get(self.mode),
        )
    }
}

pub fn corpus_rouge<C: AsRef<str>, R: AsRef<str>>(pairs: &[(C, R)], mode: RougeMode) -> Result<CorpusRouge> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("corpus ROUGE needs at least one pair".into()));
    }
    let n = pairs.len() as f64;
    let mut sum = [[0.0f64; 3]; 3];
    for (c, r) in pairs {
        let s = rouge_text(c.as_ref(), r.as_ref());
        for (acc, prf) in sum.iter_mut().zip([s.r1, s.r2, s.rl]) {
            acc[0] += prf.precision;
            acc[1] += prf.recall;
            acc[2] += prf.f1;
        }
    }
    let mean = |a: [f64; 3]| Prf {
        precision: a[0] / n,
        recall: a[1] / n,
        f1: a[2] / n,
    };
    Ok(CorpusRouge {
        mean: RougeScore {
            r1: mean(sum[0]),
            r2: mean(sum[1]),
            rl: mean(sum[2]),
        },
        mode,
        pairs: pairs.len(),
    })
}
