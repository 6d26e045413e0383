#![allow(dead_code)]

use lenctl::{LogProbMatrix, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WORDS: &[&str] = &["a", "I", "am", "to", "the", "cat", "dogs", "zebra", "x", "go", "run"];

pub fn counterexample() -> (LogProbMatrix, Vocabulary) {
    let v = Vocabulary::new(["I", "am", "a", "<eps>"], 3).unwrap();
    let m = LogProbMatrix::from_probs(&[[0.3, 0.4, 0.2, 0.1], [0.1, 0.6, 0.05, 0.25]]).unwrap();
    (m, v)
}

/// Small instance with `vocab_size` tokens (blank at a random position) and
/// rows drawn uniformly then normalized. Some entries are zeroed so `-inf`
/// shows up.
pub fn random_instance(seed: u64, slots: usize, vocab_size: usize) -> (LogProbMatrix, Vocabulary) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blank = rng.gen_range(0..vocab_size);
    let mut pool: Vec<&str> = WORDS.to_vec();
    let mut tokens = Vec::with_capacity(vocab_size);
    for i in 0..vocab_size {
        if i == blank {
            tokens.push("<e>".to_string());
        } else {
            let j = rng.gen_range(0..pool.len());
            tokens.push(pool.swap_remove(j).to_string());
        }
    }
    let vocab = Vocabulary::new(tokens, blank).unwrap();
    let rows: Vec<Vec<f64>> = (0..slots)
        .map(|_| {
            let mut row: Vec<f64> = (0..vocab_size)
                .map(|_| {
                    if rng.gen_bool(0.1) {
                        0.0
                    } else {
                        rng.gen_range(0.01..1.0)
                    }
                })
                .collect();
            if row.iter().all(|&p| p == 0.0) {
                row[0] = 1.0;
            }
            let z: f64 = row.iter().sum();
            row.iter_mut().for_each(|p| *p /= z);
            row
        })
        .collect();
    (LogProbMatrix::from_probs(&rows).unwrap(), vocab)
}

/// Random shape with `slots in 1..=max_slots`, `vocab in 2..=max_vocab`.
pub fn random_shape(seed: u64, max_slots: usize, max_vocab: usize) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (rng.gen_range(1..=max_slots), rng.gen_range(2..=max_vocab))
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a == f64::NEG_INFINITY && b == f64::NEG_INFINITY) || (a - b).abs() <= tol
}
