//! Seeded synthetic instances.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::ctc::log_sum_exp;
use crate::error::{Error, Result};
use crate::matrix_file::MatrixFile;
use crate::tokens::{LogProbMatrix, Vocabulary};

pub const BLANK: &str = "<b>";
pub const MAX_WORD_WIDTH: usize = 12;

const CONSONANTS: &[u8] = b"bcdfghjklmnprstvwz";
const VOWELS: &[u8] = b"aeiou";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub slots: usize,
    /// Includes the blank.
    pub vocab_size: usize,
    pub seed: u64,
    /// Rows are drawn from a symmetric Dirichlet with concentration
    /// `1 / peakedness`; larger values concentrate mass on fewer tokens.
    pub peakedness: f64,
}

impl GenConfig {
    pub fn new(slots: usize, vocab_size: usize, seed: u64) -> Self {
        GenConfig {
            slots,
            vocab_size,
            seed,
            peakedness: 1.0,
        }
    }

    pub fn with_peakedness(mut self, peakedness: f64) -> Self {
        self.peakedness = peakedness;
        self
    }
}

/// Alternating consonant/vowel strings of width 1..=12, all distinct. The
/// blank is token 0.
pub fn synthetic_vocab(vocab_size: usize, rng: &mut impl Rng) -> Result<Vocabulary> {
    if vocab_size < 2 {
        return Err(Error::InvalidInput(
            "vocabulary needs the blank and at least one word".into(),
        ));
    }
    let mut seen = HashSet::new();
    let mut tokens = vec![BLANK.to_string()];
    while tokens.len() < vocab_size {
        let width = rng.gen_range(1..=MAX_WORD_WIDTH);
        let consonant_first = rng.gen_bool(0.5);
        let word: String = (0..width)
            .map(|i| {
                let set = if (i % 2 == 0) == consonant_first {
                    CONSONANTS
                } else {
                    VOWELS
                };
                set[rng.gen_range(0..set.len())] as char
            })
            .collect();
        if seen.insert(word.clone()) {
            tokens.push(word);
        }
    }
    Vocabulary::new(tokens, 0)
}

/// Log of a symmetric Dirichlet draw, sampled in log space so that tiny
/// concentrations never underflow to an all-zero row.
fn log_dirichlet_row(size: usize, concentration: f64, rng: &mut impl Rng) -> Vec<f64> {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    let boosted = Gamma::new(concentration + 1.0, 1.0).expect("positive shape");
    let mut row: Vec<f64> = (0..size)
        .map(|_| {
            let g: f64 = boosted.sample(rng);
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            g.ln() + u.ln() / concentration
        })
        .collect();
    let z = log_sum_exp(&row);
    row.iter_mut().for_each(|v| *v -= z);
    row
}

pub fn generate(config: &GenConfig) -> Result<MatrixFile> {
    if config.slots == 0 {
        return Err(Error::InvalidInput("slot count must be positive".into()));
    }
    if !(config.peakedness.is_finite() && config.peakedness > 0.0) {
        return Err(Error::InvalidInput("peakedness must be positive and finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let vocab = synthetic_vocab(config.vocab_size, &mut rng)?;
    let concentration = 1.0 / config.peakedness;
    let mut values = Vec::with_capacity(config.slots * config.vocab_size);
    for _ in 0..config.slots {
        values.extend(log_dirichlet_row(config.vocab_size, concentration, &mut rng));
    }
    let matrix = LogProbMatrix::new(config.slots, config.vocab_size, values)?;
    MatrixFile::new(vocab, matrix)
}
