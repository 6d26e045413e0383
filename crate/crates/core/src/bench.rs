//! Decode-time and quality sweep over bucket sizes and budgets.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::decode::{decode_length_control, DecoderConfig, DEFAULT_TOP_K};
use crate::enumerate::path_count;
use crate::error::{Error, Result};
use crate::length::LengthWeights;
use crate::oracle::gap_report_capped;
use crate::reduce::Reduction;
use crate::synth::{generate, GenConfig};

/// Column order of [`BenchReport::to_csv`].
pub const CSV_HEADER: &str =
    "alpha,budget,slots,vocab_size,top_k,instances,mean_decode_us,mean_score,mean_gap,gap_instances";

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub alphas: Vec<usize>,
    pub budgets: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    pub slots: usize,
    pub vocab_size: usize,
    pub top_k: usize,
    pub peakedness: f64,
    pub reduction: Reduction,
    pub weights: LengthWeights,
    /// Oracle runs only when `V^S` is at most this.
    pub oracle_max_size: u64,
    /// Timed repetitions per decode; the fastest is kept.
    pub reps: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            alphas: vec![1, 2, 4, 8],
            budgets: vec![50],
            instances: 200,
            seed: 0,
            slots: 64,
            vocab_size: 50,
            top_k: DEFAULT_TOP_K,
            peakedness: 1.0,
            reduction: Reduction::Merge,
            weights: LengthWeights::Separator,
            oracle_max_size: 100_000,
            reps: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub alpha: usize,
    pub budget: usize,
    pub slots: usize,
    pub vocab_size: usize,
    pub top_k: usize,
    pub instances: usize,
    pub mean_time: Duration,
    pub mean_score: f64,
    pub mean_gap: Option<f64>,
    pub gap_instances: usize,
    /// Longest output seen; never above `budget`.
    pub max_char_len: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, alpha: usize, budget: usize) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.alpha == alpha && r.budget == budget)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let gap = r.mean_gap.map(|g| format!("{g:.9}")).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{:.3},{:.9},{},{}",
                r.alpha,
                r.budget,
                r.slots,
                r.vocab_size,
                r.top_k,
                r.instances,
                r.mean_time.as_secs_f64() * 1e6,
                r.mean_score,
                gap,
                r.gap_instances
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:>5} {:>6} {:>5} {:>5} {:>4} {:>12} {:>12} {:>12} {:>8}\n",
            "alpha", "budget", "S", "V", "k", "decode_us", "score", "gap", "max_len"
        );
        for r in &self.rows {
            let gap = r.mean_gap.map(|g| format!("{g:.6}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:>5} {:>6} {:>5} {:>5} {:>4} {:>12.2} {:>12.4} {:>12} {:>8}",
                r.alpha,
                r.budget,
                r.slots,
                r.vocab_size,
                r.top_k,
                r.mean_time.as_secs_f64() * 1e6,
                r.mean_score,
                gap,
                r.max_char_len
            );
        }
        out
    }
}

struct Acc {
    time: Duration,
    score: f64,
    gap: f64,
    gaps: usize,
    max_len: usize,
}

/// Generates `instances` matrices from consecutive seeds and decodes each
/// under every `(alpha, budget)` pair. Instances are the outer loop so that
/// clock drift spreads evenly over configurations.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.alphas.is_empty() || config.budgets.is_empty() || config.instances == 0 {
        return Err(Error::InvalidInput(
            "bench needs alphas, budgets and at least one instance".into(),
        ));
    }
    let reps = config.reps.max(1);
    let pairs: Vec<(usize, usize)> = config
        .budgets
        .iter()
        .flat_map(|&b| config.alphas.iter().map(move |&a| (a, b)))
        .collect();
    let mut acc: Vec<Acc> = pairs
        .iter()
        .map(|_| Acc {
            time: Duration::ZERO,
            score: 0.0,
            gap: 0.0,
            gaps: 0,
            max_len: 0,
        })
        .collect();
    let oracle_ok = path_count(config.slots, config.vocab_size) <= u128::from(config.oracle_max_size);

    for i in 0..config.instances {
        let gen = GenConfig::new(config.slots, config.vocab_size, config.seed.wrapping_add(i as u64))
            .with_peakedness(config.peakedness);
        let inst = generate(&gen)?;
        for (&(alpha, budget), a) in pairs.iter().zip(acc.iter_mut()) {
            let dc = DecoderConfig::new(budget)
                .with_bucket_size(alpha)
                .with_top_k(config.top_k)
                .with_reduction(config.reduction)
                .with_weights(config.weights);
            // warm-up, untimed
            let result = decode_length_control(&inst.matrix, &inst.vocab, &dc)?;
            let mut best = Duration::MAX;
            for _ in 0..reps {
                let start = Instant::now();
                let r = decode_length_control(&inst.matrix, &inst.vocab, &dc)?;
                best = best.min(start.elapsed());
                std::hint::black_box(r);
            }
            a.time += best;
            a.score += result.score;
            a.max_len = a.max_len.max(result.char_len);
            if oracle_ok {
                let g = gap_report_capped(&inst.matrix, &inst.vocab, &dc, config.oracle_max_size)?;
                a.gap += g.gap;
                a.gaps += 1;
            }
        }
    }

    let n = config.instances as f64;
    let rows = pairs
        .iter()
        .zip(acc)
        .map(|(&(alpha, budget), a)| BenchRow {
            alpha,
            budget,
            slots: config.slots,
            vocab_size: config.vocab_size,
            top_k: config.top_k,
            instances: config.instances,
            mean_time: a.time.div_f64(n),
            mean_score: a.score / n,
            mean_gap: (a.gaps > 0).then(|| a.gap / a.gaps as f64),
            gap_instances: a.gaps,
            max_char_len: a.max_len,
        })
        .collect();
    Ok(BenchReport { rows })
}
