//! Acceptance criteria. Run with `cargo test -p lenctl --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

mod common;

use std::time::Instant;

use common::{close, counterexample, random_instance, random_shape};
use lenctl::bench::{run_bench, BenchConfig};
use lenctl::ctc::brute_distribution;
use lenctl::decode::fill_table;
use lenctl::enumerate::DEFAULT_ENUMERATION_CAP;
use lenctl::oracle::LengthConstraint;
use lenctl::rouge::rouge_text;
use lenctl::synth::{generate, GenConfig};
use lenctl::{
    ctc_forward, decode_length_control, gap_report, reduce_merge, reduce_nomerge, BruteForce, DecoderConfig,
    LengthWeights, Reduction, Selection, TokenPath, Vocabulary, WordSequence,
};

/// Outcome of one criterion plus a digest of every deterministic value it
/// produced, for the repeat-run check.
struct Outcome {
    pass: bool,
    detail: String,
    digest: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>, digest: Vec<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            digest,
        }
    }
}

fn c1_reductions() -> Outcome {
    let v = Vocabulary::new(["a", "b", "ε"], 2).unwrap();
    let p = |s: &[&str]| TokenPath::from_tokens(s, &v).unwrap();
    let merged = reduce_merge(&p(&["a", "a", "ε", "ε", "a", "b", "b", "ε"]), &v).unwrap();
    let kept = reduce_nomerge(&p(&["a", "a", "ε", "a", "b", "b", "ε"]), &v).unwrap();
    let pass = merged.text() == "a a b" && kept.text() == "a a a b b";
    Outcome::new(
        pass,
        format!("merge -> {:?}, nomerge -> {:?}", merged.text(), kept.text()),
        vec![],
    )
}

fn c2_exactness() -> Outcome {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    let mut digest = Vec::new();
    for seed in 0..500u64 {
        let (s, v) = random_shape(seed, 6, 8);
        let (m, vocab) = random_instance(seed, s, v);
        let oracle = BruteForce::default()
            .best_by_length(&m, &vocab, LengthWeights::Separator, Reduction::NoMerge)
            .unwrap();
        let max_len = *oracle.keys().max().unwrap();
        let table = fill_table(&m, &vocab, &DecoderConfig::exact(max_len, LengthWeights::Separator)).unwrap();
        for l in 0..=max_len {
            let dp = table.last(l).map_or(f64::NEG_INFINITY, |c| c.score);
            let bf = oracle.get(&l).map_or(f64::NEG_INFINITY, |(sc, _)| *sc);
            checked += 1;
            if !close(dp, bf, 1e-9) {
                failures.push(format!("seed {seed} len {l}: {dp} vs {bf}"));
            }
            digest.push(format!("{seed}:{l}:{:x}", dp.to_bits()));
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "500 instances, {checked} (instance, length) cells, {} mismatches {:?}",
            failures.len(),
            failures.first()
        ),
        digest,
    )
}

fn c3_counterexamples() -> Outcome {
    let (m, v) = counterexample();
    let bf = BruteForce::default();
    // (a) no merging, bucket size 2, bucket 2 = lengths 3..=4
    let a_cfg = DecoderConfig::new(4)
        .with_bucket_size(2)
        .with_reduction(Reduction::NoMerge)
        .with_selection(Selection::Bucket(2));
    let a_dp = decode_length_control(&m, &v, &a_cfg).unwrap();
    let a_or = bf
        .decode(
            &m,
            &v,
            LengthConstraint::Between(3, 4),
            LengthWeights::Separator,
            Reduction::NoMerge,
        )
        .unwrap();
    // (b) merging, bucket size 1, exact length 3
    let b_cfg = DecoderConfig::new(3)
        .with_bucket_size(1)
        .with_selection(Selection::Bucket(3));
    let b_dp = decode_length_control(&m, &v, &b_cfg).unwrap();
    let b_or = bf
        .decode(
            &m,
            &v,
            LengthConstraint::exactly(3),
            LengthWeights::Separator,
            Reduction::Merge,
        )
        .unwrap();
    let p = |x: f64| x.exp();
    let pass = a_dp.words.text() == "am I"
        && (p(a_dp.score) - 0.04).abs() <= 1e-12
        && a_or.best_words.text() == "I am"
        && (p(a_or.best_score) - 0.18).abs() <= 1e-12
        && b_dp.words.text() == "I a"
        && (p(b_dp.score) - 0.015).abs() <= 1e-12
        && b_or.best_words.text() == "a I"
        && (p(b_or.best_score) - 0.02).abs() <= 1e-12;
    let detail = format!(
        "(a) dp {:?} {:.6} vs oracle {:?} {:.6}; (b) dp {:?} {:.6} vs oracle {:?} {:.6}",
        a_dp.words.text(),
        p(a_dp.score),
        a_or.best_words.text(),
        p(a_or.best_score),
        b_dp.words.text(),
        p(b_dp.score),
        b_or.best_words.text(),
        p(b_or.best_score)
    );
    let digest = vec![detail.clone()];
    Outcome::new(pass, detail, digest)
}

fn c4_ctc() -> Outcome {
    let mut worst = 0.0f64;
    let mut failures = 0usize;
    let mut targets = 0usize;
    let mut digest = Vec::new();
    for seed in 0..500u64 {
        let (s, v) = random_shape(seed, 5, 5);
        let (m, vocab) = random_instance(seed, s, v);
        let dist = brute_distribution(&m, &vocab, Reduction::Merge, DEFAULT_ENUMERATION_CAP).unwrap();
        let words: Vec<usize> = vocab.word_ids().collect();
        // every target of length <= S
        let mut frontier: Vec<Vec<usize>> = vec![vec![]];
        for t in 0..=s {
            for y in &frontier {
                let fwd = ctc_forward(&m, &WordSequence::new(y.clone(), &vocab).unwrap(), &vocab)
                    .unwrap()
                    .log_prob();
                let bf = dist.get(y).map_or(f64::NEG_INFINITY, |sc| sc.log_prob());
                targets += 1;
                if !close(fwd, bf, 1e-9) {
                    failures += 1;
                } else if fwd.is_finite() {
                    worst = worst.max((fwd - bf).abs());
                }
                digest.push(format!("{:x}", fwd.to_bits()));
            }
            if t < s {
                frontier = frontier
                    .iter()
                    .flat_map(|p| {
                        words.iter().map(move |&w| {
                            let mut q = p.clone();
                            q.push(w);
                            q
                        })
                    })
                    .collect();
            }
        }
    }
    let mut norm_worst = 0.0f64;
    for seed in 1000..1200u64 {
        let (s, v) = random_shape(seed, 4, 4);
        let (m, vocab) = random_instance(seed, s, v);
        let dist = brute_distribution(&m, &vocab, Reduction::Merge, DEFAULT_ENUMERATION_CAP).unwrap();
        let total: f64 = dist
            .keys()
            .map(|y| {
                ctc_forward(&m, &WordSequence::new(y.clone(), &vocab).unwrap(), &vocab)
                    .unwrap()
                    .prob()
            })
            .sum();
        norm_worst = norm_worst.max((total - 1.0).abs());
    }
    Outcome::new(
        failures == 0 && norm_worst <= 1e-6,
        format!(
            "500 instances, {targets} targets, {failures} mismatches, max |diff| {worst:.2e}; normalization max |1 - sum| {norm_worst:.2e} over 200 instances"
        ),
        digest,
    )
}

fn c5_budget() -> Outcome {
    let mut violations = 0usize;
    let mut decodes = 0usize;
    let mut digest = Vec::new();
    for seed in 0..1000u64 {
        let inst = generate(&GenConfig::new(32, 40, seed)).unwrap();
        for budget in [10, 30, 50, 75] {
            for inclusive in [true, false] {
                let cfg = DecoderConfig::new(budget).with_inclusive_budget(inclusive);
                let r = decode_length_control(&inst.matrix, &inst.vocab, &cfg).unwrap();
                decodes += 1;
                let ok = if inclusive {
                    r.char_len <= budget
                } else {
                    r.char_len < budget
                };
                if !ok || r.char_len != r.words.text().chars().count() {
                    violations += 1;
                }
                digest.push(format!("{}:{:x}", r.words.text(), r.score.to_bits()));
            }
        }
    }
    Outcome::new(
        violations == 0,
        format!("1000 instances x budgets {{10,30,50,75}} x {{<=,<}}: {decodes} decodes, {violations} violations"),
        digest,
    )
}

fn c6_gap_sign() -> Outcome {
    let mut negative = 0usize;
    let mut nonzero_exact = 0usize;
    let mut runs = 0usize;
    let mut digest = Vec::new();
    for seed in 0..400u64 {
        let (s, v) = random_shape(seed, 5, 6);
        let (m, vocab) = random_instance(seed, s, v);
        for alpha in 1..=3 {
            for reduction in [Reduction::Merge, Reduction::NoMerge] {
                let cfg = DecoderConfig::new(1 + seed as usize % 12)
                    .with_bucket_size(alpha)
                    .with_reduction(reduction)
                    .with_inclusive_budget(seed % 4 != 0);
                let g = gap_report(&m, &vocab, &cfg).unwrap();
                runs += 1;
                if g.gap < 0.0 {
                    negative += 1;
                }
                if alpha == 1 && reduction == Reduction::NoMerge && g.gap != 0.0 {
                    nonzero_exact += 1;
                }
                digest.push(format!("{:x}", g.gap.to_bits()));
            }
        }
    }
    Outcome::new(
        negative == 0 && nonzero_exact == 0,
        format!("{runs} oracle comparisons: {negative} negative gaps, {nonzero_exact} nonzero gaps at alpha=1/nomerge"),
        digest,
    )
}

fn c7_bucket_tradeoff() -> Outcome {
    let cfg = BenchConfig {
        alphas: vec![1, 2, 4, 8],
        budgets: vec![50],
        instances: 200,
        seed: 0,
        slots: 64,
        vocab_size: 50,
        top_k: 20,
        ..BenchConfig::default()
    };
    let report = run_bench(&cfg).unwrap();
    let rows: Vec<_> = cfg.alphas.iter().map(|&a| report.row(a, 50).unwrap()).collect();
    let times: Vec<f64> = rows.iter().map(|r| r.mean_time.as_secs_f64() * 1e6).collect();
    let scores: Vec<f64> = rows.iter().map(|r| r.mean_score).collect();
    let decreasing = times.windows(2).all(|w| w[0] > w[1]);
    let quality = scores[0] >= scores[3];
    let curve = cfg
        .alphas
        .iter()
        .zip(times.iter().zip(&scores))
        .map(|(a, (t, s))| format!("alpha={a}: {t:.1}us score {s:.4}"))
        .collect::<Vec<_>>()
        .join("; ");
    let digest = scores.iter().map(|s| format!("{:x}", s.to_bits())).collect();
    Outcome::new(decreasing && quality, curve, digest)
}

fn c8_length_transfer() -> Outcome {
    let inst = generate(&GenConfig::new(64, 50, 2024)).unwrap();
    let mut prev = f64::NEG_INFINITY;
    let mut pass = true;
    let mut parts = Vec::new();
    let mut digest = Vec::new();
    for budget in [30, 50, 75] {
        let r = decode_length_control(&inst.matrix, &inst.vocab, &DecoderConfig::new(budget)).unwrap();
        pass &= r.char_len <= budget && r.score >= prev;
        prev = r.score;
        parts.push(format!(
            "U={budget}: len {} score {:.4} {:?}",
            r.char_len,
            r.score,
            r.words.text()
        ));
        digest.push(format!("{}:{:x}", r.words.text(), r.score.to_bits()));
    }
    Outcome::new(pass, parts.join("; "), digest)
}

fn c9_rouge() -> Outcome {
    let s = rouge_text("a b c", "a b d");
    let third = 2.0 / 3.0;
    let eq = |a: f64, b: f64| (a - b).abs() < 1e-12;
    let mut pass = eq(s.r1.precision, third) && eq(s.r1.recall, third) && eq(s.r1.f1, third);
    pass &= eq(s.r2.f1, 0.5) && eq(s.rl.f1, third);
    let l = rouge_text("b c", "a b c d");
    pass &= eq(l.rl.recall, 0.5) && eq(l.rl.precision, 1.0);
    let id = rouge_text("police arrest three suspects", "police arrest three suspects");
    pass &= [id.r1, id.r2, id.rl]
        .iter()
        .all(|p| p.precision == 1.0 && p.recall == 1.0 && p.f1 == 1.0);
    Outcome::new(
        pass,
        format!(
            "R-1 F1 {:.6}, R-2 F1 {:.6}, R-L F1 {:.6}; LCS case P {:.3} R {:.3}; identity {:.3}",
            s.r1.f1, s.r2.f1, s.rl.f1, l.rl.precision, l.rl.recall, id.rl.f1
        ),
        vec![],
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 reductions on the worked examples", c1_reductions),
        ("2 exactness at bucket size 1 without merging", c2_exactness),
        ("3 inexactness counterexamples", c3_counterexamples),
        ("4 CTC forward vs enumeration, normalization", c4_ctc),
        ("5 budget satisfaction", c5_budget),
        ("6 approximation gap sign", c6_gap_sign),
        ("7 bucket-size time/quality trade-off", c7_bucket_tradeoff),
        ("8 length transfer across budgets", c8_length_transfer),
        ("9 ROUGE hand cases", c9_rouge),
    ];
    let mut failed = 0;
    let mut digests = Vec::new();
    for (name, run) in criteria {
        let start = Instant::now();
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!(
            "[{tag}] criterion {name} ({:.1}s): {}",
            start.elapsed().as_secs_f64(),
            o.detail
        );
        digests.push(o.digest);
    }

    // 10: criteria 2-8 again with the same seeds
    let start = Instant::now();
    let again = [
        c2_exactness,
        c3_counterexamples,
        c4_ctc,
        c5_budget,
        c6_gap_sign,
        c7_bucket_tradeoff,
        c8_length_transfer,
    ];
    let mut differing = Vec::new();
    for (i, run) in again.into_iter().enumerate() {
        if run().digest != digests[i + 1] {
            differing.push(i + 2);
        }
    }
    let pass = differing.is_empty();
    failed += usize::from(!pass);
    println!(
        "[{}] criterion 10 determinism on repeat ({:.1}s): criteria with differing outputs {:?}",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        differing
    );

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
