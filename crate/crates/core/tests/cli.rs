use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lenctl"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn lenctl")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn counterexample() -> String {
    fixture("counterexample.txt").to_string_lossy().into_owned()
}

#[test]
fn decode_counterexample_bucket_two() {
    let f = counterexample();
    let o = run(&[
        "decode",
        &f,
        "--mode",
        "length-control",
        "--variant",
        "nomerge",
        "--bucket-size",
        "2",
        "--budget",
        "4",
        "--target-bucket",
        "2",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "am I");
    assert_eq!(lines[1], "length 4");
    let score: f64 = lines[2].strip_prefix("score ").unwrap().parse().unwrap();
    assert!((score.exp() - 0.04).abs() < 1e-12);

    let o = run(&[
        "decode",
        &f,
        "--variant",
        "nomerge",
        "--bucket-size",
        "2",
        "--budget",
        "4",
        "--select",
        "longest",
    ]);
    assert_eq!(stdout(&o).lines().next(), Some("am I"));
}

#[test]
fn decode_zero_budget_prints_empty_line() {
    let o = run(&["decode", &counterexample(), "--budget", "0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "");
    assert_eq!(lines[1], "length 0");
}

#[test]
fn greedy_and_exact_modes() {
    let o = run(&["decode", &counterexample(), "--mode", "greedy"]);
    assert_eq!(stdout(&o).lines().next(), Some("am"));
    let o = run(&["decode", &counterexample(), "--mode", "exact", "--budget", "4"]);
    assert_eq!(stdout(&o).lines().next(), Some("I am"));
    let o = run(&[
        "decode",
        &counterexample(),
        "--mode",
        "greedy-truncate",
        "--budget",
        "1",
        "--truncate",
        "char",
    ]);
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("a"));
    assert_eq!(out.lines().nth(1), Some("length 1"));
}

#[test]
fn infeasible_budget_warns() {
    let o = run(&[
        "decode",
        &counterexample(),
        "--budget",
        "3",
        "--bucket-size",
        "1",
        "--target-bucket",
        "3",
        "--strict-budget",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(stdout(&o).lines().next(), Some(""));
}

#[test]
fn budget_sweep_respects_each_budget() {
    let dir = tempdir();
    let m = dir.path().join("m.txt");
    let o = run(&[
        "gen",
        "--slots",
        "40",
        "--vocab-size",
        "60",
        "--seed",
        "3",
        "-o",
        m.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    for strict in [false, true] {
        let mut args = vec!["decode", m.to_str().unwrap(), "--budget", "30,50,75"];
        if strict {
            args.push("--strict-budget");
        }
        let out = stdout(&run(&args));
        let mut budget = 0usize;
        let mut seen = 0;
        for line in out.lines() {
            if let Some(b) = line.strip_prefix("# budget ") {
                budget = b.parse().unwrap();
            } else if let Some(l) = line.strip_prefix("length ") {
                let l: usize = l.parse().unwrap();
                assert!(if strict { l < budget } else { l <= budget });
                seen += 1;
            }
        }
        assert_eq!(seen, 3);
    }
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let a = stdout(&run(&["gen", "--slots", "5", "--vocab-size", "9", "--seed", "42"]));
    let b = stdout(&run(&["gen", "--slots", "5", "--vocab-size", "9", "--seed", "42"]));
    assert_eq!(a, b);
    let parsed = lenctl::MatrixFile::from_bytes(a.as_bytes()).unwrap();
    assert_eq!(parsed.to_bytes(lenctl::Encoding::Text), a.as_bytes());

    let dir = tempdir();
    let p = dir.path().join("m.bin");
    assert!(run(&[
        "gen",
        "--slots",
        "5",
        "--vocab-size",
        "9",
        "--seed",
        "42",
        "--binary",
        "-o",
        p.to_str().unwrap()
    ])
    .status
    .success());
    let bin = lenctl::MatrixFile::read(&p).unwrap();
    assert_eq!(bin, parsed);
}

#[test]
fn ctc_score_outputs() {
    let f = fixture("two_slot.txt");
    let f = f.to_str().unwrap();
    let lp: f64 = stdout(&run(&["ctc-score", f, "--target", "a"])).trim().parse().unwrap();
    assert!((lp - 0.72f64.ln()).abs() < 1e-12);
    let empty: f64 = stdout(&run(&["ctc-score", f, "--target", ""])).trim().parse().unwrap();
    assert!((empty - (0.4f64.ln() + 0.7f64.ln())).abs() < 1e-12);
    assert_eq!(stdout(&run(&["ctc-score", f, "--target", "a a a"])).trim(), "-inf");
    let o = run(&["ctc-score", f, "--target", "a zebra"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zebra"));
}

#[test]
fn score_files() {
    let dir = tempdir();
    let c = dir.path().join("c.txt");
    let r = dir.path().join("r.txt");
    std::fs::write(&c, "a b c\nthe cat\n\n").unwrap();
    std::fs::write(&r, "a b d\nthe cat\nsomething\n").unwrap();
    let o = run(&["score", c.to_str().unwrap(), r.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    let first: Vec<&str> = out.lines().nth(1).unwrap().split('\t').collect();
    assert_eq!(first[1], "0.666667");
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3 is empty"));

    let o = run(&["score", r.to_str().unwrap(), r.to_str().unwrap(), "--mode", "recall"]);
    let corpus = stdout(&o).lines().last().unwrap().to_string();
    assert_eq!(corpus, "corpus\t1.000000\t0.666667\t1.000000");

    std::fs::write(&c, "just one line\n").unwrap();
    let o = run(&["score", c.to_str().unwrap(), r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_emits_csv_rows() {
    let o = run(&[
        "bench",
        "--alphas",
        "1,2",
        "--budgets",
        "8",
        "--instances",
        "3",
        "--slots",
        "4",
        "--vocab-size",
        "5",
        "--variant",
        "nomerge",
        "--reps",
        "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let csv: Vec<&str> = out.lines().skip_while(|l| !l.starts_with("alpha,")).collect();
    assert_eq!(csv[0], lenctl::bench::CSV_HEADER);
    assert_eq!(csv.len(), 3);
    // alpha 1 without merging is exact
    let cols: Vec<&str> = csv[1].split(',').collect();
    assert_eq!(cols[0], "1");
    assert_eq!(cols[8].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn malformed_input_and_usage_errors() {
    let dir = tempdir();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "not a matrix\n").unwrap();
    assert_eq!(run(&["decode", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["decode"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["decode", &counterexample(), "--variant", "sideways"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["decode", &counterexample(), "--bucket-size", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}
