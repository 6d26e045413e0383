use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lenctl::bench::{run_bench, BenchConfig};
use lenctl::ctc::ctc_score_text;
use lenctl::rouge::{corpus_rouge, rouge_text, tokenize, RougeMode};
use lenctl::synth::{generate, GenConfig};
use lenctl::{
    decode_greedy, decode_length_control, truncate, DecodeResult, DecoderConfig, Encoding, Error, LengthWeights,
    MatrixFile, Reduction, Selection, TruncateMode,
};

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "lenctl", version, about = "Length-controlled CTC summary decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a matrix file under a character budget.
    Decode(DecodeArgs),
    /// Write a seeded synthetic matrix file.
    Gen(GenArgs),
    /// Sweep bucket sizes and budgets over synthetic instances.
    Bench(BenchArgs),
    /// ROUGE between line-aligned candidate and reference files.
    Score(ScoreArgs),
    /// CTC marginal log-probability of a word sequence.
    CtcScore(CtcScoreArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    LengthControl,
    Exact,
    Greedy,
    GreedyTruncate,
}

#[derive(Args)]
struct DecodeArgs {
    input: PathBuf,
    /// Character budget; a comma-separated list decodes once per budget.
    #[arg(long, value_delimiter = ',', default_value = "75")]
    budget: Vec<usize>,
    #[arg(long, default_value_t = lenctl::decode::DEFAULT_BUCKET_SIZE)]
    bucket_size: usize,
    #[arg(long, default_value_t = lenctl::decode::DEFAULT_TOP_K)]
    top_k: usize,
    #[arg(long, default_value = "merge")]
    variant: Reduction,
    #[arg(long, default_value = "separator")]
    weights: LengthWeights,
    #[arg(long, value_enum, default_value = "length-control")]
    mode: Mode,
    /// Require length < budget instead of <=.
    #[arg(long)]
    strict_budget: bool,
    /// Final cell choice: best, longest.
    #[arg(long, default_value = "best")]
    select: Selection,
    /// Report this bucket only (overrides --select).
    #[arg(long)]
    target_bucket: Option<usize>,
    /// Truncation used by greedy-truncate: char or word.
    #[arg(long, default_value = "word")]
    truncate: TruncateMode,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    slots: usize,
    /// Vocabulary size including the blank.
    #[arg(long)]
    vocab_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    peakedness: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    binary: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    alphas: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "50")]
    budgets: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    slots: usize,
    #[arg(long, default_value_t = 50)]
    vocab_size: usize,
    #[arg(long, default_value_t = lenctl::decode::DEFAULT_TOP_K)]
    top_k: usize,
    #[arg(long, default_value_t = 1.0)]
    peakedness: f64,
    #[arg(long, default_value = "merge")]
    variant: Reduction,
    #[arg(long, default_value = "separator")]
    weights: LengthWeights,
    /// Run the brute-force oracle only when V^S is at most this.
    #[arg(long, default_value_t = 100_000)]
    oracle_max_size: u64,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    /// Also write the CSV rows here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    candidates: PathBuf,
    references: PathBuf,
    #[arg(long, default_value = "f1")]
    mode: RougeMode,
}

#[derive(Args)]
struct CtcScoreArgs {
    input: PathBuf,
    #[arg(long)]
    target: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = io::stdout();
    let mut out = out.lock();
    let result = match cli.command {
        Command::Decode(a) => cmd_decode(a, &mut out),
        Command::Gen(a) => cmd_gen(a, &mut out),
        Command::Bench(a) => cmd_bench(a, &mut out),
        Command::Score(a) => cmd_score(a, &mut out),
        Command::CtcScore(a) => cmd_ctc_score(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(CliError::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

enum CliError {
    Usage(String),
    Input(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.into())
    }
}

type CliResult = Result<(), CliError>;

fn print_result(out: &mut impl Write, text: &str, r: &DecodeResult) -> io::Result<()> {
    writeln!(out, "{text}")?;
    writeln!(out, "length {}", r.char_len)?;
    writeln!(out, "score {}", r.score)
}

fn cmd_decode(a: DecodeArgs, out: &mut impl Write) -> CliResult {
    if a.bucket_size == 0 || a.top_k == 0 {
        return Err(CliError::Usage("--bucket-size and --top-k must be positive".into()));
    }
    let file = MatrixFile::read(&a.input)?;
    let several = a.budget.len() > 1;
    for &budget in &a.budget {
        if several {
            writeln!(out, "# budget {budget}")?;
        }
        let mut cfg = match a.mode {
            Mode::Exact => DecoderConfig::exact(budget, a.weights),
            _ => DecoderConfig::new(budget)
                .with_bucket_size(a.bucket_size)
                .with_top_k(a.top_k)
                .with_reduction(a.variant)
                .with_weights(a.weights),
        }
        .with_inclusive_budget(!a.strict_budget)
        .with_selection(a.select);
        if let Some(l) = a.target_bucket {
            cfg = cfg.with_selection(Selection::Bucket(l));
        }
        match a.mode {
            Mode::LengthControl | Mode::Exact => {
                let r = decode_length_control(&file.matrix, &file.vocab, &cfg)?;
                if r.fallback {
                    eprintln!("warning: no summary fits budget {budget}; emitting the empty summary");
                }
                print_result(out, r.words.text(), &r)?;
            }
            Mode::Greedy => {
                let r = decode_greedy(&file.matrix, &file.vocab, a.variant, a.weights)?;
                print_result(out, r.words.text(), &r)?;
            }
            Mode::GreedyTruncate => {
                let mut r = decode_greedy(&file.matrix, &file.vocab, a.variant, a.weights)?;
                let limit = cfg.max_len().unwrap_or(0);
                let t = truncate(&r.words, limit, a.weights, a.truncate, &file.vocab);
                r.char_len = match a.truncate {
                    TruncateMode::Char => t.text.chars().count(),
                    TruncateMode::Word => lenctl::reduced_length(&t.words, a.weights, &file.vocab),
                };
                print_result(out, &t.text, &r)?;
            }
        }
    }
    Ok(())
}

fn cmd_gen(a: GenArgs, out: &mut impl Write) -> CliResult {
    if a.slots == 0 || a.vocab_size < 2 {
        return Err(CliError::Usage(
            "--slots must be positive and --vocab-size at least 2".into(),
        ));
    }
    let cfg = GenConfig::new(a.slots, a.vocab_size, a.seed).with_peakedness(a.peakedness);
    let file = generate(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let enc = if a.binary { Encoding::Binary } else { Encoding::Text };
    match a.output {
        Some(p) => file.write(p, enc)?,
        None => out.write_all(&file.to_bytes(enc))?,
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs, out: &mut impl Write) -> CliResult {
    let cfg = BenchConfig {
        alphas: a.alphas,
        budgets: a.budgets,
        instances: a.instances,
        seed: a.seed,
        slots: a.slots,
        vocab_size: a.vocab_size,
        top_k: a.top_k,
        peakedness: a.peakedness,
        reduction: a.variant,
        weights: a.weights,
        oracle_max_size: a.oracle_max_size,
        reps: a.reps,
    };
    if cfg.alphas.contains(&0) || cfg.top_k == 0 || cfg.slots == 0 || cfg.vocab_size < 2 {
        return Err(CliError::Usage(
            "alphas, top-k, slots must be positive; vocab-size at least 2".into(),
        ));
    }
    let report = run_bench(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let csv = report.to_csv();
    write!(out, "{}", report.to_table())?;
    writeln!(out)?;
    write!(out, "{csv}")?;
    if let Some(p) = a.csv {
        fs::write(p, csv)?;
    }
    Ok(())
}

fn read_lines(path: &PathBuf) -> Result<Vec<String>, CliError> {
    Ok(fs::read_to_string(path)?.lines().map(str::to_string).collect())
}

fn cmd_score(a: ScoreArgs, out: &mut impl Write) -> CliResult {
    let cands = read_lines(&a.candidates)?;
    let refs = read_lines(&a.references)?;
    if cands.len() != refs.len() {
        return Err(Error::InvalidInput(format!(
            "{} candidate lines but {} reference lines",
            cands.len(),
            refs.len()
        ))
        .into());
    }
    writeln!(out, "line\tR1\tR2\tRL")?;
    for (i, (c, r)) in cands.iter().zip(&refs).enumerate() {
        if tokenize(c).is_empty() {
            eprintln!("warning: candidate line {} is empty", i + 1);
        }
        let s = rouge_text(c, r);
        writeln!(
            out,
            "{}\t{:.6}\t{:.6}\t{:.6}",
            i + 1,
            s.r1.get(a.mode),
            s.r2.get(a.mode),
            s.rl.get(a.mode)
        )?;
    }
    let pairs: Vec<(&String, &String)> = cands.iter().zip(&refs).collect();
    let corpus = corpus_rouge(&pairs, a.mode)?;
    let (r1, r2, rl) = corpus.headline();
    writeln!(out, "corpus\t{r1:.6}\t{r2:.6}\t{rl:.6}")?;
    Ok(())
}

fn cmd_ctc_score(a: CtcScoreArgs, out: &mut impl Write) -> CliResult {
    let file = MatrixFile::read(&a.input)?;
    let score = ctc_score_text(&file.matrix, &file.vocab, &a.target)?;
    writeln!(out, "{}", score.log_prob())?;
    Ok(())
}
