//! `cesaro`: moments, operator application, norms, criteria and
//! verification suites from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use cesaro_core::config::OutputFormat;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const MAX_DEGREE_VAR: &str = "CESARO_MAX_DEGREE";
pub const DEFAULT_MAX_DEGREE: usize = 1 << 14;

#[derive(Debug)]
pub enum Failure {
    Verify(String),
    Input(String),
}

impl From<cesaro_core::Error> for Failure {
    fn from(e: cesaro_core::Error) -> Self {
        match e {
            cesaro_core::Error::VerdictConflict { .. } => Failure::Verify(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "cesaro", version, about = "Generalized Cesàro-like operators on truncated power series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Power moments μ_0..μ_N of a measure.
    Moments(MomentsArgs),
    /// Coefficients of 𝒞_{μ,α}(f).
    Apply(ApplyArgs),
    /// A function-space norm of a series.
    Norm(NormArgs),
    /// Partial sums and verdict of the moment criterion.
    Criterion(CriterionArgs),
    /// Verdict, growth probe and compactness probe as one JSON document.
    Theorem(TheoremArgs),
    /// Run a built-in verification suite.
    Verify(VerifyArgs),
    /// Verdicts and growth ratios over a grid read from a TOML file.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct SeriesArgs {
    /// CSV file with `index,real,imag` rows.
    #[arg(long, conflicts_with = "series")]
    input: Option<PathBuf>,
    /// Built-in series: log, binomial:<beta>, logpower:<beta>:<gamma>, monomial:<k>.
    #[arg(long)]
    series: Option<String>,
    /// Truncation degree for --series.
    #[arg(long, default_value_t = 1024)]
    degree: usize,
}

#[derive(Args)]
struct MomentsArgs {
    #[arg(long)]
    measure: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ApplyArgs {
    #[arg(long)]
    measure: String,
    #[arg(long)]
    alpha: f64,
    #[command(flatten)]
    source: SeriesArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum NormKind {
    Bloch,
    Besov,
    Besov1,
    Lipschitz,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long, value_enum)]
    kind: NormKind,
    /// p for besov, s for lipschitz.
    #[arg(long)]
    p: Option<f64>,
    #[command(flatten)]
    source: SeriesArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CriterionArgs {
    #[arg(long)]
    measure: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p: f64,
    /// Moment degree (at least 1024).
    #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
    n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct TheoremArgs {
    #[arg(long)]
    measure: String,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p: f64,
    /// Growth-probe degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = cesaro_core::criteria::PROBE_DEGREES)]
    degrees: Vec<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// 2.1, 2.2, 2.3, 2.4, inner-sum, forms or all.
    #[arg(long)]
    lemma: String,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the output path of the config file.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn max_degree() -> Result<usize, Failure> {
    match std::env::var(MAX_DEGREE_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Input(format!("{MAX_DEGREE_VAR} = `{v}` is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_DEGREE),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = max_degree().and_then(|cap| match cli.command {
        Command::Moments(a) => commands::moments(a, cap),
        Command::Apply(a) => commands::apply(a, cap),
        Command::Norm(a) => commands::norm(a, cap),
        Command::Criterion(a) => commands::criterion(a, cap),
        Command::Theorem(a) => commands::theorem(a, cap),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a, cap),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
