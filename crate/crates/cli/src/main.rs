//! `privaudio` command-line front-end.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Metrics directory used when neither `--metrics-dir` nor the environment
/// variable is set: the placeholder tables shipped with the library.
const SHIPPED_METRICS_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data");

#[derive(Parser, Debug)]
#[command(name = "privaudio", version, about = "Privacy-aware acoustic feature extraction and selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract features from a WAV file, one row per window.
    Extract(ExtractArgs),
    /// Choose the feature subset for a sound category under a latency budget.
    Select(SelectArgs),
    /// Measure per-feature extraction latency and write latency.csv.
    Profile(ProfileArgs),
    /// Speaker information leakage index from attribute accuracies.
    Sili(IndexArgs),
    /// Composite speech leakage index from WER, PER and eSTOI.
    Csli(IndexArgs),
    /// Rank feature components by correlation and mutual information with a label.
    Analyze(AnalyzeArgs),
    /// List the feature catalog.
    Registry,
    /// Show the privacy, utility and latency scores of one feature.
    GetMetrics(GetMetricsArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum CategoryArg {
    Animal,
    Nature,
    HumanNonSpeech,
    Interior,
    Exterior,
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long, default_value_t = 500.0)]
    window_ms: f64,
    /// Defaults to half the window.
    #[arg(long)]
    hop_ms: Option<f64>,
    /// Audio is resampled to this rate before windowing.
    #[arg(long, default_value_t = 16_000)]
    rate_hz: u32,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    window: WindowArgs,
    /// `all`, a comma-separated list of ids, or `@file` with one id per line.
    #[arg(long, default_value = "all")]
    features: String,
    /// Live capture device. Reserved; only file input is supported.
    #[arg(long)]
    device: Option<String>,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    /// Directory holding privacy.csv, utility.csv and latency.csv.
    #[arg(long, env = "FEATURESENSE_METRICS_DIR", default_value = SHIPPED_METRICS_DIR)]
    metrics_dir: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct SelectArgs {
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "interior")]
    category: CategoryArg,
    /// Latency budget in milliseconds (100 ms = 0.1 s).
    #[arg(long, default_value_t = 100.0)]
    budget_ms: f64,
    #[command(flatten)]
    metrics: MetricsArgs,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    /// WAV file to time on; seeded noise when omitted.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Where to write the profile; stdout when omitted.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    window: WindowArgs,
    #[arg(long, default_value = "all")]
    features: String,
    #[arg(long, default_value_t = 100)]
    iterations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct IndexArgs {
    /// CSV `attribute,accuracy,baseline,weight` or the equivalent JSON.
    #[arg(long)]
    input: std::path::PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Feature table as written by `extract`.
    #[arg(long)]
    input: std::path::PathBuf,
    /// CSV `row_id,label`.
    #[arg(long)]
    labels: std::path::PathBuf,
    #[arg(long, default_value_t = privaudio::leakage::DEFAULT_MI_BINS)]
    bins: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct GetMetricsArgs {
    #[arg(long)]
    feature: String,
    #[command(flatten)]
    metrics: MetricsArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Extract(a) => commands::extract(a),
        Command::Select(a) => commands::select(a),
        Command::Profile(a) => commands::profile(a),
        Command::Sili(a) => commands::sili(a),
        Command::Csli(a) => commands::csli(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Registry => commands::registry(),
        Command::GetMetrics(a) => commands::get_metrics(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
