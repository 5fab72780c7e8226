//! `sparse-tone`: generate signals, run each recovery stage, benchmark and
//! evaluate saved models.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod error;
mod noise_arg;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::noise_arg::NoiseArg;

/// Recovery of Fourier-sparse signals from noisy samples.
#[derive(Debug, Parser)]
#[command(name = "sparse-tone", version)]
pub struct Cli {
    /// Log verbosity; repeat for more.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Include wall-clock times in reports.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Directory for (t, re, im) and (f, mag) CSVs of the result.
    #[arg(long, global = true, value_name = "DIR")]
    pub emit_plot_data: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a random sparse signal and write it as JSON.
    Gen(GenArgs),
    /// Learn a random polynomial from noisy samples.
    RecoverPoly(RecoverPolyArgs),
    /// One-cluster recovery of a signal file.
    #[command(name = "recover-1")]
    RecoverOne(RecoverOneArgs),
    /// Full k-cluster recovery of a signal file.
    RecoverK(RecoverKArgs),
    /// Tabulate a filter in time and frequency.
    Filters(FiltersArgs),
    /// Run a benchmark suite and write one CSV row per trial.
    Bench(BenchArgs),
    /// Evaluate a saved model at given times.
    EvalModel(EvalModelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Amplitudes {
    Unit,
    LogUniform,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long = "F")]
    pub f_max: f64,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_len: f64,
    /// Minimum distance between tones.
    #[arg(long, default_value_t = 0.0)]
    pub min_gap: f64,
    #[arg(long, value_enum, default_value_t = Amplitudes::Unit)]
    pub amplitudes: Amplitudes,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverPolyArgs {
    #[arg(long)]
    pub degree: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_len: f64,
    #[arg(long, default_value = "none")]
    pub noise: NoiseArg,
    /// Failure probability for median boosting; a single run when absent.
    #[arg(long)]
    pub boost_p: Option<f64>,
    /// Partition parameter of the sampling scheme.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverOneArgs {
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, default_value = "none")]
    pub noise: NoiseArg,
    /// Cluster half-width; defaults to `2/T`.
    #[arg(long = "Delta")]
    pub cluster_width: Option<f64>,
    /// Tail parameter of the window.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverKArgs {
    #[arg(long)]
    pub signal: PathBuf,
    #[arg(long, default_value = "none")]
    pub noise: NoiseArg,
    /// JSON overrides for the recovery configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Sparsity; defaults to the tone count of the signal file.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterKind {
    H,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FiltersArgs {
    #[arg(long, value_enum)]
    pub inspect: FilterKind,
    /// JSON object with `k`, `T`, `delta`, `bins`, `alpha` and `points`.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long, value_enum, default_value_t = Emit::Csv)]
    pub emit: Emit,
    /// Output directory; `<h|g>_time` and `<h|g>_freq` tables are written there.
    #[arg(short = 'o', long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Poly,
    One,
    K,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: SuiteArg,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub degree: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_len: f64,
    #[arg(long = "F", default_value_t = 1000.0)]
    pub f_max: f64,
    /// Signal-to-noise ratio in dB; defaults to 10 for `poly` and 20 otherwise.
    #[arg(long)]
    pub snr: Option<f64>,
    #[arg(long)]
    pub noiseless: bool,
    /// Seed of the first trial; trial `i` uses `seed + i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct EvalModelArgs {
    /// A model file or a report containing one.
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated evaluation times.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Vec<f64>,
    /// File with one evaluation time per line.
    #[arg(long)]
    pub t_file: Option<PathBuf>,
    #[arg(short = 'o', long)]
    pub out: Option<PathBuf>,
}

fn init_threads() -> Result<(), error::CliError> {
    let Ok(v) = std::env::var("SPARSE_TONE_THREADS") else {
        return Ok(());
    };
    let n: usize =
        v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            error::CliError::Config(format!("SPARSE_TONE_THREADS must be a positive integer, got `{v}`"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| error::CliError::Config(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();
    match init_threads().and_then(|()| commands::run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
