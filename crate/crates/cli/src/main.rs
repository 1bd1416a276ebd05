use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Decision curves, cost curves and Brier curves for scored binary data.
#[derive(Debug, Parser)]
#[command(name = "costdca", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decision curve with treat-all/treat-none and optional upper envelope.
    Dca(DcaArgs),
    /// Brier curve, lower envelope, baseline cost lines and loss decomposition.
    Brier(BrierArgs),
    /// Cost lines of every ROC point and their lower envelope.
    Cost(CostArgs),
    /// ROC operating points and convex hull.
    Roc(RocArgs),
    /// Brier score, refinement and calibration loss as JSON.
    Score(ScoreArgs),
    /// Write a dataset with Gaussian class-conditional scores.
    Simulate(SimulateArgs),
    /// Compare two models threshold by threshold.
    Compare(CompareArgs),
    /// Isometric line coefficients in ROC space.
    Isometrics(IsometricArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Dca,
    BrierScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Accuracy,
    NetBenefit,
    BrierLoss,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// CSV with header `score,label`.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct DcaArgs {
    #[command(flatten)]
    pub input: InputArg,
    /// Threshold grid as start:stop:step.
    #[arg(long, default_value = "0:0.99:0.005")]
    pub grid: String,
    #[arg(long, value_enum, default_value = "dca")]
    pub scheme: SchemeArg,
    /// Add the upper-envelope decision curve.
    #[arg(long)]
    pub upper_envelope: bool,
    /// Divide net benefit by the positive prior.
    #[arg(long)]
    pub standardized: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BrierArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value = "0:1:0.005")]
    pub grid: String,
    /// Also export the per-class components of the Brier curve.
    #[arg(long)]
    pub components: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Decomposition summary.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long, default_value = "0:1:0.005")]
    pub grid: String,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RocArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub input: InputArg,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "pi-p")]
    pub pi_p: f64,
    #[arg(long = "mu-n")]
    pub mu_n: f64,
    #[arg(long = "sd-n")]
    pub sd_n: f64,
    #[arg(long = "mu-p")]
    pub mu_p: f64,
    #[arg(long = "sd-p")]
    pub sd_p: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long = "input-a")]
    pub input_a: PathBuf,
    #[arg(long = "input-b")]
    pub input_b: PathBuf,
    #[arg(long, default_value = "0:0.99:0.005")]
    pub grid: String,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IsometricArgs {
    /// Dataset supplying the class priors (and hull points with --through-hull).
    #[arg(long, conflicts_with = "pi_p")]
    pub input: Option<PathBuf>,
    #[arg(long = "pi-p")]
    pub pi_p: Option<f64>,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Threshold; required for net-benefit and brier-loss.
    #[arg(long)]
    pub t: Option<f64>,
    /// Comma-separated metric levels.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<f64>,
    /// One line through every ROC hull vertex of --input.
    #[arg(long, requires = "input")]
    pub through_hull: bool,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
