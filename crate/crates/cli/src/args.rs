use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Pure-state estimation from three measurement bases.
#[derive(Debug, Parser)]
#[command(name = "tribasis", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Measure a state with simulated shot noise and estimate it.
    Simulate(SimulateArgs),
    /// Estimate a state from a counts file.
    Reconstruct(ReconstructArgs),
    /// Monte-Carlo accuracy sweep over dimensions and shot counts, as CSV.
    Sweep(SweepArgs),
    /// Check the correlator formulas and exact recovery against amplitudes.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    #[value(name = "3bb")]
    ThreeBases,
    #[value(name = "5bb")]
    FiveBases,
}

/// Pair amplitudes and completion phases; defaults to `a = b = 1/sqrt(2)`
/// and phases `pi n (n+1) / d`.
#[derive(Debug, Clone, Default, Args)]
pub struct BasisArgs {
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Comma-separated completion phases, one per pair.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Dimension; inferred from --state when omitted.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Shots per basis.
    #[arg(long)]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "3bb")]
    pub method: MethodArg,
    /// Comma-separated complex amplitudes such as `1,0.5-0.2i,-i,0`, or `haar`.
    #[arg(long, default_value = "haar", allow_hyphen_values = true)]
    pub state: String,
    /// Randomized basis re-draws when the estimate is flagged; 0 disables.
    #[arg(long, default_value_t = 3)]
    pub retries: u32,
    /// Canonical frequencies below this are zero (default: no recorded outcome).
    #[arg(long)]
    pub zero_eps: Option<f64>,
    #[command(flatten)]
    pub basis: BasisArgs,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Counts of the final measurement, in the counts-file format.
    #[arg(long)]
    pub counts_output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    /// Counts file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub zero_eps: Option<f64>,
    /// Report JSON; printed to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Sweep configuration JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Results CSV; printed to stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run on a single thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use the unnormalized real-part formula `(p+ - p-)/(ab)` with the
    /// non-orthogonal minus vector `a|k> - b|k+1>`; expected to fail.
    #[arg(long)]
    pub literal_scaling: bool,
}
