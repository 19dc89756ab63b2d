use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(
    name = "bbdqc1",
    version,
    about = "Black-box DQC1 trace estimation and one-clean-qubit factoring"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Master seed for every random workload.
    #[arg(long, global = true, env = "BBDQC1_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Output format; `csv` applies to distributions only.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Run sampling loops on one thread. Results are identical either way.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate a normalized trace with standard and/or black-box DQC1.
    Trace(TraceArgs),
    /// Factor N with the black-box order-finding pipeline.
    Factor(FactorArgs),
    /// Exact outcome distribution and counting report for (N, a).
    Analyze(AnalyzeArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Builtin {
    Identity,
    Modmul,
    Diag,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProtocolChoice {
    Standard,
    Bb,
    Both,
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("source").required(true).args(["builtin", "matrix"])))]
pub struct TraceArgs {
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// JSON file `{"dim": d, "re": [[..]], "im": [[..]]}` (row-major).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Dimension for `identity` and `random`.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Multiplier for `modmul`.
    #[arg(long)]
    pub a: Option<u64>,
    /// Modulus for `modmul`.
    #[arg(long = "N", alias = "n", value_name = "N")]
    pub n: Option<u64>,
    /// Comma-separated phases for `diag`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub phases: Option<Vec<f64>>,
    /// Multiply the unitary by `e^{iθ}`.
    #[arg(long, allow_hyphen_values = true)]
    pub global_phase: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: u64,
    #[arg(long, value_enum, default_value_t = ProtocolChoice::Both)]
    pub protocol: ProtocolChoice,
}

#[derive(Debug, Args, Serialize)]
pub struct FactorArgs {
    #[arg(value_name = "N")]
    pub n: u64,
    /// Attempt cap.
    #[arg(long, default_value_t = 500)]
    pub attempts: usize,
    /// Fixed base instead of random draws.
    #[arg(long)]
    pub a: Option<u64>,
    /// Run every attempt, not just until the first success.
    #[arg(long)]
    pub sample_all: bool,
    /// Use the branch-state circuit simulation instead of the eigenpath.
    #[arg(long)]
    pub faithful: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[arg(value_name = "N")]
    pub n: u64,
    #[arg(value_name = "A")]
    pub a: u64,
    /// Phase-estimation size; defaults to the smallest power of two >= N².
    #[arg(long)]
    pub t: Option<u64>,
    /// Also write the counting report (JSON) to this path.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Smaller sweeps and sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Fault injection hook for testing the harness.
    #[arg(long)]
    pub break_phase_invariance: bool,
}
