use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "qshot",
    version,
    about = "Measurement shot counts for quantum program verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shots for inverse, swap, pure-state, or mixed-state discrimination.
    Shots(ShotsArgs),
    /// Quantum Chernoff quantity and related measures for two state files.
    Qcb(QcbArgs),
    /// Shots for a chi-square goodness-of-fit test.
    Chisq(ChisqArgs),
    /// Noise-calibrated binomial planning (`--q1`) or decision (`--zeros`).
    Noise(NoiseArgs),
    /// Split a program fidelity budget across its blocks.
    Budget(BudgetArgs),
    /// Monte Carlo check of an analytic estimate.
    Validate(ValidateArgs),
    /// CSV data behind the shot-count figures.
    Curve(CurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    Inverse,
    Swap,
    Pure,
    Mixed,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("distance").required(true).args(["fidelity", "trace_distance"]))]
pub struct ShotsArgs {
    #[arg(long, value_enum)]
    pub test: TestKind,
    #[arg(long)]
    pub fidelity: Option<f64>,
    /// Trace distance; inverse, swap, and pure tests use F = 1 - T^2.
    #[arg(long)]
    pub trace_distance: Option<f64>,
    /// Target error probability.
    #[arg(long, default_value_t = 0.01)]
    pub pe: f64,
    /// Noise regime factor R in [1, 2]; switches inverse and swap to their noisy forms.
    #[arg(long)]
    pub regime_factor: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct QcbArgs {
    #[arg(long)]
    pub rho: PathBuf,
    #[arg(long)]
    pub sigma: PathBuf,
    /// Also report `ln(pe) / ln(Q)` shots.
    #[arg(long)]
    pub pe: Option<f64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChisqCase {
    /// Readout whose classical overlap attains the fidelity.
    Attaining,
    /// Small-discrepancy lower-bound requirement.
    Small,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("effect").required(true).args(["w2", "fidelity", "p"]))]
pub struct ChisqArgs {
    /// Number of outcome bins; inferred from the files with --p/--q.
    #[arg(long)]
    pub bins: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    /// Pearson effect size w^2.
    #[arg(long)]
    pub w2: Option<f64>,
    #[arg(long, requires = "case")]
    pub fidelity: Option<f64>,
    #[arg(long, value_enum, requires = "fidelity")]
    pub case: Option<ChisqCase>,
    /// Alternative distribution (JSON array of probabilities).
    #[arg(long, requires = "q")]
    pub p: Option<PathBuf>,
    /// Null distribution (JSON array of probabilities).
    #[arg(long, requires = "p")]
    pub q: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["q1", "zeros"]))]
pub struct NoiseArgs {
    /// Calibrated baseline probability of the all-zero outcome.
    #[arg(long)]
    pub q0: f64,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    /// Plan mode: target probability to detect.
    #[arg(long, requires = "beta")]
    pub q1: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Decide mode: observed all-zero count.
    #[arg(long, requires = "shots")]
    pub zeros: Option<u64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Program spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub out: OutputFormat,
    /// Exit 1 if any block needs more than 2^63 shots.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    Inverse,
    Swap,
    Chisq,
    Binomial,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    /// Fidelity for the inverse and swap scenarios.
    #[arg(long)]
    pub fidelity: Option<f64>,
    /// Shots per trial; defaults to the analytic estimate for the scenario.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Error probability used for the default inverse and swap shot counts.
    #[arg(long, default_value_t = 0.01)]
    pub pe: f64,
    /// Bins for the chisq scenario when no distribution files are given (p = q = uniform).
    #[arg(long, default_value_t = 16)]
    pub bins: usize,
    #[arg(long, requires = "q")]
    pub p: Option<PathBuf>,
    #[arg(long)]
    pub q: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    #[arg(long)]
    pub q0: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveId {
    #[value(name = "fid_vs_shots")]
    FidVsShots,
    #[value(name = "test_comparison")]
    TestComparison,
    #[value(name = "noise_binomial")]
    NoiseBinomial,
    #[value(name = "trace_vs_shots")]
    TraceVsShots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
    /// Log-spaced in `1 - x`, dense near 1.
    LogComplement,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum)]
    pub curve: CurveId,
    #[arg(long)]
    pub start: Option<f64>,
    #[arg(long)]
    pub stop: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    #[arg(long)]
    pub pe: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    pub beta: f64,
    /// Chi-square bin counts for test_comparison.
    #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8, 16, 32, 64, 128])]
    pub bins: Vec<usize>,
    /// Target probabilities for noise_binomial.
    #[arg(long, value_delimiter = ',', default_values_t = [0.90, 0.99])]
    pub q1: Vec<f64>,
    #[arg(long, default_value_t = 2.0)]
    pub regime_factor: f64,
}
