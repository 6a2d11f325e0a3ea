use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Wave, particle and mixedness quantifiers for finite-dimensional quantum states.
#[derive(Debug, Parser)]
#[command(name = "triality", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate C, D and M for one state.
    Eval(EvalArgs),
    /// Minimize the ensemble average of C over pure-state decompositions.
    Roof(RoofArgs),
    /// Evaluate the triality along a one-parameter state family.
    Sweep(SweepArgs),
    /// Attach path detectors and compare mixedness with and without them.
    Interf(InterfArgs),
    /// Run randomized property suites.
    Check(CheckArgs),
    /// Write a state file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Generating function.
    #[arg(long = "f", value_name = "NAME")]
    pub f: String,
    /// Divide by the value at the uniform distribution.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Ensemble size (defaults to min(rank^2, 2 dim), at least the rank).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Iteration budget per restart.
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    /// Stop once the step size falls below this.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Random seed; falls back to TRIALITY_SEED.
    #[arg(long, env = "TRIALITY_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Direct,
    Roof,
    Quadratic,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    /// Output file; `.csv` selects CSV, anything else JSON. Defaults to stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RoofArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FamilyArg {
    Depolarize,
    DephaseMix,
    Antidephase,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Direct)]
    pub mode: ModeArg,
    /// Grid points from p = 1 down to p = 0, both included.
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorMeasure {
    L1,
}

#[derive(Debug, Args)]
pub struct InterfArgs {
    #[arg(long, value_name = "FILE")]
    pub state: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub detectors: PathBuf,
    #[arg(long, value_enum, default_value_t = DetectorMeasure::L1)]
    pub measure: DetectorMeasure,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Axioms,
    Theorems,
    Examples,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Direct,
    Roof,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Comma-separated generating functions.
    #[arg(
        long = "f",
        value_name = "NAMES",
        default_value = "l1,entropy,fidelity",
        value_delimiter = ','
    )]
    pub functions: Vec<String>,
    #[arg(long, value_enum, default_value_t = CheckMode::Direct)]
    pub mode: CheckMode,
    /// Inclusive range `a..b` or a comma-separated list.
    #[arg(long, default_value = "2..6")]
    pub dims: String,
    /// Trials per check.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Roof restarts used in roof mode.
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    /// Roof iteration budget used in roof mode.
    #[arg(long, default_value_t = 2000)]
    pub iters: usize,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum GenKind {
    Basis,
    MaxCoherent,
    MaxMixed,
    RandomPure,
    RandomDensity,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub dim: usize,
    /// Basis index (basis only).
    #[arg(long)]
    pub index: Option<usize>,
    /// Rank (random_density only; defaults to full rank).
    #[arg(long)]
    pub rank: Option<usize>,
    #[command(flatten)]
    pub seed: SeedArg,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}
