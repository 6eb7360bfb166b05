use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "susybi", version, about = "Build and verify supersymmetric biorthogonal systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build χ, Λ, ψ for every level and write them out.
    Build(SystemArgs),
    /// Build a system and run the verification suite.
    Verify(VerifyArgs),
    /// Reproduce one of the closed-form models.
    Example(ExampleArgs),
    /// Partition function and the jump at ν = 0.
    Partition(PartitionArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Morse,
    Singular,
    Bessel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Rational,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Named superpotential.
    #[arg(long, value_enum, conflicts_with = "upsilon")]
    pub model: Option<Model>,
    /// Comma-separated υ_1, υ_2, ... (e.g. "1,-1/2,0,3").
    #[arg(long, allow_hyphen_values = true)]
    pub upsilon: Option<String>,
    /// Treat --upsilon as the truncation of an infinite series.
    #[arg(long, requires = "upsilon", conflicts_with = "model")]
    pub truncated: bool,
    /// Scale for the Morse model.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub nu: String,
    /// Highest level N.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// ψ truncation depth J.
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    /// Truncation order K of an infinite superpotential (default N + J + 2).
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum, default_value = "rational")]
    pub ring: RingArg,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Completeness window P (capped at min(N, J)).
    #[arg(long, default_value_t = 4)]
    pub window: usize,
    /// Add 1 to c_{n,j} of one sector before verifying: "n:j:plus" or "n:j:minus".
    #[arg(long)]
    pub perturb: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ExampleArgs {
    #[arg(value_enum)]
    pub model: Model,
    /// Highest level to tabulate.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub mu: String,
    #[arg(long, default_value_t = 8)]
    pub depth: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Args)]
pub struct PartitionArgs {
    /// Single ν at which to evaluate Z.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "nu_ladder")]
    pub nu: Option<f64>,
    /// Comma-separated ε values in (0, 1/4] for the jump table.
    #[arg(long, value_delimiter = ',')]
    pub nu_ladder: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(flatten)]
    pub out: Output,
}
