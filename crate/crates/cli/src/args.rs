use clap::{Args, Parser, Subcommand, ValueEnum};
use ffmc_core::DEFAULT_BUDGET;
use std::path::PathBuf;

/// Exact counting and structure computations for matrix polynomials over finite fields.
///
/// Exit codes: 0 success, 1 verification failure, 2 domain error,
/// 3 parse error, 4 budget exceeded.
#[derive(Parser, Debug)]
#[command(name = "ffmc", version)]
pub struct Cli {
    /// Maximum number of enumerated instances per experiment.
    #[arg(long, global = true, env = "FFMC_BUDGET", default_value_t = DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,

    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Human-readable tables instead of JSON lines.
    #[arg(long, global = true)]
    pub pretty: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a closed-form count.
    Census {
        formula: Formula,
        #[command(flatten)]
        params: Params,
        /// Degree list for coprime-tuples, e.g. --degrees 2,1,0
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        degrees: Vec<i64>,
        /// Number of appended columns for extension.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Structure computations on a matrix polynomial file.
    Analyze {
        verb: Verb,
        path: PathBuf,
        /// Target polynomial for wimmer, coefficients low degree first, e.g. --f 1,1,0,1
        #[arg(long, value_delimiter = ',')]
        f: Vec<String>,
    },
    /// Check a formula against exhaustive enumeration.
    Verify {
        #[arg(required_unless_present = "all_desk", conflicts_with = "all_desk")]
        experiment: Option<Experiment>,
        /// Run the full desk-scale acceptance matrix.
        #[arg(long)]
        all_desk: bool,
        #[command(flatten)]
        params: Params,
        /// Largest degree in the coprime-tuples grid.
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        #[command(flatten)]
        sampling: Sampling,
        /// Random instances for the smith suite.
        #[arg(long, default_value_t = 1000)]
        instances: u64,
        /// Random Γ-transformations per base pair for the gamma suite.
        #[arg(long, default_value_t = 100)]
        per_pair: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Monte Carlo estimate of the unimodular density.
    Sample {
        #[command(flatten)]
        params: Params,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct Params {
    /// Field order (a prime power).
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Formula {
    CoprimeTuples,
    Simple,
    Extension,
    Fiber,
    BlockCompanion,
    Splitting,
    Density,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verb {
    Unimodular,
    Snf,
    Indices,
    Brunovsky,
    Wimmer,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Simple,
    Extension,
    CoprimeTuples,
    Fiber,
    BlockCompanion,
    Splitting,
    Density,
    MonteCarlo,
    Smith,
    Reachability,
    Gamma,
    Wimmer,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}
