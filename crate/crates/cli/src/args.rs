use std::path::PathBuf;

use cfs_core::{ClassColumn, Layout};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cfs", version, about = "Correlation-based feature selection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select a feature subset and print the run report.
    Select(SelectArgs),
    /// Time engines across worker counts and dataset sizes; prints CSV.
    Bench(BenchArgs),
    /// Discretize a CSV file and write the coded data plus a JSON sidecar.
    Discretize(DiscretizeArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Class column: a header name or a 0-based index. Use `name:COL` for a
    /// header that looks like a number.
    #[arg(long)]
    pub class: ClassColumn,
    /// The file has no header row; columns are named col0, col1, ...
    #[arg(long)]
    pub no_header: bool,
    /// Treat every column as categorical (for already coded data).
    #[arg(long)]
    pub discrete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "sequential")]
    pub engine: Layout,
    #[arg(long)]
    pub partitions: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long)]
    pub no_locally_predictive: bool,
    #[arg(long, default_value_t = 5)]
    pub max_fails: usize,
    #[arg(long, default_value_t = 5)]
    pub queue_capacity: usize,
    /// Write the per-iteration search trace (tab separated) to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub output: OutputFormat,
    /// Leave wall times out of the report so that it is reproducible byte for byte.
    #[arg(long)]
    pub no_timings: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', default_value = "horizontal")]
    pub engines: Vec<Layout>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub workers: Vec<usize>,
    /// Dataset size multipliers; values above 1.0 duplicate rows.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    pub fractions: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub repeat: usize,
    #[arg(long, default_value_t = 1)]
    pub baseline_workers: usize,
    /// Fixed partition count; by default each engine uses its own default.
    #[arg(long)]
    pub partitions: Option<usize>,
    /// Apply fractions to features instead of rows.
    #[arg(long)]
    pub scale_features: bool,
    /// Write engine statistics of the last repeat of every combination as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiscretizeArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub class: ClassColumn,
    #[arg(long)]
    pub no_header: bool,
    /// Coded CSV destination. The sidecar goes next to it with a `.json` extension.
    #[arg(long)]
    pub output: PathBuf,
}
