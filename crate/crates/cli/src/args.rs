use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "smoothek",
    version,
    about = "Exact experiments on the number of prime divisors of smooth integers",
    long_about = None
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ψ(x, y) by sieve and by recurrence, Υ(x, y), and their ratio.
    Count(CommonArgs),
    /// Saddle point α(x, y), ξ(u) and the closed-form approximation.
    Saddle(CommonArgs),
    /// Lemma-shaped numeric checks against frozen thresholds.
    Lemmas(LemmasArgs),
    /// Distribution of ω against the normal law, with model moment gaps.
    Ek(EkArgs),
    /// The independent-prime model on its own.
    Model(ModelArgs),
    /// Prime sums M(t) and their comparison targets.
    Sums(SumsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approximate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Auto,
    Scan,
    Tree,
}

/// Flags shared by every subcommand. Each can also be set through the
/// environment variable named alongside it, or in a TOML file given by
/// `--config` (flags win over the environment, which wins over the file).
#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Single x value (accepts 1e8, 10^8 or 100000000).
    #[arg(long, env = "SMOOTHEK_X")]
    pub x: Option<String>,
    /// Single y value.
    #[arg(long, env = "SMOOTHEK_Y")]
    pub y: Option<String>,
    /// Comma-separated x values; combined with every y.
    #[arg(long, env = "SMOOTHEK_X_GRID")]
    pub x_grid: Option<String>,
    /// Comma-separated y values.
    #[arg(long, env = "SMOOTHEK_Y_GRID")]
    pub y_grid: Option<String>,
    /// Pair each y with x = y^u instead of using an x grid.
    #[arg(long, env = "SMOOTHEK_FIXED_U")]
    pub fixed_u: Option<f64>,
    /// Override the truncation exponent 1/φ(y) used for Y = y^θ.
    #[arg(long, env = "SMOOTHEK_TRUNC_EXPONENT")]
    pub trunc_exponent: Option<f64>,
    /// Highest moment order K (at most 10).
    #[arg(long, env = "SMOOTHEK_MOMENTS")]
    pub moments: Option<usize>,
    /// Seed for Monte Carlo sampling.
    #[arg(long, env = "SMOOTHEK_SEED")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, env = "SMOOTHEK_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, value_enum, env = "SMOOTHEK_FORMAT")]
    pub format: Option<Format>,
    /// Directory for LPF table caches and the baseline store.
    #[arg(long, env = "SMOOTHEK_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// How model probabilities are obtained.
    #[arg(long, value_enum, env = "SMOOTHEK_MODE")]
    pub mode: Option<Mode>,
    /// Population engine: segmented scan, factor tree, or chosen by size.
    #[arg(long, value_enum, env = "SMOOTHEK_ENGINE")]
    pub engine: Option<Engine>,
    /// TOML file with any of the settings above (snake_case keys).
    #[arg(long, env = "SMOOTHEK_CONFIG")]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct LemmasArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Add this to the solved α before the checks (sensitivity canary).
    #[arg(long, env = "SMOOTHEK_ALPHA_SHIFT")]
    pub alpha_shift: Option<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct EkArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Skip the sieve populations and report the model alone.
    #[arg(long)]
    pub model_only: bool,
    /// Use this α for approximate-mode probabilities instead of solving.
    #[arg(long, env = "SMOOTHEK_ALPHA")]
    pub alpha: Option<f64>,
    /// Write CDF grids (z,F_emp,Phi) and the JSON report into this directory.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct ModelArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Use this α for approximate-mode probabilities instead of solving.
    #[arg(long, env = "SMOOTHEK_ALPHA")]
    pub alpha: Option<f64>,
    /// Monte Carlo draws to compare with the exact law (0 disables).
    #[arg(long, env = "SMOOTHEK_SAMPLES")]
    pub samples: Option<u64>,
}

#[derive(Clone, Debug, Args)]
pub struct SumsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Extra comma-separated t values for M(t).
    #[arg(long)]
    pub t: Option<String>,
}
