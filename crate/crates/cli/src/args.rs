use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use walshlab::summability::Orientation;
use walshlab::SystemKind;

#[derive(Debug, Parser)]
#[command(name = "walshlab", version, about = "Walsh and Walsh-Kaczmarz summability toolkit")]
pub struct Cli {
    /// Print tables and grids as JSON arrays of row objects.
    #[arg(long, global = true)]
    pub json: bool,

    /// Worker threads for parallel sweeps; output does not depend on it.
    #[arg(long, global = true, env = "WALSHLAB_THREADS")]
    pub threads: Option<usize>,

    /// Grid resolution N (2^N cells) for generated signals.
    #[arg(long, global = true, default_value_t = 8)]
    pub resolution: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fourier coefficients of a signal, or synthesis from coefficients.
    Transform(TransformArgs),
    /// Dirichlet, Fejér, T or Nörlund kernel.
    Kernel(KernelArgs),
    /// Mean of order n of a signal.
    Mean(MeanArgs),
    /// Maximal operator sup_{n <= nmax} |mean_n f|.
    Maximal(MaximalArgs),
    /// Sup and L1 errors of mean_n f - f for n <= nmax.
    Converge(ConvergeArgs),
    /// Growth diagnostics of a weight sequence.
    Weights(WeightsArgs),
    /// Divergence table of the lacunary atomic martingale.
    Counterexample(CounterexampleArgs),
    /// Exact-identity suite; exits 1 if any item fails.
    Selfcheck,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Walsh,
    Kaczmarz,
}

impl From<SystemArg> for SystemKind {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Walsh => SystemKind::Walsh,
            SystemArg::Kaczmarz => SystemKind::Kaczmarz,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrientationArg {
    T,
    Norlund,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::T => Orientation::T,
            OrientationArg::Norlund => Orientation::Norlund,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelType {
    Dirichlet,
    Fejer,
    T,
    Norlund,
}

/// Where the input function comes from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Generated signal, e.g. `random:7`, `walsh:5`, `step:0=1,8=-1`.
    #[arg(long)]
    pub signal: Option<String>,
    /// Grid CSV with a `# resolution=N` header.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value_t = SystemArg::Walsh)]
    pub system: SystemArg,
    /// Treat --input as a coefficient CSV and synthesize the grid function.
    #[arg(long, requires = "input")]
    pub inverse: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[arg(long = "type", value_enum)]
    pub kind: KernelType,
    #[arg(long)]
    pub n: usize,
    /// Weight family for `t` and `norlund` kernels.
    #[arg(long, default_value = "fejer")]
    pub family: String,
    #[arg(long, value_enum, default_value_t = SystemArg::Walsh)]
    pub system: SystemArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[command(flatten)]
    pub source: Source,
    /// fejer | riesz | cesaro:a | u:a | v:a | b:a:b | nlog | custom:<csv> | custom:k_plus_1
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
    /// Overrides the family's natural orientation.
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
    #[arg(long, value_enum, default_value_t = SystemArg::Walsh)]
    pub system: SystemArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MaximalArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
    #[arg(long, value_enum, default_value_t = SystemArg::Walsh)]
    pub system: SystemArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long, value_enum)]
    pub orientation: Option<OrientationArg>,
    #[arg(long, value_enum, default_value_t = SystemArg::Walsh)]
    pub system: SystemArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub nmax: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub p: f64,
    /// Comma-separated, strictly increasing positive integers.
    #[arg(long, value_delimiter = ',', required = true)]
    pub alphas: Vec<u32>,
    /// Weight family, e.g. `custom:k_plus_1`, `fejer`, `custom:w.csv`.
    #[arg(long)]
    pub weights: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
