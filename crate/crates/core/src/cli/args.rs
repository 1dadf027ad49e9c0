use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "alphadiv",
    version,
    about = "Generalized α-divergences between positive densities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divergence between two density files
    Compute(ComputeArgs),
    /// Divergence over a range of α, as CSV `alpha,value`
    Sweep(SweepArgs),
    /// Strict comparability certificate for a generator pair
    Check(CheckArgs),
    /// Cauchy scale-family closed form against quadrature
    Cauchy(CauchyArgs),
    /// Weighted centroid of several densities
    Centroid(CentroidArgs),
    /// Seeded invariant suite
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Standard,
    Qa,
    Power,
    ZhangRho,
    ZhangAb,
    KlFg,
    JeffreysFg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum SideArg {
    Left,
    #[default]
    Right,
    Jeffreys,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Fixed decimals in text output (default: shortest round-trip)
    #[arg(long)]
    pub precision: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Density file format; inferred from the extension when omitted
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormat>,
    /// Raise density values below this floor instead of rejecting them
    #[arg(long)]
    pub clamp_eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    #[arg(long, value_enum, default_value_t = Method::Qa)]
    pub method: Method,
    /// Generator f (identity|A, log|G, recip|H, pow:<r>)
    #[arg(long, default_value = "identity")]
    pub f: String,
    #[arg(long, default_value = "log")]
    pub g: String,
    /// Power pair exponent r (method power)
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Power pair exponent s < r (method power)
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Representation generator ρ (method zhang-rho)
    #[arg(long, default_value = "log")]
    pub rho: String,
    /// β_A (method zhang-ab)
    #[arg(long, allow_hyphen_values = true)]
    pub beta_amari: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "alpha_value", multiple = false)]
pub struct AlphaArgs {
    /// α in the standard convention
    #[arg(long, allow_hyphen_values = true, group = "alpha_value")]
    pub alpha: Option<f64>,
    /// α_A = 1 - 2α
    #[arg(long, allow_hyphen_values = true, group = "alpha_value")]
    pub alpha_amari: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    pub p: PathBuf,
    pub q: PathBuf,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub p: PathBuf,
    pub q: PathBuf,
    /// `start:end:step` with 0 <= start <= end <= 1
    #[arg(long, default_value = "0:1:0.05")]
    pub range: String,
    #[command(flatten)]
    pub method: MethodArgs,
    #[command(flatten)]
    pub input: InputArgs,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
    /// Log-spaced grid `lo:hi:points`
    #[arg(long)]
    pub grid: Option<String>,
    /// Also verify the conformal Bregman identity on random pairs
    #[arg(long)]
    pub conformal: bool,
    #[arg(long, default_value_t = crate::selftest::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CauchyArgs {
    #[arg(long)]
    pub s1: f64,
    #[arg(long)]
    pub s2: f64,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1e4)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1_000_001)]
    pub points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CentroidArgs {
    #[arg(required = true)]
    pub densities: Vec<PathBuf>,
    /// Comma-separated positive weights, one per density (default: equal)
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    #[arg(long, default_value = "identity")]
    pub f: String,
    #[arg(long, default_value = "log")]
    pub g: String,
    #[command(flatten)]
    pub alpha: AlphaArgs,
    #[arg(long, value_enum, default_value_t = SideArg::Right)]
    pub side: SideArg,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write the centroid density to this file
    #[arg(long)]
    pub output_file: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = crate::selftest::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub cases: usize,
    #[arg(long, hide = true)]
    pub break_duality: bool,
}
