//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "permulex",
    version,
    about = "Exact interval dynamics of primitive substitutions",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Analyze a morphism: primitivity, spectral data, monotonicity, type
    /// order, and the interval layout, as a JSON report.
    Analyze(AnalyzeArgs),
    /// Emit the canonical value sequence with ranks.
    Generate(GenerateArgs),
    /// Check values against the shift oracle, type intervals, value
    /// distribution, and factor-frequency evidence.
    Verify(VerifyArgs),
    /// Exact circle-rotation orbits and their self-checks.
    Sturmian(SturmianArgs),
}

/// Flags shared by the spec-driven construction.
#[derive(Args)]
pub struct SystemArgs {
    /// Morphism spec file (JSON).
    pub spec: PathBuf,
    /// Fixed-point prefix length sampled for type occurrences.
    #[arg(long, default_value_t = 4096)]
    pub prefix: usize,
    /// Letter depth for order comparisons during analysis.
    #[arg(long, default_value_t = 1024)]
    pub depth: usize,
    /// Enclosure precision in bits; doubled on demand up to 4096.
    #[arg(long, env = "PERMULEX_PRECISION_BITS", default_value_t = 256)]
    pub precision: u32,
    /// If the morphism is not order-preserving, search its powers for the
    /// least one that is and analyze that instead.
    #[arg(long)]
    pub auto_power: bool,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// How many values to emit.
    #[arg(short = 'n', long = "count")]
    pub n: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the rows here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Morphism spec file (JSON).
    pub spec: PathBuf,
    /// How many values to verify.
    #[arg(short = 'n', long = "count", default_value_t = 1000)]
    pub n: usize,
    /// Fixed-point prefix length sampled for type occurrences (also the
    /// prefix scanned for factor frequencies).
    #[arg(long, default_value_t = 4096)]
    pub prefix: usize,
    /// Letter-depth cap for oracle shift comparisons.
    #[arg(long, default_value_t = 4096)]
    pub depth: usize,
    /// Enclosure precision in bits; doubled on demand up to 4096.
    #[arg(long, env = "PERMULEX_PRECISION_BITS", default_value_t = 256)]
    pub precision: u32,
    /// Tolerance for distribution deviations and envelope widths.
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
    /// Also cross-check a rotation orbit against this system: step and
    /// start as exact expressions ("sigma="/"rho=" prefixes allowed).
    #[arg(long, num_args = 2, value_names = ["SIGMA", "RHO"])]
    pub sturmian: Option<Vec<String>>,
    /// If the morphism is not order-preserving, search its powers for the
    /// least one that is and verify that instead.
    #[arg(long)]
    pub auto_power: bool,
    /// Write the summary here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SturmianArgs {
    /// Rotation step σ: an exact expression like "(3-sqrt(5))/2".
    #[arg(long)]
    pub sigma: String,
    /// Starting point ρ, same syntax.
    #[arg(long, default_value = "0")]
    pub rho: String,
    /// How many orbit points.
    #[arg(short = 'n', long = "count", default_value_t = 100)]
    pub n: usize,
    /// Output format for orbit rows.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Run self-checks (doubling identity, three-distance bound) and emit
    /// a JSON report instead of rows.
    #[arg(long)]
    pub check: bool,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
