use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cylf", version, about = "Mixed Fourier analysis and hypoellipticity decisions on the cylinder T^1 x R")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Grid as `n_t,n_x,X` (even sizes >= 4, half-width X > 0).
    #[arg(long, global = true, default_value = "32,512,16")]
    pub grid: String,
    /// Print a single JSON document on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write plot-ready CSV files into this directory.
    #[arg(long, global = true)]
    pub csv_dir: Option<PathBuf>,
    /// Seed for random fields.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide Schwartz global hypoellipticity of an operator (exit 0 = SGH, 10 = not SGH).
    Analyze(AnalyzeArgs),
    /// Solve L u = f by symbol division, conjugating variable coefficients first.
    Solve(SolveArgs),
    /// Apply a partial or mixed Fourier transform to a field file.
    Transform(TransformArgs),
    /// Seminorms and decay certificates of a field.
    Diagnose(DiagnoseArgs),
    /// Run the gallery of operators with known verdicts.
    Demo,
    /// Write a sampled builtin or random field to a file.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    /// Operator, e.g. `Dt + (1+2i) Dx + 1/2i` or `p(Dx)=Dx^2; q(Dt)=Dt^2+1/2`.
    pub spec: String,
    /// Accept decimal literals, converting them to rationals within TOL.
    #[arg(long, value_name = "TOL")]
    pub rationalize: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Cross-check the verdict with a floating-point scan of the symbol.
    #[arg(long)]
    pub oracle: bool,
    /// Scan box `K XI N` for --oracle.
    #[arg(long = "box", num_args = 3, value_names = ["K", "XI", "N"])]
    pub scan_box: Option<Vec<f64>>,
    /// Decider to use instead of automatic selection.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct Source {
    /// Builtin function name.
    #[arg(long, conflicts_with = "input")]
    pub builtin: Option<String>,
    /// Field file in the binary grid format.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Torus frequency for builtins.
    #[arg(long, default_value_t = 1)]
    pub k0: i64,
    /// Line frequency for `plane_wave`.
    #[arg(long, default_value_t = 0.0)]
    pub xi0: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Sample this builtin as u, set f = L u and report the recovery error.
    #[arg(long, conflicts_with_all = ["builtin", "input"])]
    pub manufacture: Option<String>,
    #[command(flatten)]
    pub source: Source,
    /// Where to write the solution field.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Torus,
    Line,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
    Roundtrip,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, value_enum, default_value = "forward")]
    pub direction: Direction,
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiagnoseArgs {
    #[command(flatten)]
    pub source: Source,
    /// Use the zero field.
    #[arg(long, conflicts_with_all = ["builtin", "input"])]
    pub zero: bool,
    /// Largest decay order N and seminorm index.
    #[arg(long, default_value_t = 4)]
    pub n_max: u32,
    /// Largest derivative order beta.
    #[arg(long, default_value_t = 2)]
    pub beta_max: u32,
    /// Recompute certificates with n_x and X doubled (builtins only).
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub source: Source,
    /// Uniform random values in the unit square instead of a builtin.
    #[arg(long, conflicts_with_all = ["builtin", "input"])]
    pub random: bool,
    #[arg(long)]
    pub out: PathBuf,
}
