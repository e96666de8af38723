mod commands;
mod error;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spd_geom::experiments::ParamRange;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "spd-geom",
    version,
    about = "Curvature, mean-kernel and divergence experiments on SPD matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bounds of the MPE(α,β) sectional curvature over a random sample, per (α,β) cell.
    CurvatureGrid(GridArgs),
    /// Classifies power-Wasserstein metrics as mean kernel metrics over a range of p.
    MeanKernelScan(ScanArgs),
    /// Evaluates a single quantity.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Args, Debug)]
pub struct GridArgs {
    /// α range `lo:hi:step` [default: -2:2:0.05, or -2:2:0.25 with --fast]
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<ParamRange>,
    /// β range `lo:hi:step` [default: same as α]
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<ParamRange>,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    /// Number of random unit-determinant diagonal matrices [default: 1000, or 100 with --fast]
    #[arg(long)]
    pub matrices: Option<usize>,
    /// Number of random planes [default: 1000, or 100 with --fast]
    #[arg(long)]
    pub planes: Option<usize>,
    #[arg(long, default_value_t = spd_geom::experiments::DEFAULT_SEED)]
    pub seed: u64,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Step 0.25 with 100 matrices and 100 planes
    #[arg(long)]
    pub fast: bool,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// p range `lo:hi:step`
    #[arg(long, allow_hyphen_values = true, default_value = "2.5:2.7:0.001")]
    pub range: ParamRange,
    /// Output CSV path
    #[arg(long)]
    pub out: PathBuf,
    /// Log-spaced grid points per axis for the axiom checks
    #[arg(long, default_value_t = 400)]
    pub points: usize,
}

/// Where a metric comes from: a catalog name, an MPE pair or a pair of maps.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct MetricSource {
    /// Catalog metric (euclidean, log-euclidean, affine-invariant, bures-wasserstein,
    /// bogoliubov-kubo-mori) or `power-euclidean:p`, `power-affine:p`,
    /// `power-wasserstein:p`, `alpha-procrustes:a`
    #[arg(long)]
    pub metric: Option<String>,
    /// Mixed-power-Euclidean pair `α,β`
    #[arg(long, allow_hyphen_values = true)]
    pub mpe: Option<String>,
    /// Mixed-Euclidean pair of maps `u,v`, each `id`, `log`, `exp` or a power
    #[arg(long, allow_hyphen_values = true)]
    pub me: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct MixedSource {
    /// Mixed-power-Euclidean pair `α,β`
    #[arg(long, allow_hyphen_values = true)]
    pub mpe: Option<String>,
    /// Mixed-Euclidean pair of maps `u,v`, each `id`, `log`, `exp` or a power
    #[arg(long, allow_hyphen_values = true)]
    pub me: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum EvalCommand {
    /// g_Σ(X, Y)
    Metric {
        #[command(flatten)]
        source: MetricSource,
        /// Base point: CSV file, eigenvalue list `1,4` or rows `2,1;1,3`
        #[arg(long)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// D(Σ ‖ Λ) for an (α,β)- or (u,v)-divergence
    Divergence {
        #[arg(long, allow_hyphen_values = true, requires = "beta", conflicts_with = "uv")]
        alpha: Option<f64>,
        #[arg(long, allow_hyphen_values = true, requires = "alpha")]
        beta: Option<f64>,
        /// Pair of maps `u,v`, each `id`, `log`, `exp` or a power
        #[arg(long, allow_hyphen_values = true, required_unless_present = "alpha")]
        uv: Option<String>,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        lambda: String,
        /// Evaluate the dual divergence D*(Σ ‖ Λ) = D(Λ ‖ Σ)
        #[arg(long)]
        dual: bool,
    },
    /// Geodesic distance for flat metrics, or MPE metrics between commuting matrices
    Distance {
        #[command(flatten)]
        source: MetricSource,
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        lambda: String,
    },
    /// Sectional curvature κ(X, Y), or R(X, Y, Z, T) when Z and T are given
    Curvature {
        #[command(flatten)]
        source: MixedSource,
        #[arg(long)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true, requires = "t")]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "z")]
        t: Option<String>,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SPD_GEOM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("SPD_GEOM_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::CurvatureGrid(args) => commands::curvature_grid(args),
        Command::MeanKernelScan(args) => commands::mean_kernel_scan(args),
        Command::Eval(cmd) => commands::eval(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
