//! `sigdev`: Schwinger-Dyson and signature kernels from the command line.
//!
//! Exit codes: 0 on success, 1 when `selftest` finds a failing invariant,
//! 2 on bad input (unreadable files, malformed paths, bad flags), 3 when a
//! numeric or resource limit is hit.

mod commands;
mod output;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sigdev", version, about = "Schwinger-Dyson signature kernels of paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate K_SD(γ, σ), or the signature kernel, for two paths.
    ///
    /// Output columns: scheme, value, tail_bound, resolution. `tail_bound`
    /// is the certified truncation bound (series and sig schemes only);
    /// `resolution` is the grid size or the truncation level.
    Kernel(KernelArgs),
    /// Gram matrix between two samples of paths (one row per path of --a).
    Gram(SampleArgs),
    /// MMD² between two samples of paths.
    ///
    /// Output columns: kernel, estimator, mmd2.
    Mmd(MmdArgs),
    /// Convergence table for one path: grid schemes across dyadic orders and
    /// GUE Monte-Carlo across matrix sizes.
    ///
    /// Output columns: kind (scheme name or `montecarlo`), param (λ or N),
    /// value, reference, error = |value − reference|, stderr (Monte-Carlo
    /// rows only). The reference is the exact Bessel value in d = 1, the
    /// series when it reaches --tol, and otherwise the Richardson value
    /// 2K(λmax+1) − K(λmax) of the chosen scheme.
    Converge(ConvergeArgs),
    /// Sample fractional Brownian motion paths on a uniform grid of [0, 1].
    GenFbm(FbmArgs),
    /// Run the cross-scheme and combinatorial invariant checks.
    Selftest(CommonArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Explicit,
    Implicit,
    Series,
    /// Truncated classical signature kernel.
    Sig,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Output file; standard output when absent.
    #[arg(long, env = "SIGDEV_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv", env = "SIGDEV_FORMAT")]
    pub format: Format,
    /// Accuracy target of the series and truncated kernels.
    #[arg(long, default_value_t = 1e-10, env = "SIGDEV_TOL")]
    pub tol: f64,
}

#[derive(Args, Debug, Clone)]
pub struct PartitionArgs {
    #[arg(long, value_enum, default_value = "explicit", env = "SIGDEV_SCHEME")]
    pub scheme: SchemeArg,
    /// Dyadic refinement order of the path's knots (grid schemes).
    #[arg(long, default_value_t = 0, env = "SIGDEV_LAMBDA", value_parser = clap::value_parser!(u32).range(0..=20))]
    pub lambda: u32,
    /// Refine until every sub-interval has 1-variation at most this value;
    /// overrides --lambda.
    #[arg(long)]
    pub max_variation: Option<f64>,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    /// First path (CSV, or JSONL holding one path).
    pub gamma: PathBuf,
    /// Second path.
    pub sigma: PathBuf,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// First sample (JSONL, or a single-path CSV).
    #[arg(long)]
    pub a: PathBuf,
    /// Second sample; the first one again when absent.
    #[arg(long)]
    pub b: Option<PathBuf>,
    #[command(flatten)]
    pub partition: PartitionArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct MmdArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Unbiased estimator without same-index terms.
    #[arg(long)]
    pub u_statistic: bool,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    /// Path file; when absent an fBm path is generated from the --fbm-* flags.
    #[arg(long)]
    pub path: Option<PathBuf>,
    #[arg(long, default_value_t = 0.75)]
    pub fbm_hurst: f64,
    #[arg(long, default_value_t = 15)]
    pub fbm_points: usize,
    #[arg(long, default_value_t = 1)]
    pub fbm_dim: usize,
    /// Grid scheme for the λ rows.
    #[arg(long, value_enum, default_value = "explicit", env = "SIGDEV_SCHEME")]
    pub scheme: SchemeArg,
    /// Dyadic orders: a list `0,2,4` or an inclusive range `0..6`.
    #[arg(long, default_value = "0..6", env = "SIGDEV_LAMBDA")]
    pub lambda: String,
    /// Matrix sizes N for the Monte-Carlo rows, e.g. `10,50,200`.
    #[arg(long, default_value = "10,50,200", env = "SIGDEV_MATRIX_DIM")]
    pub matrix_dim: String,
    /// Monte-Carlo samples M per matrix size.
    #[arg(long, default_value_t = 100, env = "SIGDEV_MC_SAMPLES")]
    pub mc_samples: usize,
    #[arg(long, default_value_t = 0, env = "SIGDEV_SEED")]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct FbmArgs {
    #[arg(long, default_value_t = 0.5)]
    pub hurst: f64,
    /// Samples per path, including the origin.
    #[arg(long, default_value_t = 16)]
    pub points: usize,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Number of paths; path k uses seed + k. More than one needs --format json.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0, env = "SIGDEV_SEED")]
    pub seed: u64,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Kernel(a) => commands::kernel(&a),
        Command::Gram(a) => commands::gram(&a),
        Command::Mmd(a) => commands::mmd(&a),
        Command::Converge(a) => commands::converge(&a),
        Command::GenFbm(a) => commands::gen_fbm(&a),
        Command::Selftest(a) => selftest::run(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sigdev: {e}");
            if e.is_input_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
