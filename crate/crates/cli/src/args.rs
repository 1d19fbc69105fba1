use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "manifold-tv",
    version,
    about = "Total variation denoising of manifold-valued signals and images"
)]
pub struct Cli {
    /// Worker threads for parallel stages [env: MANIFOLD_TV_THREADS]
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print a JSON report instead of the text summary
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic phantom
    Synth(SynthArgs),
    /// Corrupt an image with noise
    Noise(NoiseArgs),
    /// Run a proximal point solver
    Denoise(DenoiseArgs),
    /// Score a reconstruction
    Metric(MetricArgs),
    /// Convert between MVF, CSV, PPM and glyph JSON, or between RGB and LCh
    Convert(ConvertArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Synth(_) => "synth",
            Command::Noise(_) => "noise",
            Command::Denoise(_) => "denoise",
            Command::Metric(_) => "metric",
            Command::Convert(_) => "convert",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phantom {
    Dti,
    S2,
    So3,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub phantom: Phantom,
    /// `n` or `rows,cols` [default: 8,8 for dti, 32,32 for s2, 130 for so3]
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NoiseModel {
    /// Diffusion weighted images with Rician noise, refitted to tensors (pos3)
    Rician,
    /// von Mises–Fisher samples around each direction (s2)
    Vmf,
    /// Gaussian tangent vectors pushed through exp (any manifold)
    Tangent,
    /// Wrapped Gaussian angles (s1)
    Wrapped,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct NoiseArgs {
    #[arg(long, value_enum)]
    pub model: NoiseModel,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Diffusion weighting of the Rician pipeline
    #[arg(long, default_value_t = 800.0)]
    pub b: f64,
    /// Unweighted signal of the Rician pipeline
    #[arg(long, default_value_t = 1000.0)]
    pub a0: f64,
    /// Number of gradient directions of the Rician pipeline
    #[arg(long, default_value_t = 15)]
    pub dirs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataKind {
    L1,
    L2,
    Huber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegKind {
    Tv,
    Tv2,
    Huber,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Cyclic,
    Parallel,
    ParallelFast,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DenoiseArgs {
    /// Initial iterate (and data, unless -f is given)
    #[arg(short, long)]
    pub input: PathBuf,
    /// Data image f
    #[arg(short = 'f', long = "data-image")]
    pub data_image: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = DataKind::L2)]
    pub data: DataKind,
    #[arg(long, value_enum, default_value_t = RegKind::Tv)]
    pub reg: RegKind,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    #[arg(long, value_enum, default_value_t = Algo::Cyclic)]
    pub algo: Algo,
    #[arg(long, default_value_t = 3.0)]
    pub lambda_c: f64,
    #[arg(long, default_value_t = 0.95)]
    pub lambda_omega: f64,
    #[arg(long, default_value_t = std::f64::consts::SQRT_2)]
    pub tau: f64,
    #[arg(long, default_value_t = 1.0)]
    pub huber_omega: f64,
    /// Stopping tolerance of the intrinsic mean (parallel solver)
    #[arg(long, default_value_t = 1e-10)]
    pub mean_tol: f64,
    #[arg(long, default_value_t = 100)]
    pub mean_iters: usize,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Write the functional trace as CSV
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricKind {
    Dsnr,
    Psnr,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MetricArgs {
    #[arg(long, value_enum)]
    pub kind: MetricKind,
    /// Ground truth
    #[arg(short)]
    pub g: PathBuf,
    /// Noisy data (required for dsnr)
    #[arg(short)]
    pub f: Option<PathBuf>,
    /// Reconstruction
    #[arg(short)]
    pub x: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Color {
    Lch,
    Rgb,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConvertArgs {
    /// Input file (.mvf, .csv or .ppm)
    #[arg(short, long)]
    pub input: PathBuf,
    /// Output file (.mvf, .csv, .ppm or .json)
    #[arg(short, long)]
    pub output: PathBuf,
    /// Manifold tag of a CSV input
    #[arg(long)]
    pub manifold: Option<String>,
    /// Shape of a CSV input, `n` or `rows,cols`
    #[arg(long)]
    pub shape: Option<String>,
    /// Colour representation of an MVF written from or converted to colour data
    #[arg(long, value_enum)]
    pub color: Option<Color>,
}
