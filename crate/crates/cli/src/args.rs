use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsk::bench::Family;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "gsk", version, about = "Generalized spectral kernels: GP regression, kernel approximation, random features")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit kernel hyperparameters and noise by maximizing the marginal likelihood
    GpFit(GpFitArgs),
    /// Predict with a model written by gp-fit
    GpPredict(GpPredictArgs),
    /// Fit a spectral kernel family to a target covariance on a grid
    Approx(ApproxArgs),
    /// Compare a random Fourier feature estimate with the exact kernel
    Rff(RffArgs),
    /// Draw one sample from the zero-mean GP prior on a grid
    SamplePrior(SamplePriorArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct GpFitArgs {
    /// training CSV with header x1,...,xd,y
    #[arg(long)]
    pub data: PathBuf,
    /// kernel JSON; fixes the family, K and d (its values are not used as a start)
    #[arg(long)]
    pub kernel: PathBuf,
    /// fitted model JSON
    #[arg(long)]
    pub out: PathBuf,
    /// run report JSON [default: <out>.report.json]
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// subtract the training mean from y before fitting
    #[arg(long)]
    pub center: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct GpPredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// CSV with header x1,...,xd
    #[arg(long)]
    pub inputs: PathBuf,
    /// CSV with columns x1,...,xd,mean,variance
    #[arg(long)]
    pub out: PathBuf,
    /// report the variance of the latent function instead of a new observation
    #[arg(long)]
    pub latent_variance: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Ifbm,
}

#[derive(Debug, Args, Serialize)]
pub struct ApproxArgs {
    #[arg(long, value_enum, default_value_t = Target::Ifbm)]
    pub target: Target,
    /// Hurst index in (0, 1)
    #[arg(long, default_value_t = 0.5)]
    pub hurst: f64,
    /// s-se, ss, ns-se, ns-ma12, ns-ma32 or ns-ma52
    #[arg(long, value_parser = parse_family)]
    #[serde(serialize_with = "family_name")]
    pub family: Family,
    #[arg(long, default_value_t = 5)]
    pub components: usize,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2000)]
    pub max_iters: usize,
    /// run report JSON; the fitted kernel and the s = 0.5 section are written next to it
    #[arg(long)]
    pub out: PathBuf,
    /// fit a random kernel of the same family instead of the target
    #[arg(long)]
    pub self_fit: bool,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: gsk::GskError| e.to_string())
}

fn family_name<S: serde::Serializer>(f: &Family, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.name())
}

#[derive(Debug, Args, Serialize)]
pub struct RffArgs {
    /// stationary kernel JSON
    #[arg(long)]
    pub kernel: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub features: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// largest offset; offsets run along the first input axis
    #[arg(long, default_value_t = 3.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 61)]
    pub tau_steps: usize,
    /// CSV with columns tau,exact,estimate,abs_error
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SamplePriorArgs {
    #[arg(long)]
    pub kernel: PathBuf,
    /// `start:stop:count` per input dimension, comma separated; the grid is
    /// their product (at most 2000 points)
    #[arg(long)]
    pub grid_spec: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV with columns x1,...,xd,f
    #[arg(long)]
    pub out: PathBuf,
}
