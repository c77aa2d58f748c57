//! Multi-restart gradient-based minimization in log-parameter space.

mod lbfgs;
pub mod objectives;

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{GskError, Result};
use crate::kernels::ParamRole;
use crate::par::map_indices;

pub use objectives::{
    fit_kernel_to_values, train_gp, NegLogMarginalLikelihood, SseObjective,
};

/// A differentiable scalar function of a flat parameter vector.
pub trait Objective: Sync {
    fn dim(&self) -> usize;

    fn value_and_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)>;
}

impl<F> Objective for (usize, F)
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Sync,
{
    fn dim(&self) -> usize {
        self.0
    }

    fn value_and_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        Ok((self.1)(x))
    }
}

/// Sampling ranges for random starting points, one per parameter role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitRanges {
    /// range of `log σ²`
    pub log_amplitude: (f64, f64),
    /// range of `log γ`
    pub log_inverse_scale: (f64, f64),
    /// range of `ω` itself, for both raw and log-stored frequencies
    pub frequency: (f64, f64),
    /// starting noise variance (not randomized)
    pub noise_variance: f64,
}

impl Default for InitRanges {
    fn default() -> Self {
        Self {
            log_amplitude: (0.1f64.ln(), 0.0),
            log_inverse_scale: (0.1f64.ln(), 2f64.ln()),
            frequency: (0.0, 3.0),
            noise_variance: 0.1,
        }
    }
}

impl InitRanges {
    /// Draws one starting point for the given layout.
    pub fn sample<R: Rng>(&self, roles: &[ParamRole], rng: &mut R) -> Vec<f64> {
        let mut uniform = |(a, b): (f64, f64)| if b > a { rng.gen_range(a..b) } else { a };
        roles
            .iter()
            .map(|role| match role {
                ParamRole::LogAmplitude => uniform(self.log_amplitude),
                ParamRole::LogInverseScale => uniform(self.log_inverse_scale),
                ParamRole::Frequency => uniform(self.frequency),
                ParamRole::LogFrequency => uniform(self.frequency)
                    .max(crate::kernels::LOG_FLOOR)
                    .ln(),
                ParamRole::LogNoise => self.noise_variance.max(crate::kernels::LOG_FLOOR).ln(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iters: usize,
    /// stop once the gradient ∞-norm drops below this
    pub grad_tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub init: InitRanges,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: 1e-6,
            restarts: 5,
            seed: 0,
            init: InitRanges::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(GskError::Input("restarts must be at least 1".into()));
        }
        if !(self.grad_tol > 0.0) {
            return Err(GskError::Input("gradient tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Where each restart starts.
#[derive(Debug, Clone, Copy)]
pub enum Start<'a> {
    /// Every restart starts from this point.
    Fixed(&'a [f64]),
    /// Random draws per parameter role.
    Sampled(&'a [ParamRole]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartTrace {
    pub restart: usize,
    pub initial_point: Vec<f64>,
    pub initial_objective: f64,
    pub final_objective: f64,
    pub iterations: usize,
    pub stop_reason: String,
    /// objective after every accepted step
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    /// best point over all restarts
    pub best: Vec<f64>,
    pub objective: f64,
    pub best_restart: usize,
    pub restarts: Vec<RestartTrace>,
    pub seed: u64,
    pub wall_time_secs: f64,
}

impl FitReport {
    /// Unpacks the best point against the kernel template it was fitted for.
    pub fn unpack(&self, template: &crate::kernels::Kernel) -> Result<(crate::kernels::Kernel, f64)> {
        template.unpack(&self.best)
    }

    /// Equality ignoring wall-clock time.
    pub fn same_result(&self, other: &FitReport) -> bool {
        let mut a = self.clone();
        a.wall_time_secs = other.wall_time_secs;
        &a == other
    }
}

/// Random stream of one restart: depends only on `(seed, restart)`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

const MAX_INIT_TRIES: usize = 100;

/// Runs one local minimization per restart and keeps the best result.
/// Restarts are independent and may run concurrently; the merge picks the
/// lowest objective and breaks ties by restart index.
pub fn minimize<O: Objective + ?Sized>(
    objective: &O,
    start: Start<'_>,
    config: &OptimizerConfig,
) -> Result<FitReport> {
    config.validate()?;
    if let Start::Sampled(roles) = start {
        if roles.len() != objective.dim() {
            return Err(GskError::DimensionMismatch {
                expected: objective.dim(),
                got: roles.len(),
            });
        }
    }
    if let Start::Fixed(x) = start {
        if x.len() != objective.dim() {
            return Err(GskError::DimensionMismatch {
                expected: objective.dim(),
                got: x.len(),
            });
        }
    }
    let clock = Instant::now();
    let outcomes = map_indices(config.restarts, |r| run_restart(objective, &start, config, r));
    let mut restarts = Vec::with_capacity(outcomes.len());
    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    for outcome in outcomes {
        let (trace, x) = outcome?;
        let better = match &best {
            None => true,
            Some((_, f, _)) => trace.final_objective < *f,
        };
        if better {
            best = Some((trace.restart, trace.final_objective, x));
        }
        restarts.push(trace);
    }
    let (best_restart, objective_value, best_x) = best.expect("at least one restart");
    Ok(FitReport {
        best: best_x,
        objective: objective_value,
        best_restart,
        restarts,
        seed: config.seed,
        wall_time_secs: clock.elapsed().as_secs_f64(),
    })
}

fn run_restart<O: Objective + ?Sized>(
    objective: &O,
    start: &Start<'_>,
    config: &OptimizerConfig,
    r: usize,
) -> Result<(RestartTrace, Vec<f64>)> {
    let mut rng = restart_rng(config.seed, r);
    let mut init = None;
    for _ in 0..MAX_INIT_TRIES {
        let x0 = match start {
            Start::Fixed(x) => x.to_vec(),
            Start::Sampled(roles) => config.init.sample(roles, &mut rng),
        };
        if let Ok((f0, g0)) = objective.value_and_grad(&x0) {
            if f0.is_finite() && g0.iter().all(|v| v.is_finite()) {
                init = Some((x0, f0, g0));
                break;
            }
        }
        if matches!(start, Start::Fixed(_)) {
            break;
        }
    }
    let (x0, f0, g0) = init.ok_or_else(|| {
        GskError::Numerical(format!(
            "restart {r}: objective is not finite at any sampled starting point"
        ))
    })?;
    let local =
        lbfgs::minimize_local(objective, x0.clone(), f0, g0, config.max_iters, config.grad_tol);
    let trace = RestartTrace {
        restart: r,
        initial_point: x0,
        initial_objective: f0,
        final_objective: local.value,
        iterations: local.iterations,
        stop_reason: format!("{:?}", local.stop),
        trace: local.trace,
    };
    Ok((trace, local.x))
}
