//! The two fitting objectives: sum of squared errors to target kernel values
//! and the negative log marginal likelihood of GP regression.

use crate::data::{Dataset, Points};
use crate::error::{check_dim, GskError, Result};
use crate::gp::lml_with_gradient;
use crate::kernels::Kernel;
use crate::optimize::{minimize, FitReport, Objective, OptimizerConfig, Start};
use crate::par::map_indices;
use crate::targets::EvalGrid;

const PAIR_CHUNK: usize = 128;

/// `Σ (k_θ(a_i, b_i) − t_i)²` over a fixed list of input pairs.
#[derive(Debug, Clone)]
pub struct SseObjective {
    template: Kernel,
    left: Points,
    right: Points,
    targets: Vec<f64>,
}

impl SseObjective {
    pub fn new(template: Kernel, left: Points, right: Points, targets: Vec<f64>) -> Result<Self> {
        check_dim(template.dim(), left.dim())?;
        check_dim(template.dim(), right.dim())?;
        if left.is_empty() {
            return Err(GskError::Input("evaluation grid is empty".into()));
        }
        check_dim(left.len(), right.len())?;
        check_dim(left.len(), targets.len())?;
        if let Some(i) = targets.iter().position(|v| !v.is_finite()) {
            return Err(GskError::Input(format!("target value {i} is not finite")));
        }
        Ok(Self {
            template,
            left,
            right,
            targets,
        })
    }

    /// All ordered pairs of a 1-d grid; `targets` in [`EvalGrid::pairs`] order.
    pub fn on_grid(template: Kernel, grid: &EvalGrid, targets: Vec<f64>) -> Result<Self> {
        let (l, r): (Vec<f64>, Vec<f64>) = grid.pairs().into_iter().unzip();
        Self::new(template, Points::new(l, 1)?, Points::new(r, 1)?, targets)
    }

    pub fn template(&self) -> &Kernel {
        &self.template
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Value and gradient for a packed vector; the noise entry has zero
    /// gradient.
    pub fn value_and_grad_at(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (kernel, _) = self.template.unpack(theta)?;
        let p = kernel.n_params();
        let n = self.targets.len();
        let chunks = n.div_ceil(PAIR_CHUNK);
        let partial = map_indices(chunks, |c| {
            let mut value = 0.0;
            let mut grad = vec![0.0; p];
            let mut g = vec![0.0; p];
            for i in c * PAIR_CHUNK..((c + 1) * PAIR_CHUNK).min(n) {
                let k = kernel.eval_grad_unchecked(self.left.row(i), self.right.row(i), &mut g);
                let r = k - self.targets[i];
                value += r * r;
                for (a, b) in grad.iter_mut().zip(&g) {
                    *a += 2.0 * r * b;
                }
            }
            (value, grad)
        });
        let mut value = 0.0;
        let mut grad = vec![0.0; p + 1];
        for (v, g) in partial {
            value += v;
            for (a, b) in grad.iter_mut().zip(&g) {
                *a += b;
            }
        }
        Ok((value, grad))
    }
}

impl Objective for SseObjective {
    fn dim(&self) -> usize {
        self.template.packed_len()
    }

    fn value_and_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.value_and_grad_at(x)
    }
}

/// `−log p(y | X, θ)` over packed kernel and noise hyperparameters.
#[derive(Debug, Clone)]
pub struct NegLogMarginalLikelihood {
    data: Dataset,
    template: Kernel,
}

impl NegLogMarginalLikelihood {
    pub fn new(data: Dataset, template: Kernel) -> Result<Self> {
        check_dim(template.dim(), data.dim())?;
        Ok(Self { data, template })
    }
}

impl Objective for NegLogMarginalLikelihood {
    fn dim(&self) -> usize {
        self.template.packed_len()
    }

    fn value_and_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let (kernel, noise) = self.template.unpack(x)?;
        let (lml, grad) = lml_with_gradient(&self.data, &kernel, noise)?;
        Ok((-lml, grad.into_iter().map(|g| -g).collect()))
    }
}

/// Smallest starting noise variance used for GP training.
pub const MIN_INIT_NOISE: f64 = 1e-6;

/// Maximizes the marginal likelihood over kernel hyperparameters and noise.
/// The starting noise variance is `0.1 · var(y)`.
pub fn train_gp(data: &Dataset, template: &Kernel, config: &OptimizerConfig) -> Result<FitReport> {
    let objective = NegLogMarginalLikelihood::new(data.clone(), template.clone())?;
    let mut config = config.clone();
    config.init.noise_variance = (0.1 * data.var_y()).max(MIN_INIT_NOISE);
    let roles = template.param_roles();
    minimize(&objective, Start::Sampled(&roles), &config)
}

/// Fits a kernel family to target values on a 1-d grid by least squares.
pub fn fit_kernel_to_values(
    template: &Kernel,
    grid: &EvalGrid,
    targets: Vec<f64>,
    config: &OptimizerConfig,
) -> Result<FitReport> {
    let objective = SseObjective::on_grid(template.clone(), grid, targets)?;
    let roles = template.param_roles();
    minimize(&objective, Start::Sampled(&roles), config)
}
