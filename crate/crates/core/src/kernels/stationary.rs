//! Stationary generalized spectral kernels
//! `k(τ) = Σ_k σ_k² h(τ ⊙ γ_k) cos(2π ω_kᵀτ)`
//! and the two degenerate families built on top of them.

use std::f64::consts::PI;

use crate::error::{check_dim, GskError, Result};
use crate::kernels::base::BaseKernel;

/// One spectral component of a [`StationaryGsk`].
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryComponent {
    pub sigma2: f64,
    pub gamma: Vec<f64>,
    pub omega: Vec<f64>,
}

impl StationaryComponent {
    pub fn new(sigma2: f64, gamma: Vec<f64>, omega: Vec<f64>) -> Self {
        Self {
            sigma2,
            gamma,
            omega,
        }
    }
}

/// Stationary generalized spectral kernel over a base kernel `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryGsk {
    base: BaseKernel,
    components: Vec<StationaryComponent>,
    dim: usize,
}

impl StationaryGsk {
    /// Validates and builds the kernel. Amplitudes must be positive, inverse
    /// scales and frequencies nonnegative, and all vectors of equal length.
    pub fn new(base: BaseKernel, components: Vec<StationaryComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| GskError::Input("a kernel needs at least one component".into()))?;
        let dim = first.gamma.len();
        if dim == 0 {
            return Err(GskError::Input("input dimension must be at least 1".into()));
        }
        for (i, c) in components.iter().enumerate() {
            check_dim(dim, c.gamma.len())?;
            check_dim(dim, c.omega.len())?;
            if !(c.sigma2 > 0.0 && c.sigma2.is_finite()) {
                return Err(GskError::Input(format!(
                    "component {i}: sigma2 must be positive and finite, got {}",
                    c.sigma2
                )));
            }
            if c.gamma.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
                return Err(GskError::Input(format!(
                    "component {i}: gamma entries must be nonnegative and finite"
                )));
            }
            if c.omega.iter().any(|w| !(*w >= 0.0 && w.is_finite())) {
                return Err(GskError::Input(format!(
                    "component {i}: omega entries must be nonnegative and finite"
                )));
            }
        }
        Ok(Self {
            base,
            components,
            dim,
        })
    }

    pub fn base(&self) -> BaseKernel {
        self.base
    }

    pub fn components(&self) -> &[StationaryComponent] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `k(0) = Σ σ_k²`.
    pub fn total_variance(&self) -> f64 {
        self.components.iter().map(|c| c.sigma2).sum()
    }

    /// Evaluates `k(τ)`.
    pub fn eval(&self, tau: &[f64]) -> Result<f64> {
        check_dim(self.dim, tau.len())?;
        Ok(self.eval_unchecked(tau))
    }

    pub(crate) fn eval_unchecked(&self, tau: &[f64]) -> f64 {
        self.components
            .iter()
            .map(|c| {
                let mut r2 = 0.0;
                let mut phase = 0.0;
                for ((t, g), w) in tau.iter().zip(&c.gamma).zip(&c.omega) {
                    let u = t * g;
                    r2 += u * u;
                    phase += w * t;
                }
                c.sigma2 * self.base.eval_sq_norm(r2) * (2.0 * PI * phase).cos()
            })
            .sum()
    }

    /// Number of packed hyperparameters: `K (1 + 2d)`.
    pub fn n_params(&self) -> usize {
        self.components.len() * (1 + 2 * self.dim)
    }

    /// Evaluates `k(τ)` and writes `∂k/∂θ` into `grad`, where per component
    /// the packed order is `[log σ², log γ_1..d, log ω_1..d]`.
    pub fn eval_grad(&self, tau: &[f64], grad: &mut [f64]) -> Result<f64> {
        check_dim(self.dim, tau.len())?;
        check_dim(self.n_params(), grad.len())?;
        Ok(self.eval_grad_unchecked(tau, grad))
    }

    pub(crate) fn eval_grad_unchecked(&self, tau: &[f64], grad: &mut [f64]) -> f64 {
        let d = self.dim;
        let stride = 1 + 2 * d;
        let mut u = vec![0.0; d];
        let mut total = 0.0;
        for (c, g) in self.components.iter().zip(grad.chunks_exact_mut(stride)) {
            let mut phase = 0.0;
            for j in 0..d {
                u[j] = tau[j] * c.gamma[j];
                phase += c.omega[j] * tau[j];
            }
            let bv = self.base.eval_with_slope(&u);
            let (sin, cos) = (2.0 * PI * phase).sin_cos();
            let value = c.sigma2 * bv.value * cos;
            total += value;
            g[0] = value;
            for j in 0..d {
                g[1 + j] = c.sigma2 * bv.slope * u[j] * u[j] * cos;
                g[1 + d + j] = -c.sigma2 * bv.value * sin * 2.0 * PI * tau[j] * c.omega[j];
            }
        }
        total
    }
}

/// Sparse-spectrum kernel `k(τ) = σ²/K Σ_k cos(2π ω_kᵀτ)`: a stationary GSK
/// with every `γ_k = 0` and one shared amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSpectrum {
    sigma2: f64,
    omegas: Vec<Vec<f64>>,
    gsk: StationaryGsk,
}

impl SparseSpectrum {
    pub fn new(sigma2: f64, omegas: Vec<Vec<f64>>) -> Result<Self> {
        let k = omegas.len().max(1) as f64;
        let components = omegas
            .iter()
            .map(|w| StationaryComponent::new(sigma2 / k, vec![0.0; w.len()], w.clone()))
            .collect();
        let gsk = StationaryGsk::new(BaseKernel::SquaredExponential, components)?;
        Ok(Self {
            sigma2,
            omegas,
            gsk,
        })
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn omegas(&self) -> &[Vec<f64>] {
        &self.omegas
    }

    pub fn dim(&self) -> usize {
        self.gsk.dim()
    }

    /// The equivalent degenerate stationary GSK.
    pub fn as_gsk(&self) -> &StationaryGsk {
        &self.gsk
    }

    pub fn eval(&self, tau: &[f64]) -> Result<f64> {
        self.gsk.eval(tau)
    }

    /// `1 + K d`: `[log σ², log ω_{1,1..d}, ..., log ω_{K,1..d}]`.
    pub fn n_params(&self) -> usize {
        1 + self.omegas.len() * self.dim()
    }

    pub(crate) fn eval_grad_unchecked(&self, tau: &[f64], grad: &mut [f64]) -> f64 {
        let d = self.dim();
        let mut inner = vec![0.0; self.gsk.n_params()];
        let value = self.gsk.eval_grad_unchecked(tau, &mut inner);
        grad[0] = 0.0;
        for (k, g) in inner.chunks_exact(1 + 2 * d).enumerate() {
            grad[0] += g[0];
            grad[1 + k * d..1 + (k + 1) * d].copy_from_slice(&g[1 + d..]);
        }
        value
    }
}

/// A single scaled base kernel `σ² h(τ ⊙ γ)`; the zero-frequency, one
/// component GSK. With the SE base this is the usual squared-exponential
/// kernel up to the `2π` rescaling of `γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledBase {
    gsk: StationaryGsk,
}

impl ScaledBase {
    pub fn new(base: BaseKernel, sigma2: f64, gamma: Vec<f64>) -> Result<Self> {
        let d = gamma.len();
        let gsk = StationaryGsk::new(
            base,
            vec![StationaryComponent::new(sigma2, gamma, vec![0.0; d])],
        )?;
        Ok(Self { gsk })
    }

    pub fn as_gsk(&self) -> &StationaryGsk {
        &self.gsk
    }

    pub fn base(&self) -> BaseKernel {
        self.gsk.base()
    }

    pub fn sigma2(&self) -> f64 {
        self.gsk.components()[0].sigma2
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gsk.components()[0].gamma
    }

    pub fn dim(&self) -> usize {
        self.gsk.dim()
    }

    /// `1 + d`: `[log σ², log γ_1..d]`.
    pub fn n_params(&self) -> usize {
        1 + self.dim()
    }

    pub(crate) fn eval_grad_unchecked(&self, tau: &[f64], grad: &mut [f64]) -> f64 {
        let d = self.dim();
        let mut inner = vec![0.0; self.gsk.n_params()];
        let value = self.gsk.eval_grad_unchecked(tau, &mut inner);
        grad.copy_from_slice(&inner[..1 + d]);
        value
    }
}
