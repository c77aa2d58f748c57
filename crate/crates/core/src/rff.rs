//! Random Fourier features for stationary generalized spectral kernels.
//!
//! The spectral density of `Σ σ_k² h(τ ⊙ γ_k) cos(2π ω_kᵀτ)` is a mixture of
//! copies of `H = F(h)` rescaled by `γ_k` and centred at `±ω_k`. Sampling a
//! frequency therefore picks a component with probability `σ_k² / Σ σ_j²`, a
//! sign, and adds `γ_k ⊙ ε` with `ε ~ H`:
//!
//! * SE: `h(τ) = exp(−2π²‖τ‖²)` has `H` equal to the standard normal density.
//! * Matérn-ν: `H` is a multivariate Student-t with `2ν` degrees of freedom
//!   scaled by `1/(2π)`, drawn as `z √(2ν/u) / (2π)` with `u ~ χ²(2ν)`.

use std::f64::consts::PI;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, StandardNormal};

use crate::data::Points;
use crate::error::{check_dim, GskError, Result};
use crate::kernels::{BaseKernel, StationaryGsk};

/// Sampled frequencies and the total amplitude of the approximated kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct RffBasis {
    frequencies: Points,
    sigma2: f64,
    seed: Option<u64>,
}

/// Draws `ε ~ H` for a base kernel with unit inverse scale.
fn sample_base_frequency<R: Rng>(base: BaseKernel, dim: usize, rng: &mut R) -> Vec<f64> {
    let z: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    match base {
        BaseKernel::SquaredExponential => z,
        BaseKernel::Matern(order) => {
            let dof = 2.0 * order.nu();
            let u: f64 = ChiSquared::new(dof).expect("positive dof").sample(rng);
            let scale = (dof / u).sqrt() / (2.0 * PI);
            z.into_iter().map(|v| v * scale).collect()
        }
    }
}

impl RffBasis {
    /// Samples `m` frequencies from the kernel's spectral density.
    pub fn sample(kernel: &StationaryGsk, m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(GskError::Input("need at least one feature".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let comps = kernel.components();
        let weights = WeightedIndex::new(comps.iter().map(|c| c.sigma2))
            .map_err(|e| GskError::Input(format!("component weights: {e}")))?;
        let d = kernel.dim();
        let mut data = Vec::with_capacity(m * d);
        for _ in 0..m {
            let c = &comps[weights.sample(&mut rng)];
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let eps = sample_base_frequency(kernel.base(), d, &mut rng);
            for j in 0..d {
                data.push(sign * c.omega[j] + c.gamma[j] * eps[j]);
            }
        }
        Ok(Self {
            frequencies: Points::new(data, d)?,
            sigma2: kernel.total_variance(),
            seed: Some(seed),
        })
    }

    /// A basis with given frequencies (one per row).
    pub fn from_frequencies(frequencies: Points, sigma2: f64) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(GskError::Input("need at least one feature".into()));
        }
        if !(sigma2 > 0.0 && sigma2.is_finite()) {
            return Err(GskError::Input(format!("sigma2 must be positive, got {sigma2}")));
        }
        Ok(Self {
            frequencies,
            sigma2,
            seed: None,
        })
    }

    pub fn frequencies(&self) -> &Points {
        &self.frequencies
    }

    pub fn n_frequencies(&self) -> usize {
        self.frequencies.len()
    }

    pub fn dim(&self) -> usize {
        self.frequencies.dim()
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// `φ(x) = √(σ²/m) (cos 2πω_iᵀx, sin 2πω_iᵀx)_i`, cos/sin interleaved.
    pub fn features(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x.len())?;
        let scale = (self.sigma2 / self.n_frequencies() as f64).sqrt();
        let mut phi = Vec::with_capacity(2 * self.n_frequencies());
        for w in self.frequencies.rows() {
            let (s, c) = (2.0 * PI * dot(w, x)).sin_cos();
            phi.push(scale * c);
            phi.push(scale * s);
        }
        Ok(phi)
    }

    /// `φ(x)ᵀφ(x + τ) = (σ²/m) Σ cos(2π ω_iᵀτ)`.
    pub fn estimate(&self, tau: &[f64]) -> Result<f64> {
        check_dim(self.dim(), tau.len())?;
        let sum: f64 = self
            .frequencies
            .rows()
            .map(|w| (2.0 * PI * dot(w, tau)).cos())
            .sum();
        Ok(self.sigma2 * sum / self.n_frequencies() as f64)
    }

    /// Estimates at every row of `taus`.
    pub fn estimate_kernel(&self, taus: &Points) -> Result<Vec<f64>> {
        check_dim(self.dim(), taus.dim())?;
        taus.rows().map(|t| self.estimate(t)).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
