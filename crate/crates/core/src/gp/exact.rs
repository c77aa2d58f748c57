use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::data::{Dataset, Points};
use crate::error::{check_dim, GskError, Result};
use crate::kernels::Kernel;
use crate::par::map_indices;

/// First jitter tried after a failed factorization, relative to the mean
/// diagonal; multiplied by 10 until [`MAX_JITTER`].
pub const MIN_JITTER: f64 = 1e-10;
pub const MAX_JITTER: f64 = 1e-4;

/// Whether predictive variances include the observation noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarianceKind {
    #[default]
    Observation,
    Latent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Cross-covariance matrix `K[i, j] = k(a_i, b_j)`.
pub fn gram(kernel: &Kernel, a: &Points, b: &Points) -> Result<DMatrix<f64>> {
    check_dim(kernel.dim(), a.dim())?;
    check_dim(kernel.dim(), b.dim())?;
    let rows = map_indices(a.len(), |i| {
        let xi = a.row(i);
        b.rows()
            .map(|xj| kernel.eval_unchecked(xi, xj))
            .collect::<Vec<_>>()
    });
    Ok(DMatrix::from_fn(a.len(), b.len(), |i, j| rows[i][j]))
}

/// Symmetric Gram matrix of one point set; only the upper triangle is
/// evaluated.
pub fn gram_sym(kernel: &Kernel, x: &Points) -> Result<DMatrix<f64>> {
    check_dim(kernel.dim(), x.dim())?;
    let n = x.len();
    let rows = map_indices(n, |i| {
        let xi = x.row(i);
        (i..n)
            .map(|j| kernel.eval_unchecked(xi, x.row(j)))
            .collect::<Vec<_>>()
    });
    let mut k = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (off, v) in row.iter().enumerate() {
            k[(i, i + off)] = *v;
            k[(i + off, i)] = *v;
        }
    }
    Ok(k)
}

/// Cholesky factor of `k`, retrying with growing diagonal jitter.
/// Returns the factor and the absolute jitter that was added (0 if none).
pub fn cholesky_jittered(k: &DMatrix<f64>) -> Result<(Cholesky<f64, Dyn>, f64)> {
    if let Some(c) = Cholesky::new(k.clone()) {
        return Ok((c, 0.0));
    }
    let n = k.nrows();
    let mean_diag = if n > 0 { k.trace() / n as f64 } else { 0.0 };
    let scale = if mean_diag.is_finite() && mean_diag > 0.0 {
        mean_diag
    } else {
        1.0
    };
    let mut rel = MIN_JITTER;
    while rel <= MAX_JITTER * (1.0 + 1e-9) {
        let jitter = rel * scale;
        let mut kj = k.clone();
        for i in 0..n {
            kj[(i, i)] += jitter;
        }
        if let Some(c) = Cholesky::new(kj) {
            return Ok((c, jitter));
        }
        rel *= 10.0;
    }
    Err(GskError::Numerical(format!(
        "Cholesky factorization of a {n}x{n} covariance failed even with jitter {:.1e} x mean diagonal ({mean_diag:.3e})",
        MAX_JITTER
    )))
}

fn noisy_gram(data: &Dataset, kernel: &Kernel, noise: f64) -> Result<DMatrix<f64>> {
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(GskError::Input(format!(
            "noise variance must be finite and >= 0, got {noise}"
        )));
    }
    let mut k = gram_sym(kernel, data.x())?;
    for i in 0..data.len() {
        k[(i, i)] += noise;
    }
    Ok(k)
}

fn lml_from_factor(chol: &Cholesky<f64, Dyn>, y: &DVector<f64>, alpha: &DVector<f64>) -> f64 {
    let n = y.len() as f64;
    let log_det_half: f64 = chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum();
    -0.5 * y.dot(alpha) - log_det_half - 0.5 * n * (2.0 * PI).ln()
}

/// `log p(y | X) = −½ yᵀα − Σ log L_ii − (n/2) log 2π`.
pub fn log_marginal_likelihood(data: &Dataset, kernel: &Kernel, noise: f64) -> Result<f64> {
    let k = noisy_gram(data, kernel, noise)?;
    let (chol, _) = cholesky_jittered(&k)?;
    let y = DVector::from_column_slice(data.y());
    let alpha = chol.solve(&y);
    Ok(lml_from_factor(&chol, &y, &alpha))
}

/// Log marginal likelihood and its gradient with respect to the packed
/// hyperparameters (`kernel.pack(noise)` layout, `log σ_n²` last).
pub fn lml_with_gradient(data: &Dataset, kernel: &Kernel, noise: f64) -> Result<(f64, Vec<f64>)> {
    let k = noisy_gram(data, kernel, noise)?;
    let (chol, _) = cholesky_jittered(&k)?;
    let y = DVector::from_column_slice(data.y());
    let alpha = chol.solve(&y);
    let value = lml_from_factor(&chol, &y, &alpha);

    // W = ααᵀ − (K + σ²I)⁻¹; ∂L/∂θ = ½ Σ_ij W_ij ∂K_ij/∂θ
    let kinv = chol.inverse();
    let n = data.len();
    let p = kernel.n_params();
    let x = data.x();
    let partials = map_indices(n, |i| {
        let mut acc = vec![0.0; p];
        let mut g = vec![0.0; p];
        let xi = x.row(i);
        for j in i..n {
            kernel.eval_grad_unchecked(xi, x.row(j), &mut g);
            let w = alpha[i] * alpha[j] - kinv[(i, j)];
            let weight = if i == j { 0.5 * w } else { w };
            for (a, gv) in acc.iter_mut().zip(&g) {
                *a += weight * gv;
            }
        }
        acc
    });
    let mut grad = vec![0.0; p + 1];
    for row in &partials {
        for (a, v) in grad.iter_mut().zip(row) {
            *a += v;
        }
    }
    let trace_w: f64 = (0..n).map(|i| alpha[i] * alpha[i] - kinv[(i, i)]).sum();
    grad[p] = 0.5 * noise * trace_w;
    Ok((value, grad))
}

/// A factorized exact Gaussian-process posterior.
#[derive(Debug, Clone)]
pub struct GpModel {
    kernel: Kernel,
    noise: f64,
    x: Points,
    chol: Option<Cholesky<f64, Dyn>>,
    alpha: DVector<f64>,
    jitter: f64,
}

impl GpModel {
    /// Factorizes `K_XX + σ_n² I` and solves for `α`.
    pub fn fit(data: &Dataset, kernel: &Kernel, noise: f64) -> Result<Self> {
        let k = noisy_gram(data, kernel, noise)?;
        let (chol, jitter) = cholesky_jittered(&k)?;
        let alpha = chol.solve(&DVector::from_column_slice(data.y()));
        Ok(Self {
            kernel: kernel.clone(),
            noise,
            x: data.x().clone(),
            chol: Some(chol),
            alpha,
            jitter,
        })
    }

    /// The zero-data model: predictions are the prior.
    pub fn prior(kernel: &Kernel, noise: f64) -> Self {
        Self {
            kernel: kernel.clone(),
            noise,
            x: Points::empty(kernel.dim()),
            chol: None,
            alpha: DVector::zeros(0),
            jitter: 0.0,
        }
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    /// Jitter that had to be added to factorize the training covariance.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    /// Lower Cholesky factor of the (jittered) training covariance.
    pub fn factor(&self) -> Option<DMatrix<f64>> {
        self.chol.as_ref().map(|c| c.l())
    }

    pub fn alpha(&self) -> &DVector<f64> {
        &self.alpha
    }

    pub fn predict(&self, xstar: &Points, kind: VarianceKind) -> Result<Prediction> {
        check_dim(self.kernel.dim(), xstar.dim())?;
        let m = xstar.len();
        let prior_var: Vec<f64> = xstar
            .rows()
            .map(|x| self.kernel.eval_unchecked(x, x))
            .collect();
        let noise = match kind {
            VarianceKind::Observation => self.noise,
            VarianceKind::Latent => 0.0,
        };
        let Some(chol) = &self.chol else {
            return Ok(Prediction {
                mean: vec![0.0; m],
                variance: prior_var.iter().map(|v| v.max(0.0) + noise).collect(),
            });
        };
        let kxs = gram(&self.kernel, &self.x, xstar)?;
        let mean = kxs.tr_mul(&self.alpha);
        let mut v = kxs;
        chol.l_dirty()
            .solve_lower_triangular_mut(&mut v);
        let variance = (0..m)
            .map(|j| {
                let reduction = v.column(j).norm_squared();
                (prior_var[j] - reduction).max(0.0) + noise
            })
            .collect();
        Ok(Prediction {
            mean: mean.iter().copied().collect(),
            variance,
        })
    }
}
