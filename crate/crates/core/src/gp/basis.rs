//! Weight-space inference for separable nonstationary kernels.
//!
//! With `k*(x, y) = h(x) h(y)` the kernel factorizes as `φ(x)ᵀφ(y)` with the
//! `2K` features `φ_k(x) = σ_k h(x ⊙ γ_k) Ψ_k(x)`. Bayesian linear regression
//! on those features under a unit prior `w ~ N(0, I)` reproduces the exact
//! GP posterior at `O(n K²)` cost.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::data::{Dataset, Points};
use crate::error::{check_dim, GskError, Result};
use crate::gp::exact::{Prediction, VarianceKind};
use crate::kernels::{NonstationaryGsk, StarKernel};

/// Feature vector `φ(x)` of a separable kernel; length `2K`.
pub fn separable_features(kernel: &NonstationaryGsk, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(kernel.dim(), x.len())?;
    let StarKernel::Separable(base) = kernel.star() else {
        return Err(GskError::Contract(
            "finite-basis features need a separable star kernel".into(),
        ));
    };
    let mut phi = Vec::with_capacity(2 * kernel.components().len());
    let mut xs = vec![0.0; x.len()];
    for c in kernel.components() {
        for ((o, a), g) in xs.iter_mut().zip(x).zip(&c.gamma) {
            *o = a * g;
        }
        let scale = c.sigma2.sqrt() * base.eval(&xs);
        let psi = c.psi(x);
        phi.push(scale * psi[0]);
        phi.push(scale * psi[1]);
    }
    Ok(phi)
}

/// Posterior over feature weights.
#[derive(Debug, Clone)]
pub struct BasisModel {
    kernel: NonstationaryGsk,
    noise: f64,
    /// posterior weight mean
    mean: DVector<f64>,
    /// Cholesky factor of the posterior precision `ΦᵀΦ/σ_n² + I`
    precision: Cholesky<f64, Dyn>,
}

impl BasisModel {
    pub fn fit(data: &Dataset, kernel: &NonstationaryGsk, noise: f64) -> Result<Self> {
        check_dim(kernel.dim(), data.dim())?;
        Self::from_rows(
            kernel,
            noise,
            data.x().rows().zip(data.y().iter().copied()),
        )
    }

    /// Prior-only model (no observations).
    pub fn prior(kernel: &NonstationaryGsk, noise: f64) -> Result<Self> {
        Self::from_rows(kernel, noise, std::iter::empty())
    }

    fn from_rows<'a>(
        kernel: &NonstationaryGsk,
        noise: f64,
        rows: impl Iterator<Item = (&'a [f64], f64)>,
    ) -> Result<Self> {
        if !kernel.star().is_separable() {
            return Err(GskError::Contract(
                "finite-basis inference needs a separable star kernel".into(),
            ));
        }
        if !(noise > 0.0 && noise.is_finite()) {
            return Err(GskError::Contract(format!(
                "finite-basis inference needs a positive noise variance, got {noise}"
            )));
        }
        let p = 2 * kernel.components().len();
        let mut gram = DMatrix::<f64>::zeros(p, p);
        let mut rhs = DVector::<f64>::zeros(p);
        for (x, y) in rows {
            let phi = DVector::from_vec(separable_features(kernel, x)?);
            gram.ger(1.0, &phi, &phi, 1.0);
            rhs.axpy(y, &phi, 1.0);
        }
        let mut a = gram / noise;
        for i in 0..p {
            a[(i, i)] += 1.0;
        }
        let precision = Cholesky::new(a).ok_or_else(|| {
            GskError::Numerical("posterior weight precision is not positive definite".into())
        })?;
        let mean = precision.solve(&(rhs / noise));
        Ok(Self {
            kernel: kernel.clone(),
            noise,
            mean,
            precision,
        })
    }

    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn weight_mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Posterior weight covariance `(ΦᵀΦ/σ_n² + I)⁻¹`.
    pub fn weight_covariance(&self) -> DMatrix<f64> {
        self.precision.inverse()
    }

    pub fn predict(&self, xstar: &Points, kind: VarianceKind) -> Result<Prediction> {
        check_dim(self.kernel.dim(), xstar.dim())?;
        let noise = match kind {
            VarianceKind::Observation => self.noise,
            VarianceKind::Latent => 0.0,
        };
        let mut mean = Vec::with_capacity(xstar.len());
        let mut variance = Vec::with_capacity(xstar.len());
        for x in xstar.rows() {
            let phi = DVector::from_vec(separable_features(&self.kernel, x)?);
            mean.push(phi.dot(&self.mean));
            let mut v = phi;
            self.precision.l_dirty().solve_lower_triangular_mut(&mut v);
            variance.push(v.norm_squared().max(0.0) + noise);
        }
        Ok(Prediction { mean, variance })
    }
}
