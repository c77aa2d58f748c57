//! Nonstationary generalized spectral kernels
//! `k(x, y) = Σ_k σ_k² k*(x ⊙ γ_k, y ⊙ γ_k) Ψ_k(x)ᵀΨ_k(y)`
//! with `Ψ_k(x) = (cos 2πxᵀω¹ + cos 2πxᵀω², sin 2πxᵀω¹ + sin 2πxᵀω²)`.

use std::f64::consts::PI;

use crate::error::{check_dim, GskError, Result};
use crate::kernels::base::{BaseKernel, BaseValue};

/// The bivariate kernel `k*` multiplying the Ψ features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StarKernel {
    /// `k*(x, y) = h(x − y)`.
    StationaryWrap(BaseKernel),
    /// `k*(x, y) = h(x) h(y)`; gives a finite-dimensional feature space.
    Separable(BaseKernel),
}

impl StarKernel {
    pub fn base(self) -> BaseKernel {
        match self {
            StarKernel::StationaryWrap(b) | StarKernel::Separable(b) => b,
        }
    }

    pub fn is_separable(self) -> bool {
        matches!(self, StarKernel::Separable(_))
    }

    /// Evaluates `k*(x, y)`; both arguments are already scaled by `γ`.
    pub fn eval(self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            StarKernel::StationaryWrap(b) => {
                let r2 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                b.eval_sq_norm(r2)
            }
            StarKernel::Separable(b) => b.eval(x) * b.eval(y),
        }
    }
}

/// One spectral component of a [`NonstationaryGsk`].
#[derive(Debug, Clone, PartialEq)]
pub struct NonstationaryComponent {
    pub sigma2: f64,
    pub gamma: Vec<f64>,
    pub omega1: Vec<f64>,
    pub omega2: Vec<f64>,
}

impl NonstationaryComponent {
    pub fn new(sigma2: f64, gamma: Vec<f64>, omega1: Vec<f64>, omega2: Vec<f64>) -> Self {
        Self {
            sigma2,
            gamma,
            omega1,
            omega2,
        }
    }

    /// The Ψ feature pair at `x`.
    pub fn psi(&self, x: &[f64]) -> [f64; 2] {
        let p1 = 2.0 * PI * dot(x, &self.omega1);
        let p2 = 2.0 * PI * dot(x, &self.omega2);
        [p1.cos() + p2.cos(), p1.sin() + p2.sin()]
    }

    /// `Ψ(x)ᵀΨ(y)` through the four-cosine expansion.
    pub fn psi_product_expanded(&self, x: &[f64], y: &[f64]) -> f64 {
        let x1 = dot(x, &self.omega1);
        let x2 = dot(x, &self.omega2);
        let y1 = dot(y, &self.omega1);
        let y2 = dot(y, &self.omega2);
        let c = |p: f64| (2.0 * PI * p).cos();
        c(x1 - y1) + c(x1 - y2) + c(x2 - y1) + c(x2 - y2)
    }

    /// `Ψ(x)ᵀΨ(y)` as an explicit product of the feature pairs.
    pub fn psi_product(&self, x: &[f64], y: &[f64]) -> f64 {
        let a = self.psi(x);
        let b = self.psi(y);
        a[0] * b[0] + a[1] * b[1]
    }
}

/// Nonstationary generalized spectral kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct NonstationaryGsk {
    star: StarKernel,
    components: Vec<NonstationaryComponent>,
    dim: usize,
}

impl NonstationaryGsk {
    pub fn new(star: StarKernel, components: Vec<NonstationaryComponent>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| GskError::Input("a kernel needs at least one component".into()))?;
        let dim = first.gamma.len();
        if dim == 0 {
            return Err(GskError::Input("input dimension must be at least 1".into()));
        }
        for (i, c) in components.iter().enumerate() {
            check_dim(dim, c.gamma.len())?;
            check_dim(dim, c.omega1.len())?;
            check_dim(dim, c.omega2.len())?;
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
            if c.omega1.iter().chain(&c.omega2).any(|w| !w.is_finite()) {
                return Err(GskError::Input(format!(
                    "component {i}: frequencies must be finite"
                )));
            }
        }
        Ok(Self {
            star,
            components,
            dim,
        })
    }

    pub fn star(&self) -> StarKernel {
        self.star
    }

    pub fn components(&self) -> &[NonstationaryComponent] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        Ok(self.eval_unchecked(x, y))
    }

    /// Same value as [`eval`](Self::eval), computed through the expanded
    /// four-cosine form of `Ψ_kᵀΨ_k`.
    pub fn eval_expanded(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        let mut xs = vec![0.0; self.dim];
        let mut ys = vec![0.0; self.dim];
        Ok(self
            .components
            .iter()
            .map(|c| {
                scale_into(x, &c.gamma, &mut xs);
                scale_into(y, &c.gamma, &mut ys);
                c.sigma2 * self.star.eval(&xs, &ys) * c.psi_product_expanded(x, y)
            })
            .sum())
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut xs = vec![0.0; self.dim];
        let mut ys = vec![0.0; self.dim];
        self.components
            .iter()
            .map(|c| {
                scale_into(x, &c.gamma, &mut xs);
                scale_into(y, &c.gamma, &mut ys);
                c.sigma2 * self.star.eval(&xs, &ys) * c.psi_product(x, y)
            })
            .sum()
    }

    /// `K (1 + 3d)`.
    pub fn n_params(&self) -> usize {
        self.components.len() * (1 + 3 * self.dim)
    }

    /// Value and gradient. Per component the packed order is
    /// `[log σ², log γ_1..d, ω¹_1..d, ω²_1..d]`; frequencies are not
    /// log-transformed.
    pub fn eval_grad(&self, x: &[f64], y: &[f64], grad: &mut [f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())?;
        check_dim(self.n_params(), grad.len())?;
        Ok(self.eval_grad_unchecked(x, y, grad))
    }

    pub(crate) fn eval_grad_unchecked(&self, x: &[f64], y: &[f64], grad: &mut [f64]) -> f64 {
        let d = self.dim;
        let stride = 1 + 3 * d;
        let mut xs = vec![0.0; d];
        let mut ys = vec![0.0; d];
        let mut total = 0.0;
        for (c, g) in self.components.iter().zip(grad.chunks_exact_mut(stride)) {
            scale_into(x, &c.gamma, &mut xs);
            scale_into(y, &c.gamma, &mut ys);

            // star value and its log-γ derivative
            let (star, dstar) = match self.star {
                StarKernel::StationaryWrap(b) => {
                    let diff: Vec<f64> = xs.iter().zip(&ys).map(|(a, b)| a - b).collect();
                    let bv = b.eval_with_slope(&diff);
                    (bv.value, StarSlope::Wrap(bv, diff))
                }
                StarKernel::Separable(b) => {
                    let bx = b.eval_with_slope(&xs);
                    let by = b.eval_with_slope(&ys);
                    (bx.value * by.value, StarSlope::Separable(bx, by))
                }
            };

            let x1 = dot(x, &c.omega1);
            let x2 = dot(x, &c.omega2);
            let y1 = dot(y, &c.omega1);
            let y2 = dot(y, &c.omega2);
            // phases indexed [a][b] = 2π(xᵀω^a − yᵀω^b)
            let phases = [[x1 - y1, x1 - y2], [x2 - y1, x2 - y2]];
            let mut psi = 0.0;
            let mut sines = [[0.0; 2]; 2];
            for a in 0..2 {
                for b in 0..2 {
                    let (s, co) = (2.0 * PI * phases[a][b]).sin_cos();
                    psi += co;
                    sines[a][b] = s;
                }
            }

            let value = c.sigma2 * star * psi;
            total += value;
            g[0] = value;
            for j in 0..d {
                let dstar_j = match &dstar {
                    StarSlope::Wrap(bv, diff) => bv.slope * diff[j] * diff[j],
                    StarSlope::Separable(bx, by) => {
                        bx.slope * xs[j] * xs[j] * by.value + bx.value * by.slope * ys[j] * ys[j]
                    }
                };
                g[1 + j] = c.sigma2 * dstar_j * psi;
                // ∂ψ/∂ω^c_j = −Σ_ab sin(φ_ab) 2π (x_j [a=c] − y_j [b=c])
                for (which, offset) in [(0usize, 1 + d), (1usize, 1 + 2 * d)] {
                    let mut dpsi = 0.0;
                    for a in 0..2 {
                        for b in 0..2 {
                            let mut w = 0.0;
                            if a == which {
                                w += x[j];
                            }
                            if b == which {
                                w -= y[j];
                            }
                            dpsi -= sines[a][b] * 2.0 * PI * w;
                        }
                    }
                    g[offset + j] = c.sigma2 * star * dpsi;
                }
            }
        }
        total
    }
}

enum StarSlope {
    Wrap(BaseValue, Vec<f64>),
    Separable(BaseValue, BaseValue),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn scale_into(x: &[f64], gamma: &[f64], out: &mut [f64]) {
    for ((o, a), g) in out.iter_mut().zip(x).zip(gamma) {
        *o = a * g;
    }
}
