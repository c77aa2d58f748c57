//! Generalized spectral kernels.
//!
//! Stationary kernels `Σ σ_k² h(τ ⊙ γ_k) cos(2π ω_kᵀτ)` and nonstationary
//! kernels `Σ σ_k² k*(x ⊙ γ_k, y ⊙ γ_k) Ψ_k(x)ᵀΨ_k(y)` over squared-exponential
//! and Matérn modulators, with exact GP regression, finite-basis inference for
//! separable kernels, random Fourier features, hyperparameter fitting and an
//! approximation bench against the time-inverted fractional Brownian motion
//! covariance.

pub mod bench;
pub mod data;
pub mod error;
pub mod gp;
pub mod kernels;
pub mod optimize;
mod par;
pub mod rff;
pub mod targets;

pub use data::{Dataset, Points};
pub use error::{GskError, Result};
pub use gp::{BasisModel, GpModel, Prediction, VarianceKind};
pub use kernels::{
    BaseKernel, HyperVector, Kernel, KernelConfig, MaternOrder, NonstationaryComponent,
    NonstationaryGsk, ScaledBase, SparseSpectrum, StarKernel, StationaryComponent, StationaryGsk,
};
pub use optimize::{FitReport, OptimizerConfig};
pub use rff::RffBasis;
pub use targets::{EvalGrid, IfbmKernel};
