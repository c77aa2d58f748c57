//! Base kernels and the generalized spectral kernel families.

pub mod base;
pub mod config;
pub mod hyper;
pub mod nonstationary;
pub mod stationary;

pub use base::{BaseKernel, MaternOrder};
pub use config::{ComponentConfig, KernelConfig, KernelType, StarVariant, SCHEMA_VERSION};
pub use hyper::{HyperVector, ParamRole, LOG_FLOOR};
pub use nonstationary::{NonstationaryComponent, NonstationaryGsk, StarKernel};
pub use stationary::{ScaledBase, SparseSpectrum, StationaryComponent, StationaryGsk};

use crate::error::{check_dim, Result};

/// Any kernel the library can evaluate, differentiate and fit.
///
/// Stationary variants are evaluated at `x − y`. `SparseSpectrum` and
/// `ScaledBase` are stationary GSKs with tied or frozen parameters; they only
/// differ from `Stationary` in which hyperparameters are free.
#[derive(Debug, Clone, PartialEq)]
pub enum Kernel {
    Stationary(StationaryGsk),
    SparseSpectrum(SparseSpectrum),
    ScaledBase(ScaledBase),
    Nonstationary(NonstationaryGsk),
}

impl Kernel {
    pub fn dim(&self) -> usize {
        match self {
            Kernel::Stationary(k) => k.dim(),
            Kernel::SparseSpectrum(k) => k.dim(),
            Kernel::ScaledBase(k) => k.dim(),
            Kernel::Nonstationary(k) => k.dim(),
        }
    }

    pub fn is_stationary(&self) -> bool {
        !matches!(self, Kernel::Nonstationary(_))
    }

    /// The equivalent stationary GSK, if the kernel is stationary.
    pub fn as_stationary(&self) -> Option<&StationaryGsk> {
        match self {
            Kernel::Stationary(k) => Some(k),
            Kernel::SparseSpectrum(k) => Some(k.as_gsk()),
            Kernel::ScaledBase(k) => Some(k.as_gsk()),
            Kernel::Nonstationary(_) => None,
        }
    }

    /// Number of kernel hyperparameters (noise excluded).
    pub fn n_params(&self) -> usize {
        match self {
            Kernel::Stationary(k) => k.n_params(),
            Kernel::SparseSpectrum(k) => k.n_params(),
            Kernel::ScaledBase(k) => k.n_params(),
            Kernel::Nonstationary(k) => k.n_params(),
        }
    }

    /// `k(x, y)`.
    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        Ok(self.eval_unchecked(x, y))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Kernel::Nonstationary(k) => k.eval_unchecked(x, y),
            stationary => {
                let tau: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                stationary
                    .as_stationary()
                    .expect("stationary variant")
                    .eval_unchecked(&tau)
            }
        }
    }

    /// `k(x, y)` together with its gradient with respect to the packed kernel
    /// hyperparameters (see [`HyperVector`] for the layout).
    pub fn eval_grad(&self, x: &[f64], y: &[f64], grad: &mut [f64]) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        check_dim(self.n_params(), grad.len())?;
        Ok(self.eval_grad_unchecked(x, y, grad))
    }

    pub(crate) fn eval_grad_unchecked(&self, x: &[f64], y: &[f64], grad: &mut [f64]) -> f64 {
        if let Kernel::Nonstationary(k) = self {
            return k.eval_grad_unchecked(x, y, grad);
        }
        let tau: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        match self {
            Kernel::Stationary(k) => k.eval_grad_unchecked(&tau, grad),
            Kernel::SparseSpectrum(k) => k.eval_grad_unchecked(&tau, grad),
            Kernel::ScaledBase(k) => k.eval_grad_unchecked(&tau, grad),
            Kernel::Nonstationary(_) => unreachable!(),
        }
    }

    /// Short family label, e.g. `S-SE`, `SS`, `NS-MA12`.
    pub fn family_label(&self) -> String {
        fn short(b: BaseKernel) -> &'static str {
            match b {
                BaseKernel::SquaredExponential => "SE",
                BaseKernel::Matern(MaternOrder::Half) => "MA12",
                BaseKernel::Matern(MaternOrder::ThreeHalves) => "MA32",
                BaseKernel::Matern(MaternOrder::FiveHalves) => "MA52",
            }
        }
        match self {
            Kernel::Stationary(k) => format!("S-{}", short(k.base())),
            Kernel::SparseSpectrum(_) => "SS".to_string(),
            Kernel::ScaledBase(k) => short(k.base()).to_string(),
            Kernel::Nonstationary(k) => match k.star() {
                StarKernel::Separable(b) => format!("NS-{}", short(b)),
                StarKernel::StationaryWrap(b) => format!("NSW-{}", short(b)),
            },
        }
    }
}

impl From<StationaryGsk> for Kernel {
    fn from(k: StationaryGsk) -> Self {
        Kernel::Stationary(k)
    }
}

impl From<NonstationaryGsk> for Kernel {
    fn from(k: NonstationaryGsk) -> Self {
        Kernel::Nonstationary(k)
    }
}

impl From<SparseSpectrum> for Kernel {
    fn from(k: SparseSpectrum) -> Self {
        Kernel::SparseSpectrum(k)
    }
}

impl From<ScaledBase> for Kernel {
    fn from(k: ScaledBase) -> Self {
        Kernel::ScaledBase(k)
    }
}
