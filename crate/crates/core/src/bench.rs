//! Kernel-approximation bench: fit a spectral family to a target covariance
//! on a grid by least squares and score it by normalized RMSE.

use std::fmt;
use std::str::FromStr;

use crate::error::{GskError, Result};
use crate::kernels::{
    BaseKernel, Kernel, MaternOrder, NonstationaryComponent, NonstationaryGsk, ScaledBase,
    SparseSpectrum, StarKernel, StationaryComponent, StationaryGsk,
};
use crate::optimize::{fit_kernel_to_values, FitReport, OptimizerConfig};
use crate::targets::{normalized_rmse_values, EvalGrid};

/// Kernel families compared by the bench.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// stationary, SE modulator (spectral mixture)
    StationarySe,
    /// sparse spectrum
    SparseSpectrum,
    /// separable nonstationary with the given modulator
    Nonstationary(BaseKernel),
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::StationarySe,
        Family::SparseSpectrum,
        Family::Nonstationary(BaseKernel::SquaredExponential),
        Family::Nonstationary(BaseKernel::Matern(MaternOrder::Half)),
        Family::Nonstationary(BaseKernel::Matern(MaternOrder::ThreeHalves)),
        Family::Nonstationary(BaseKernel::Matern(MaternOrder::FiveHalves)),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::StationarySe => "s-se",
            Family::SparseSpectrum => "ss",
            Family::Nonstationary(BaseKernel::SquaredExponential) => "ns-se",
            Family::Nonstationary(BaseKernel::Matern(MaternOrder::Half)) => "ns-ma12",
            Family::Nonstationary(BaseKernel::Matern(MaternOrder::ThreeHalves)) => "ns-ma32",
            Family::Nonstationary(BaseKernel::Matern(MaternOrder::FiveHalves)) => "ns-ma52",
        }
    }

    pub fn is_stationary(self) -> bool {
        !matches!(self, Family::Nonstationary(_))
    }

    /// A kernel of this family with `k` components in `dim` dimensions. Only
    /// its shape matters when used as a fitting template.
    pub fn template(self, k: usize, dim: usize) -> Result<Kernel> {
        if k == 0 {
            return Err(GskError::Input("need at least one component".into()));
        }
        let ones = vec![1.0; dim];
        Ok(match self {
            Family::StationarySe => StationaryGsk::new(
                BaseKernel::SquaredExponential,
                (0..k)
                    .map(|_| StationaryComponent::new(1.0, ones.clone(), ones.clone()))
                    .collect(),
            )?
            .into(),
            Family::SparseSpectrum => {
                SparseSpectrum::new(1.0, (0..k).map(|_| ones.clone()).collect())?.into()
            }
            Family::Nonstationary(base) => NonstationaryGsk::new(
                StarKernel::Separable(base),
                (0..k)
                    .map(|_| {
                        NonstationaryComponent::new(1.0, ones.clone(), ones.clone(), ones.clone())
                    })
                    .collect(),
            )?
            .into(),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GskError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                GskError::Input(format!(
                    "unknown family `{s}` (expected one of s-se, ss, ns-se, ns-ma12, ns-ma32, ns-ma52)"
                ))
            })
    }
}

/// A fitted approximation and its score.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub family: Family,
    pub kernel: Kernel,
    pub normalized_rmse: f64,
    pub report: FitReport,
}

/// Fits `family` with `k` components to `targets` (values on all ordered
/// pairs of `grid`) and scores the best restart.
pub fn approximate(
    family: Family,
    k: usize,
    grid: &EvalGrid,
    targets: &[f64],
    config: &OptimizerConfig,
) -> Result<Approximation> {
    let template = family.template(k, 1)?;
    let report = fit_kernel_to_values(&template, grid, targets.to_vec(), config)?;
    let (kernel, _) = report.unpack(&template)?;
    let normalized_rmse = normalized_rmse_values(&grid.kernel_values(&kernel)?, targets)?;
    Ok(Approximation {
        family,
        kernel,
        normalized_rmse,
        report,
    })
}

/// Plain SE-kernel template `σ² exp(−2π²‖τ ⊙ γ‖²)` used as a GP baseline.
pub fn se_baseline(dim: usize) -> Kernel {
    ScaledBase::new(BaseKernel::SquaredExponential, 1.0, vec![1.0; dim])
        .expect("valid template")
        .into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
            let t = f.template(3, 1).unwrap();
            assert_eq!(t.is_stationary(), f.is_stationary());
        }
        assert!("ns-ma72".parse::<Family>().is_err());
        assert!(Family::StationarySe.template(0, 1).is_err());
    }
}
