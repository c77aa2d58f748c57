//! Modulating base kernels `h`.
//!
//! Every base kernel is isotropic in its (already scaled) argument `u = τ ⊙ γ`,
//! satisfies `h(0) = 1`, and is strictly positive. Matérn kernels are only
//! provided for the half-integer orders that have elementary closed forms.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GskError;

const SQRT3: f64 = 1.732_050_807_568_877_2;
const SQRT5: f64 = 2.236_067_977_499_79;

/// Matérn smoothness orders with closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MaternOrder {
    Half,
    ThreeHalves,
    FiveHalves,
}

impl MaternOrder {
    /// Smoothness `ν`.
    pub fn nu(self) -> f64 {
        match self {
            MaternOrder::Half => 0.5,
            MaternOrder::ThreeHalves => 1.5,
            MaternOrder::FiveHalves => 2.5,
        }
    }
}

/// The positive modulating function `h` of a generalized spectral kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum BaseKernel {
    /// `h(τ) = exp(-2π²‖τ‖²)`, the spectral-mixture modulator.
    SquaredExponential,
    Matern(MaternOrder),
}

/// Value of `h` at a scaled point together with the radial slope factor.
///
/// `slope` is `g` such that `∂h/∂u_j = g · u_j`. For Matérn-1/2 at the origin
/// the derivative does not exist and `slope` is reported as 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseValue {
    pub value: f64,
    pub slope: f64,
}

impl BaseKernel {
    pub const ALL: [BaseKernel; 4] = [
        BaseKernel::SquaredExponential,
        BaseKernel::Matern(MaternOrder::Half),
        BaseKernel::Matern(MaternOrder::ThreeHalves),
        BaseKernel::Matern(MaternOrder::FiveHalves),
    ];

    /// Short identifier used in configuration files: `se`, `matern12`, ...
    pub fn name(self) -> &'static str {
        match self {
            BaseKernel::SquaredExponential => "se",
            BaseKernel::Matern(MaternOrder::Half) => "matern12",
            BaseKernel::Matern(MaternOrder::ThreeHalves) => "matern32",
            BaseKernel::Matern(MaternOrder::FiveHalves) => "matern52",
        }
    }

    /// Evaluates `h(u)`.
    pub fn eval(self, u: &[f64]) -> f64 {
        self.eval_sq_norm(sq_norm(u))
    }

    /// Evaluates `h` from the squared norm of its argument.
    pub fn eval_sq_norm(self, r2: f64) -> f64 {
        match self {
            BaseKernel::SquaredExponential => (-2.0 * PI * PI * r2).exp(),
            BaseKernel::Matern(order) => {
                let r = r2.sqrt();
                match order {
                    MaternOrder::Half => (-r).exp(),
                    MaternOrder::ThreeHalves => {
                        let a = SQRT3 * r;
                        (1.0 + a) * (-a).exp()
                    }
                    MaternOrder::FiveHalves => {
                        let a = SQRT5 * r;
                        (1.0 + a + a * a / 3.0) * (-a).exp()
                    }
                }
            }
        }
    }

    /// Evaluates `h(u)` and the radial slope factor used by the gradients.
    pub fn eval_with_slope(self, u: &[f64]) -> BaseValue {
        let r2 = sq_norm(u);
        match self {
            BaseKernel::SquaredExponential => {
                let value = (-2.0 * PI * PI * r2).exp();
                BaseValue {
                    value,
                    slope: -4.0 * PI * PI * value,
                }
            }
            BaseKernel::Matern(order) => {
                let r = r2.sqrt();
                match order {
                    MaternOrder::Half => {
                        let value = (-r).exp();
                        // subgradient choice at the kink
                        let slope = if r > 0.0 { -value / r } else { 0.0 };
                        BaseValue { value, slope }
                    }
                    MaternOrder::ThreeHalves => {
                        let a = SQRT3 * r;
                        let e = (-a).exp();
                        BaseValue {
                            value: (1.0 + a) * e,
                            slope: -3.0 * e,
                        }
                    }
                    MaternOrder::FiveHalves => {
                        let a = SQRT5 * r;
                        let e = (-a).exp();
                        BaseValue {
                            value: (1.0 + a + a * a / 3.0) * e,
                            slope: -(5.0 / 3.0) * (1.0 + a) * e,
                        }
                    }
                }
            }
        }
    }
}

impl fmt::Display for BaseKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BaseKernel {
    type Err = GskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "se" => Ok(BaseKernel::SquaredExponential),
            "matern12" => Ok(BaseKernel::Matern(MaternOrder::Half)),
            "matern32" => Ok(BaseKernel::Matern(MaternOrder::ThreeHalves)),
            "matern52" => Ok(BaseKernel::Matern(MaternOrder::FiveHalves)),
            other => Err(GskError::Input(format!(
                "unknown base kernel `{other}` (expected se, matern12, matern32 or matern52)"
            ))),
        }
    }
}

impl From<BaseKernel> for String {
    fn from(b: BaseKernel) -> String {
        b.name().to_string()
    }
}

impl TryFrom<String> for BaseKernel {
    type Error = GskError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

pub(crate) fn sq_norm(u: &[f64]) -> f64 {
    u.iter().map(|v| v * v).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn unit_at_origin() {
        for base in BaseKernel::ALL {
            assert_eq!(base.eval(&[0.0, 0.0]), 1.0, "{base}");
        }
    }

    #[test]
    fn closed_form_values() {
        let e1 = (-1.0f64).exp();
        assert_relative_eq!(
            BaseKernel::Matern(MaternOrder::Half).eval(&[0.6, 0.8]),
            e1,
            epsilon = 1e-15
        );
        let tau = (1.0 / (2.0 * PI * PI)).sqrt();
        assert_relative_eq!(
            BaseKernel::SquaredExponential.eval(&[tau]),
            e1,
            epsilon = 1e-15
        );
        assert_eq!(BaseKernel::Matern(MaternOrder::ThreeHalves).eval(&[0.0]), 1.0);
    }

    #[test]
    fn positive_even_and_bounded() {
        for base in BaseKernel::ALL {
            for i in 0..200 {
                let t = (i as f64 - 100.0) * 0.028;
                let v = base.eval(&[t]);
                assert!(v > 0.0 && v <= 1.0, "{base} at {t}: {v}");
                assert_eq!(v, base.eval(&[-t]));
            }
        }
    }

    #[test]
    fn slope_matches_finite_difference() {
        let u = [0.3, -0.2];
        for base in BaseKernel::ALL {
            let bv = base.eval_with_slope(&u);
            assert_eq!(bv.value, base.eval(&u));
            for j in 0..2 {
                let step = 1e-6;
                let mut up = u;
                let mut dn = u;
                up[j] += step;
                dn[j] -= step;
                let fd = (base.eval(&up) - base.eval(&dn)) / (2.0 * step);
                assert_relative_eq!(bv.slope * u[j], fd, max_relative = 1e-7);
            }
        }
    }

    #[test]
    fn matern_half_kink_has_zero_slope() {
        let bv = BaseKernel::Matern(MaternOrder::Half).eval_with_slope(&[0.0]);
        assert_eq!(bv.value, 1.0);
        assert_eq!(bv.slope, 0.0);
    }

    #[test]
    fn names_round_trip() {
        for base in BaseKernel::ALL {
            assert_eq!(base.name().parse::<BaseKernel>().unwrap(), base);
        }
        assert!("matern72".parse::<BaseKernel>().is_err());
    }
}
