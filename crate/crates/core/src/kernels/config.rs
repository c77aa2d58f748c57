//! JSON kernel configuration.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "type": "nonstationary",
//!   "base": "matern12",
//!   "star": "separable",
//!   "components": [{"sigma2": 1.0, "gamma": [2.0], "omega1": [0.5], "omega2": [1.5]}],
//!   "noise_variance": 0.01
//! }
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{GskError, Result};
use crate::kernels::{
    BaseKernel, Kernel, NonstationaryComponent, NonstationaryGsk, StarKernel,
    StationaryComponent, StationaryGsk,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelType {
    Stationary,
    Nonstationary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StarVariant {
    Stationary,
    Separable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentConfig {
    pub sigma2: f64,
    pub gamma: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega2: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub kind: KernelType,
    pub base: BaseKernel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub star: Option<StarVariant>,
    pub components: Vec<ComponentConfig>,
    #[serde(default)]
    pub noise_variance: f64,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

impl KernelConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GskError::Input(format!("kernel config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("kernel config serializes")
    }

    /// Describes a kernel. Tied and frozen stationary variants are written
    /// out as their equivalent free stationary kernel.
    pub fn from_kernel(kernel: &Kernel, noise_variance: f64) -> Self {
        match kernel {
            Kernel::Nonstationary(k) => {
                let (star, base) = match k.star() {
                    StarKernel::StationaryWrap(b) => (StarVariant::Stationary, b),
                    StarKernel::Separable(b) => (StarVariant::Separable, b),
                };
                KernelConfig {
                    schema_version: SCHEMA_VERSION,
                    kind: KernelType::Nonstationary,
                    base,
                    star: Some(star),
                    components: k
                        .components()
                        .iter()
                        .map(|c| ComponentConfig {
                            sigma2: c.sigma2,
                            gamma: c.gamma.clone(),
                            omega: None,
                            omega1: Some(c.omega1.clone()),
                            omega2: Some(c.omega2.clone()),
                        })
                        .collect(),
                    noise_variance,
                }
            }
            stationary => {
                let k = stationary.as_stationary().expect("stationary variant");
                KernelConfig {
                    schema_version: SCHEMA_VERSION,
                    kind: KernelType::Stationary,
                    base: k.base(),
                    star: None,
                    components: k
                        .components()
                        .iter()
                        .map(|c| ComponentConfig {
                            sigma2: c.sigma2,
                            gamma: c.gamma.clone(),
                            omega: Some(c.omega.clone()),
                            omega1: None,
                            omega2: None,
                        })
                        .collect(),
                    noise_variance,
                }
            }
        }
    }

    /// Validates the configuration and builds the kernel.
    pub fn to_kernel(&self) -> Result<(Kernel, f64)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(GskError::Input(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !(self.noise_variance >= 0.0 && self.noise_variance.is_finite()) {
            return Err(GskError::Input(format!(
                "noise_variance must be a finite number >= 0, got {}",
                self.noise_variance
            )));
        }
        let kernel = match self.kind {
            KernelType::Stationary => {
                if self.star.is_some() {
                    return Err(GskError::Input(
                        "`star` only applies to nonstationary kernels".into(),
                    ));
                }
                let comps = self
                    .components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if c.omega1.is_some() || c.omega2.is_some() {
                            return Err(GskError::Input(format!(
                                "component {i}: stationary components take `omega`, not `omega1`/`omega2`"
                            )));
                        }
                        let omega = c.omega.clone().ok_or_else(|| {
                            GskError::Input(format!("component {i}: missing `omega`"))
                        })?;
                        Ok(StationaryComponent::new(c.sigma2, c.gamma.clone(), omega))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Kernel::Stationary(StationaryGsk::new(self.base, comps)?)
            }
            KernelType::Nonstationary => {
                let star = match self.star {
                    Some(StarVariant::Stationary) => StarKernel::StationaryWrap(self.base),
                    Some(StarVariant::Separable) => StarKernel::Separable(self.base),
                    None => {
                        return Err(GskError::Input(
                            "nonstationary kernels need `star` (stationary or separable)".into(),
                        ))
                    }
                };
                let comps = self
                    .components
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        if c.omega.is_some() {
                            return Err(GskError::Input(format!(
                                "component {i}: nonstationary components take `omega1`/`omega2`, not `omega`"
                            )));
                        }
                        match (&c.omega1, &c.omega2) {
                            (Some(w1), Some(w2)) => Ok(NonstationaryComponent::new(
                                c.sigma2,
                                c.gamma.clone(),
                                w1.clone(),
                                w2.clone(),
                            )),
                            _ => Err(GskError::Input(format!(
                                "component {i}: missing `omega1` or `omega2`"
                            ))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Kernel::Nonstationary(NonstationaryGsk::new(star, comps)?)
            }
        };
        Ok((kernel, self.noise_variance))
    }
}
