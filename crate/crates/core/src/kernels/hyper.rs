//! Flat hyperparameter vectors.
//!
//! Layout, component by component, followed by `log σ_n²` as the last entry:
//!
//! | kernel            | per component                              | shared        |
//! |-------------------|--------------------------------------------|---------------|
//! | `Stationary`      | `log σ², log γ_1..d, log ω_1..d`           |               |
//! | `SparseSpectrum`  | `log ω_1..d`                               | `log σ²` first|
//! | `ScaledBase`      | `log σ², log γ_1..d`                       |               |
//! | `Nonstationary`   | `log σ², log γ_1..d, ω¹_1..d, ω²_1..d`     |               |
//!
//! Positive quantities are stored as `ln(max(x, LOG_FLOOR))` and unpacked as
//! `max(exp(θ), LOG_FLOOR)`, so the round trip is exact above the floor.

use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, GskError, Result};
use crate::kernels::{
    Kernel, NonstationaryComponent, NonstationaryGsk, ScaledBase, SparseSpectrum,
    StationaryComponent, StationaryGsk,
};

pub const LOG_FLOOR: f64 = 1e-12;

/// What a packed coordinate controls; drives random initialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamRole {
    LogAmplitude,
    LogInverseScale,
    LogFrequency,
    Frequency,
    LogNoise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperVector(pub Vec<f64>);

impl Deref for HyperVector {
    type Target = Vec<f64>;
    fn deref(&self) -> &Vec<f64> {
        &self.0
    }
}

impl DerefMut for HyperVector {
    fn deref_mut(&mut self) -> &mut Vec<f64> {
        &mut self.0
    }
}

impl From<Vec<f64>> for HyperVector {
    fn from(v: Vec<f64>) -> Self {
        HyperVector(v)
    }
}

fn to_log(x: f64) -> f64 {
    x.max(LOG_FLOOR).ln()
}

fn from_log(t: f64) -> Result<f64> {
    let x = t.exp().max(LOG_FLOOR);
    if x.is_finite() {
        Ok(x)
    } else {
        Err(GskError::Numerical(format!("log-parameter {t} overflows")))
    }
}

fn finite(t: f64) -> Result<f64> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err(GskError::Numerical(format!("non-finite parameter {t}")))
    }
}

impl Kernel {
    /// Total packed length: kernel parameters plus the noise entry.
    pub fn packed_len(&self) -> usize {
        self.n_params() + 1
    }

    /// Packs the kernel and the noise variance into a flat vector.
    pub fn pack(&self, noise_variance: f64) -> HyperVector {
        let mut v = Vec::with_capacity(self.packed_len());
        match self {
            Kernel::Stationary(k) => {
                for c in k.components() {
                    v.push(to_log(c.sigma2));
                    v.extend(c.gamma.iter().map(|&g| to_log(g)));
                    v.extend(c.omega.iter().map(|&w| to_log(w)));
                }
            }
            Kernel::SparseSpectrum(k) => {
                v.push(to_log(k.sigma2()));
                for w in k.omegas() {
                    v.extend(w.iter().map(|&w| to_log(w)));
                }
            }
            Kernel::ScaledBase(k) => {
                v.push(to_log(k.sigma2()));
                v.extend(k.gamma().iter().map(|&g| to_log(g)));
            }
            Kernel::Nonstationary(k) => {
                for c in k.components() {
                    v.push(to_log(c.sigma2));
                    v.extend(c.gamma.iter().map(|&g| to_log(g)));
                    v.extend_from_slice(&c.omega1);
                    v.extend_from_slice(&c.omega2);
                }
            }
        }
        v.push(to_log(noise_variance));
        HyperVector(v)
    }

    /// Rebuilds a kernel with the same shape as `self` from a packed vector.
    pub fn unpack(&self, v: &[f64]) -> Result<(Kernel, f64)> {
        check_dim(self.packed_len(), v.len())?;
        let d = self.dim();
        let mut it = v.iter().copied();
        let next_log = |it: &mut dyn Iterator<Item = f64>| from_log(it.next().unwrap());
        let kernel = match self {
            Kernel::Stationary(k) => {
                let mut comps = Vec::with_capacity(k.components().len());
                for _ in k.components() {
                    let sigma2 = next_log(&mut it)?;
                    let gamma = (0..d).map(|_| next_log(&mut it)).collect::<Result<_>>()?;
                    let omega = (0..d).map(|_| next_log(&mut it)).collect::<Result<_>>()?;
                    comps.push(StationaryComponent::new(sigma2, gamma, omega));
                }
                Kernel::Stationary(StationaryGsk::new(k.base(), comps)?)
            }
            Kernel::SparseSpectrum(k) => {
                let sigma2 = next_log(&mut it)?;
                let omegas = (0..k.omegas().len())
                    .map(|_| (0..d).map(|_| next_log(&mut it)).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                Kernel::SparseSpectrum(SparseSpectrum::new(sigma2, omegas)?)
            }
            Kernel::ScaledBase(k) => {
                let sigma2 = next_log(&mut it)?;
                let gamma = (0..d).map(|_| next_log(&mut it)).collect::<Result<_>>()?;
                Kernel::ScaledBase(ScaledBase::new(k.base(), sigma2, gamma)?)
            }
            Kernel::Nonstationary(k) => {
                let mut comps = Vec::with_capacity(k.components().len());
                for _ in k.components() {
                    let sigma2 = next_log(&mut it)?;
                    let gamma = (0..d).map(|_| next_log(&mut it)).collect::<Result<_>>()?;
                    let omega1 = (0..d)
                        .map(|_| finite(it.next().unwrap()))
                        .collect::<Result<_>>()?;
                    let omega2 = (0..d)
                        .map(|_| finite(it.next().unwrap()))
                        .collect::<Result<_>>()?;
                    comps.push(NonstationaryComponent::new(sigma2, gamma, omega1, omega2));
                }
                Kernel::Nonstationary(NonstationaryGsk::new(k.star(), comps)?)
            }
        };
        let noise = next_log(&mut it)?;
        Ok((kernel, noise))
    }

    /// Role of each packed coordinate, noise last.
    pub fn param_roles(&self) -> Vec<ParamRole> {
        use ParamRole::*;
        let d = self.dim();
        let mut roles = Vec::with_capacity(self.packed_len());
        match self {
            Kernel::Stationary(k) => {
                for _ in k.components() {
                    roles.push(LogAmplitude);
                    roles.extend(std::iter::repeat(LogInverseScale).take(d));
                    roles.extend(std::iter::repeat(LogFrequency).take(d));
                }
            }
            Kernel::SparseSpectrum(k) => {
                roles.push(LogAmplitude);
                roles.extend(std::iter::repeat(LogFrequency).take(d * k.omegas().len()));
            }
            Kernel::ScaledBase(_) => {
                roles.push(LogAmplitude);
                roles.extend(std::iter::repeat(LogInverseScale).take(d));
            }
            Kernel::Nonstationary(k) => {
                for _ in k.components() {
                    roles.push(LogAmplitude);
                    roles.extend(std::iter::repeat(LogInverseScale).take(d));
                    roles.extend(std::iter::repeat(Frequency).take(2 * d));
                }
            }
        }
        roles.push(LogNoise);
        roles
    }
}
