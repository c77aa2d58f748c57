//! Target covariances for the kernel-approximation bench.

use crate::error::{GskError, Result};
use crate::kernels::Kernel;

/// Covariance of a time-inverted fractional Brownian motion,
/// `k(t, s) = ½ (t^{-2H} + s^{-2H} − |1/t − 1/s|^{2H})` for `t, s > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfbmKernel {
    hurst: f64,
}

impl IfbmKernel {
    pub fn new(hurst: f64) -> Result<Self> {
        if hurst > 0.0 && hurst < 1.0 {
            Ok(Self { hurst })
        } else {
            Err(GskError::Domain(format!(
                "Hurst index must lie in (0, 1), got {hurst}"
            )))
        }
    }

    pub fn hurst(&self) -> f64 {
        self.hurst
    }

    pub fn eval(&self, t: f64, s: f64) -> Result<f64> {
        if !(t > 0.0 && s > 0.0) {
            return Err(GskError::Domain(format!(
                "IFBM covariance is defined for positive times, got ({t}, {s})"
            )));
        }
        let e = 2.0 * self.hurst;
        Ok(0.5 * (t.powf(-e) + s.powf(-e) - (1.0 / t - 1.0 / s).abs().powf(e)))
    }
}

/// A 1-d grid and all ordered pairs of its points.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalGrid {
    points: Vec<f64>,
}

impl EvalGrid {
    /// `count` points `start, start + step, ...`.
    pub fn uniform(start: f64, step: f64, count: usize) -> Result<Self> {
        if count == 0 || !(step > 0.0) || !start.is_finite() {
            return Err(GskError::Input(format!(
                "invalid grid: start {start}, step {step}, count {count}"
            )));
        }
        Ok(Self {
            points: (0..count).map(|j| start + step * j as f64).collect(),
        })
    }

    /// The bench grid `{0.01 + 0.02 j : j = 0..49}` covering `(0.01, 1]`.
    pub fn ifbm_default() -> Self {
        Self::uniform(0.01, 0.02, 50).expect("static grid")
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// All `len²` ordered pairs, row-major in the first coordinate.
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .flat_map(|&t| self.points.iter().map(move |&s| (t, s)))
            .collect()
    }

    /// Target covariance on every grid pair, in [`pairs`](Self::pairs) order.
    pub fn ifbm_values(&self, target: &IfbmKernel) -> Result<Vec<f64>> {
        self.pairs()
            .into_iter()
            .map(|(t, s)| target.eval(t, s))
            .collect()
    }

    /// A 1-d kernel on every grid pair.
    pub fn kernel_values(&self, kernel: &Kernel) -> Result<Vec<f64>> {
        self.pairs()
            .into_iter()
            .map(|(t, s)| kernel.eval(&[t], &[s]))
            .collect()
    }
}

/// `√(mean (c − t)²) / mean t` over matching value lists.
pub fn normalized_rmse_values(candidate: &[f64], target: &[f64]) -> Result<f64> {
    if candidate.len() != target.len() || target.is_empty() {
        return Err(GskError::Input(format!(
            "value lists differ or are empty ({} vs {})",
            candidate.len(),
            target.len()
        )));
    }
    let n = target.len() as f64;
    let mse = candidate
        .iter()
        .zip(target)
        .map(|(c, t)| (c - t) * (c - t))
        .sum::<f64>()
        / n;
    let mean = target.iter().sum::<f64>() / n;
    Ok(mse.sqrt() / mean)
}

/// RMSE of a 1-d kernel against the IFBM covariance over all grid pairs,
/// normalized by the mean of the target on the grid.
pub fn normalized_rmse(candidate: &Kernel, target: &IfbmKernel, grid: &EvalGrid) -> Result<f64> {
    normalized_rmse_values(&grid.kernel_values(candidate)?, &grid.ifbm_values(target)?)
}

/// `k(t, s)` for each `t`, at fixed `s`.
pub fn kernel_section(kernel: &Kernel, s: f64, ts: &[f64]) -> Result<Vec<f64>> {
    ts.iter().map(|&t| kernel.eval(&[t], &[s])).collect()
}
