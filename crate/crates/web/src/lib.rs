//! Browser demo: kernel sections, random-feature estimates and prior samples
//! for one-dimensional kernels given as JSON configs.
//!
//! The `*_impl` functions are plain Rust so they can be tested natively; the
//! exported wrappers only convert errors.

use gsk::gp::{cholesky_jittered, gram_sym};
use gsk::{Kernel, KernelConfig, Points, RffBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request.
pub const MAX_POINTS: usize = 1000;

fn kernel_1d(config: &str) -> Result<Kernel, String> {
    let (kernel, _) = KernelConfig::from_json(config)
        .and_then(|c| c.to_kernel())
        .map_err(|e| e.to_string())?;
    if kernel.dim() != 1 {
        return Err(format!("the demo plots 1-d kernels, this one has d = {}", kernel.dim()));
    }
    Ok(kernel)
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("need between 2 and {MAX_POINTS} points, got {n}"));
    }
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(format!("bad range [{lo}, {hi}]"));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

/// `k(t, s)` for `t` on the grid.
pub fn section_impl(config: &str, s: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    let kernel = kernel_1d(config)?;
    linspace(lo, hi, n)?
        .iter()
        .map(|&t| kernel.eval(&[t], &[s]).map_err(|e| e.to_string()))
        .collect()
}

/// Exact kernel and its `m`-feature estimate at `τ` on `[0, tau_max]`,
/// interleaved as `[exact₀, estimate₀, exact₁, ...]`.
pub fn rff_impl(config: &str, m: usize, seed: u64, tau_max: f64, n: usize) -> Result<Vec<f64>, String> {
    let kernel = kernel_1d(config)?;
    let stationary = kernel
        .as_stationary()
        .ok_or("random features need a stationary kernel")?;
    let basis = RffBasis::sample(stationary, m, seed).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * n);
    for t in linspace(0.0, tau_max, n)? {
        out.push(stationary.eval(&[t]).map_err(|e| e.to_string())?);
        out.push(basis.estimate(&[t]).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

/// One draw from the zero-mean prior on the grid.
pub fn prior_impl(config: &str, lo: f64, hi: f64, n: usize, seed: u64) -> Result<Vec<f64>, String> {
    let kernel = kernel_1d(config)?;
    let x = Points::from_scalars(&linspace(lo, hi, n)?).map_err(|e| e.to_string())?;
    let k = gram_sym(&kernel, &x).map_err(|e| e.to_string())?;
    let (chol, _) = cholesky_jittered(&k).map_err(|e| e.to_string())?;
    let l = chol.l();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    Ok((0..n).map(|i| (0..=i).map(|j| l[(i, j)] * z[j]).sum()).collect())
}

#[wasm_bindgen]
pub fn kernel_section(config: &str, s: f64, lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, JsError> {
    section_impl(config, s, lo, hi, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn rff_compare(config: &str, m: usize, seed: u32, tau_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    rff_impl(config, m, seed.into(), tau_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn prior_sample(config: &str, lo: f64, hi: f64, n: usize, seed: u32) -> Result<Vec<f64>, JsError> {
    prior_impl(config, lo, hi, n, seed.into()).map_err(|e| JsError::new(&e))
}
