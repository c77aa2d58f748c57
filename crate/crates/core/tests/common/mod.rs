#![allow(dead_code)]

use gsk::{
    BaseKernel, Kernel, MaternOrder, NonstationaryComponent, NonstationaryGsk, Points, StarKernel,
    StationaryComponent, StationaryGsk,
};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BASES: [BaseKernel; 4] = [
    BaseKernel::SquaredExponential,
    BaseKernel::Matern(MaternOrder::Half),
    BaseKernel::Matern(MaternOrder::ThreeHalves),
    BaseKernel::Matern(MaternOrder::FiveHalves),
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

pub fn vector(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| uniform(rng, lo, hi)).collect()
}

pub fn random_stationary(rng: &mut ChaCha8Rng, base: BaseKernel, k: usize, d: usize) -> StationaryGsk {
    let comps = (0..k)
        .map(|_| {
            StationaryComponent::new(
                uniform(rng, 0.2, 2.0),
                vector(rng, d, 0.1, 2.0),
                vector(rng, d, 0.0, 2.0),
            )
        })
        .collect();
    StationaryGsk::new(base, comps).unwrap()
}

pub fn random_nonstationary(
    rng: &mut ChaCha8Rng,
    star: StarKernel,
    k: usize,
    d: usize,
) -> NonstationaryGsk {
    let comps = (0..k)
        .map(|_| {
            NonstationaryComponent::new(
                uniform(rng, 0.2, 2.0),
                vector(rng, d, 0.1, 2.0),
                vector(rng, d, -2.0, 2.0),
                vector(rng, d, -2.0, 2.0),
            )
        })
        .collect();
    NonstationaryGsk::new(star, comps).unwrap()
}

/// Either family, any base, `K ≤ 5`, `d ≤ 3`.
pub fn random_kernel(rng: &mut ChaCha8Rng) -> Kernel {
    let base = BASES[rng.gen_range(0..4)];
    let k = rng.gen_range(1..=5);
    let d = rng.gen_range(1..=3);
    match rng.gen_range(0..3) {
        0 => random_stationary(rng, base, k, d).into(),
        1 => random_nonstationary(rng, StarKernel::StationaryWrap(base), k, d).into(),
        _ => random_nonstationary(rng, StarKernel::Separable(base), k, d).into(),
    }
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: f64, hi: f64) -> Points {
    Points::new((0..n * d).map(|_| uniform(rng, lo, hi)).collect(), d).unwrap()
}

/// Gradient entries below this cannot be resolved to 1e-5 relative by a
/// step-1e-6 central difference: its round-off alone is ~1e-10·|f|.
pub fn fd_floor(value: f64, grad: &[f64]) -> f64 {
    1e-4 * grad.iter().fold(value.abs(), |m, g| m.max(g.abs())).max(1e-300)
}

pub fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Central differences of `f` at `x` with step `h` in every coordinate.
pub fn central_diff(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut m = x.to_vec();
            p[i] += h;
            m[i] -= h;
            (f(&p) - f(&m)) / (2.0 * h)
        })
        .collect()
}

/// Worst relative disagreement between two gradients. Entries smaller than
/// `floor` are compared against `floor` instead of their own size.
pub fn max_rel_error(a: &[f64], b: &[f64], floor: f64) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// `h(r)` written out from the closed forms, independent of the library.
pub fn base_oracle(base: BaseKernel, r: f64) -> f64 {
    match base {
        BaseKernel::SquaredExponential => (-2.0 * std::f64::consts::PI.powi(2) * r * r).exp(),
        BaseKernel::Matern(MaternOrder::Half) => (-r).exp(),
        BaseKernel::Matern(MaternOrder::ThreeHalves) => {
            let a = 3f64.sqrt() * r;
            (1.0 + a) * (-a).exp()
        }
        BaseKernel::Matern(MaternOrder::FiveHalves) => {
            let a = 5f64.sqrt() * r;
            (1.0 + a + 5.0 * r * r / 3.0) * (-a).exp()
        }
    }
}
