mod common;

use common::*;
use gsk::{BaseKernel, MaternOrder, Points, RffBasis, StationaryComponent, StationaryGsk};

fn single(base: BaseKernel, sigma2: f64, gamma: f64, omega: f64) -> StationaryGsk {
    StationaryGsk::new(base, vec![StationaryComponent::new(sigma2, vec![gamma], vec![omega])]).unwrap()
}

fn taus(n: usize, max: f64) -> Vec<f64> {
    (0..n).map(|i| max * (i as f64 + 0.5) / n as f64).collect()
}

#[test]
fn sampled_frequencies_are_centred() {
    for base in BASES {
        let k = single(base, 1.0, 1.3, 0.0);
        let m = 1_000_000;
        let b = RffBasis::sample(&k, m, 7).unwrap();
        let w = b.frequencies().as_slice();
        let mean = w.iter().sum::<f64>() / m as f64;
        let var = w.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        let se = (var / m as f64).sqrt();
        assert!(mean.abs() < 4.0 * se, "{base}: mean {mean} se {se}");
    }
}

#[test]
fn mixture_proportions_follow_amplitudes() {
    let k = StationaryGsk::new(
        BaseKernel::SquaredExponential,
        vec![
            StationaryComponent::new(3.0, vec![0.0], vec![1.0]),
            StationaryComponent::new(1.0, vec![0.0], vec![5.0]),
        ],
    )
    .unwrap();
    let m = 100_000;
    let b = RffBasis::sample(&k, m, 8).unwrap();
    let first = b.frequencies().as_slice().iter().filter(|w| w.abs() == 1.0).count();
    let p = first as f64 / m as f64;
    assert!((p - 0.75).abs() < 3.0 * (0.75f64 * 0.25 / m as f64).sqrt(), "{p}");
}

#[test]
fn large_basis_is_accurate() {
    for base in [BaseKernel::SquaredExponential, BaseKernel::Matern(MaternOrder::ThreeHalves)] {
        let k = single(base, 1.4, 1.0, 0.4);
        let m = 100_000;
        let b = RffBasis::sample(&k, m, 9).unwrap();
        let ts = Points::from_scalars(&taus(20, 3.0)).unwrap();
        let est = b.estimate_kernel(&ts).unwrap();
        let bound = 5.0 * 1.4 / (m as f64).sqrt();
        for (t, e) in ts.rows().zip(&est) {
            let exact = k.eval(t).unwrap();
            assert!((e - exact).abs() <= bound, "{base} τ={t:?}: {e} vs {exact}");
        }
    }
}

#[test]
fn estimator_is_unbiased() {
    for base in BASES {
        let k = single(base, 1.0, 0.8, 0.6);
        let ts = taus(10, 2.0);
        let seeds = 200;
        let draws: Vec<Vec<f64>> = (0..seeds)
            .map(|s| {
                let b = RffBasis::sample(&k, 64, 1000 + s).unwrap();
                ts.iter().map(|t| b.estimate(&[*t]).unwrap()).collect()
            })
            .collect();
        for (j, t) in ts.iter().enumerate() {
            let xs: Vec<f64> = draws.iter().map(|d| d[j]).collect();
            let mean = xs.iter().sum::<f64>() / seeds as f64;
            let var = xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (seeds - 1) as f64;
            let se = (var / seeds as f64).sqrt();
            let exact = k.eval(&[*t]).unwrap();
            assert!((mean - exact).abs() <= 4.0 * se, "{base} τ={t}: {mean} vs {exact} (se {se})");
        }
    }
}

/// Root of the seed-averaged mean squared error over a τ grid.
pub fn rms_error(k: &StationaryGsk, m: usize, seeds: u64) -> f64 {
    let ts = taus(20, 2.0);
    let mut total = 0.0;
    for s in 0..seeds {
        let b = RffBasis::sample(k, m, 5000 + s).unwrap();
        for t in &ts {
            total += (b.estimate(&[*t]).unwrap() - k.eval(&[*t]).unwrap()).powi(2);
        }
    }
    (total / (seeds as f64 * ts.len() as f64)).sqrt()
}

#[test]
fn error_halves_when_features_quadruple() {
    for base in [BaseKernel::SquaredExponential, BaseKernel::Matern(MaternOrder::ThreeHalves)] {
        let k = single(base, 1.0, 1.0, 0.5);
        let ratio = rms_error(&k, 256, 100) / rms_error(&k, 1024, 100);
        assert!((1.6..=2.6).contains(&ratio), "{base}: {ratio}");
    }
}
