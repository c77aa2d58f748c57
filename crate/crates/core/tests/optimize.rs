mod common;

use std::sync::Mutex;

use common::*;
use gsk::optimize::{
    minimize, train_gp, NegLogMarginalLikelihood, Objective, SseObjective, Start,
};
use gsk::{
    BaseKernel, Dataset, GpModel, Kernel, KernelConfig, OptimizerConfig, Points, Result,
    StationaryComponent, StationaryGsk, VarianceKind,
};
use gsk::gp::log_marginal_likelihood;
use rand::Rng;
use rand_distr::StandardNormal;

#[test]
fn sse_self_fit_is_zero() {
    let mut g = rng(30);
    for _ in 0..10 {
        let k = random_kernel(&mut g);
        let d = k.dim();
        let left = random_points(&mut g, 40, d, -1.0, 1.0);
        let right = random_points(&mut g, 40, d, -1.0, 1.0);
        let targets = left
            .rows()
            .zip(right.rows())
            .map(|(a, b)| k.eval(a, b).unwrap())
            .collect();
        let obj = SseObjective::new(k.clone(), left, right, targets).unwrap();
        let (v, grad) = obj.value_and_grad_at(&k.pack(0.0)).unwrap();
        assert!(v < 1e-20, "{v}");
        assert!(grad.iter().all(|x| x.abs() < 1e-8), "{grad:?}");
    }
}

#[test]
fn sse_single_pair() {
    // k(x, x) = 2 for a one-component kernel with amplitude 2
    let k: Kernel = StationaryGsk::new(
        BaseKernel::SquaredExponential,
        vec![StationaryComponent::new(2.0, vec![1.0], vec![0.5])],
    )
    .unwrap()
    .into();
    let p = Points::from_scalars(&[0.3]).unwrap();
    let obj = SseObjective::new(k.clone(), p.clone(), p, vec![1.0]).unwrap();
    let (v, _) = obj.value_and_grad_at(&k.pack(0.0)).unwrap();
    assert!((v - 1.0).abs() < 1e-12);
}

#[test]
fn sse_gradient_matches_finite_differences() {
    let mut g = rng(31);
    for i in 0..50 {
        let k = random_kernel(&mut g);
        let d = k.dim();
        let n = g.gen_range(1..=30);
        let left = random_points(&mut g, n, d, -1.0, 1.0);
        let right = random_points(&mut g, n, d, -1.0, 1.0);
        let targets = (0..n).map(|_| uniform(&mut g, -2.0, 3.0)).collect();
        let obj = SseObjective::new(k.clone(), left, right, targets).unwrap();
        let theta = k.pack(0.0);
        let (v, grad) = obj.value_and_grad_at(&theta).unwrap();
        let fd = central_diff(|t| obj.value_and_grad_at(t).unwrap().0, &theta, 1e-6);
        let err = max_rel_error(&grad, &fd, fd_floor(v, &grad));
        assert!(err < 1e-5, "instance {i} {}: {err}", k.family_label());
    }
}

/// Records every point the optimizer evaluates.
struct Recording<'a> {
    inner: &'a NegLogMarginalLikelihood,
    seen: Mutex<Vec<Vec<f64>>>,
}

impl Objective for Recording<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value_and_grad(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        self.seen.lock().unwrap().push(x.to_vec());
        self.inner.value_and_grad(x)
    }
}

fn sample_gp(kernel: &Kernel, noise: f64, n: usize, seed: u64) -> Dataset {
    let mut g = rng(seed);
    let x = random_points(&mut g, n, kernel.dim(), 0.0, 5.0);
    let prior = GpModel::prior(kernel, 0.0);
    let _ = prior.predict(&x, VarianceKind::Latent).unwrap();
    let c = gsk::gp::gram_sym(kernel, &x).unwrap()
        + nalgebra::DMatrix::identity(n, n) * noise;
    let l = c.cholesky().unwrap().unpack();
    let z = nalgebra::DVector::from_fn(n, |_, _| g.sample::<f64, _>(StandardNormal));
    Dataset::new(x, (l * z).iter().copied().collect()).unwrap()
}

fn se_kernel(sigma2: f64, gamma: f64, omega: f64) -> Kernel {
    StationaryGsk::new(
        BaseKernel::SquaredExponential,
        vec![StationaryComponent::new(sigma2, vec![gamma], vec![omega])],
    )
    .unwrap()
    .into()
}

#[test]
fn every_iterate_is_a_valid_kernel() {
    let truth = se_kernel(1.0, 0.5, 0.3);
    let data = sample_gp(&truth, 0.05, 30, 1);
    let inner = NegLogMarginalLikelihood::new(data, truth.clone()).unwrap();
    let rec = Recording { inner: &inner, seen: Mutex::new(Vec::new()) };
    let roles = truth.param_roles();
    let cfg = OptimizerConfig { restarts: 2, max_iters: 200, ..OptimizerConfig::default() };
    minimize(&rec, Start::Sampled(&roles), &cfg).unwrap();
    let seen = rec.seen.into_inner().unwrap();
    assert!(seen.len() > 10);
    for x in seen {
        let Ok((k, noise)) = truth.unpack(&x) else { continue };
        assert!(noise > 0.0);
        // the validating config path rejects any invariant violation
        KernelConfig::from_kernel(&k, noise).to_kernel().unwrap();
    }
}

#[test]
fn recovers_noise_level() {
    let truth = se_kernel(1.0, 0.6, 0.2);
    let noise = 0.1;
    let cfg = OptimizerConfig { restarts: 3, ..OptimizerConfig::default() };
    for seed in 0..5 {
        let data = sample_gp(&truth, noise, 100, 100 + seed);
        let rep = train_gp(&data, &truth, &cfg).unwrap();
        let (_, fitted) = rep.unpack(&truth).unwrap();
        assert!(fitted > noise / 2.0 && fitted < noise * 2.0, "seed {seed}: {fitted}");
    }
}

fn total_variance(k: &Kernel) -> f64 {
    k.eval(&vec![0.0; k.dim()], &vec![0.0; k.dim()]).unwrap()
}

#[test]
fn zero_targets_shrink_variance() {
    let template = se_kernel(1.0, 1.0, 1.0);
    let x = Points::from_scalars(&[0.1, 0.5, 0.9, 1.4, 2.0]).unwrap();
    let data = Dataset::new(x, vec![0.0; 5]).unwrap();
    let rep = train_gp(&data, &template, &OptimizerConfig::default()).unwrap();
    let (k, noise) = rep.unpack(&template).unwrap();
    let start = &rep.restarts[rep.best_restart];
    let (k0, n0) = template.unpack(&start.initial_point).unwrap();
    assert!(total_variance(&k) + noise < total_variance(&k0) + n0);
}

#[test]
fn single_point_improves_likelihood() {
    let template = se_kernel(1.0, 1.0, 1.0);
    let data = Dataset::new(Points::from_scalars(&[0.4]).unwrap(), vec![1.3]).unwrap();
    let rep = train_gp(&data, &template, &OptimizerConfig::default()).unwrap();
    let (k, noise) = rep.unpack(&template).unwrap();
    let best = log_marginal_likelihood(&data, &k, noise).unwrap();
    for r in &rep.restarts {
        let (k0, n0) = template.unpack(&r.initial_point).unwrap();
        assert!(best >= log_marginal_likelihood(&data, &k0, n0).unwrap());
    }
}

#[test]
fn training_is_deterministic() {
    let truth = se_kernel(1.0, 0.6, 0.2);
    let data = sample_gp(&truth, 0.1, 40, 3);
    let cfg = OptimizerConfig { restarts: 3, seed: 11, ..OptimizerConfig::default() };
    let a = train_gp(&data, &truth, &cfg).unwrap();
    let b = train_gp(&data, &truth, &cfg).unwrap();
    assert!(a.same_result(&b));
    assert_eq!(a.best.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.best.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
}
