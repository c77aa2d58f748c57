//! Exact Gaussian-process regression and finite-basis inference.

pub mod basis;
pub mod exact;

pub use basis::{separable_features, BasisModel};
pub use exact::{
    cholesky_jittered, gram, gram_sym, lml_with_gradient, log_marginal_likelihood, GpModel,
    Prediction, VarianceKind, MAX_JITTER, MIN_JITTER,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Points};
    use crate::kernels::{
        BaseKernel, Kernel, MaternOrder, NonstationaryComponent, NonstationaryGsk, StarKernel,
        StationaryComponent, StationaryGsk,
    };
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use std::f64::consts::PI;

    fn unit_se() -> Kernel {
        StationaryGsk::new(
            BaseKernel::SquaredExponential,
            vec![StationaryComponent::new(1.0, vec![1.0], vec![0.0])],
        )
        .unwrap()
        .into()
    }

    fn matern_kernel() -> Kernel {
        StationaryGsk::new(
            BaseKernel::Matern(MaternOrder::ThreeHalves),
            vec![
                StationaryComponent::new(1.2, vec![0.8], vec![0.3]),
                StationaryComponent::new(0.4, vec![2.0], vec![1.1]),
            ],
        )
        .unwrap()
        .into()
    }

    fn one_point(y: f64) -> Dataset {
        Dataset::new(Points::from_scalars(&[0.3]).unwrap(), vec![y]).unwrap()
    }

    #[test]
    fn lml_scalar_closed_forms() {
        let k = unit_se();
        let v = log_marginal_likelihood(&one_point(0.0), &k, 0.0).unwrap();
        assert_relative_eq!(v, -0.5 * (2.0 * PI).ln(), epsilon = 1e-14);
        assert!((v + 0.918939).abs() < 1e-6);
        let v = log_marginal_likelihood(&one_point(1.0), &k, 1.0).unwrap();
        let expect = -0.25 - 0.5 * 2f64.ln() - 0.5 * (2.0 * PI).ln();
        assert_relative_eq!(v, expect, epsilon = 1e-14);
        assert!((v + 1.515512).abs() < 1e-6);
    }

    #[test]
    fn lml_two_points_brute_force() {
        let k = matern_kernel();
        let x = [0.1, 0.65];
        let y = [0.7, -0.4];
        let noise = 0.3;
        let data = Dataset::new(Points::from_scalars(&x).unwrap(), y.to_vec()).unwrap();
        let a = k.eval(&[x[0]], &[x[0]]).unwrap() + noise;
        let b = k.eval(&[x[0]], &[x[1]]).unwrap();
        let d = k.eval(&[x[1]], &[x[1]]).unwrap() + noise;
        let det = a * d - b * b;
        let quad = (d * y[0] * y[0] - 2.0 * b * y[0] * y[1] + a * y[1] * y[1]) / det;
        let expect = -0.5 * quad - 0.5 * det.ln() - (2.0 * PI).ln();
        let got = log_marginal_likelihood(&data, &k, noise).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-13);
    }

    #[test]
    fn noise_gradient_scalar() {
        let (_, g) = lml_with_gradient(&one_point(0.0), &unit_se(), 1.0).unwrap();
        assert_relative_eq!(*g.last().unwrap(), -0.25, epsilon = 1e-15);
    }

    #[test]
    fn gram_diagonal_and_singleton() {
        let k = matern_kernel();
        let x = Points::from_scalars(&[0.0, 0.4, -1.3, 2.2]).unwrap();
        let g = gram_sym(&k, &x).unwrap();
        for i in 0..4 {
            assert_relative_eq!(g[(i, i)], 1.6, epsilon = 1e-15);
        }
        assert_eq!(g, g.transpose());
        assert_eq!(gram(&k, &x, &x).unwrap(), g);
        let one = Points::from_scalars(&[0.7]).unwrap();
        let g1 = gram_sym(&k, &one).unwrap();
        assert_eq!(g1.shape(), (1, 1));
        assert_eq!(g1[(0, 0)], k.eval(&[0.7], &[0.7]).unwrap());
        let two_d = Points::from_rows(&[vec![0.0, 1.0]]).unwrap();
        assert!(gram_sym(&k, &two_d).is_err());
    }

    #[test]
    fn factor_reconstructs_covariance() {
        let k = matern_kernel();
        let x = Points::from_scalars(&[0.0, 0.2, 0.5, 0.9, 1.4]).unwrap();
        let data = Dataset::new(x.clone(), vec![0.1, 0.3, -0.2, 0.5, 0.0]).unwrap();
        let model = GpModel::fit(&data, &k, 0.05).unwrap();
        let l = model.factor().unwrap();
        let mut target = gram_sym(&k, &x).unwrap();
        for i in 0..5 {
            target[(i, i)] += 0.05 + model.jitter();
        }
        let rel = (&l * l.transpose() - &target).norm() / target.norm();
        assert!(rel < 1e-8, "{rel}");
        let resid = (&target * model.alpha() - nalgebra::DVector::from_column_slice(data.y()))
            .norm()
            / nalgebra::DVector::from_column_slice(data.y()).norm();
        assert!(resid < 1e-8, "{resid}");
    }

    #[test]
    fn prior_prediction() {
        let k = matern_kernel();
        let model = GpModel::prior(&k, 0.2);
        let xs = Points::from_scalars(&[0.0, 3.0]).unwrap();
        let p = model.predict(&xs, VarianceKind::Observation).unwrap();
        assert_eq!(p.mean, vec![0.0, 0.0]);
        for v in p.variance {
            assert_relative_eq!(v, 1.8, epsilon = 1e-14);
        }
    }

    #[test]
    fn noiseless_interpolation() {
        let k = matern_kernel();
        let data = Dataset::new(
            Points::from_scalars(&[0.0, 0.5, 1.0]).unwrap(),
            vec![0.3, -0.8, 1.1],
        )
        .unwrap();
        let model = GpModel::fit(&data, &k, 1e-12).unwrap();
        let p = model
            .predict(&Points::from_scalars(&[0.5]).unwrap(), VarianceKind::Latent)
            .unwrap();
        assert!((p.mean[0] + 0.8).abs() < 1e-6, "{}", p.mean[0]);
        assert!(p.variance[0] < 1e-6);
    }

    #[test]
    fn two_point_conditioning_brute_force() {
        let k = matern_kernel();
        let x = [0.2, 0.9];
        let y = [1.0, -0.5];
        let noise = 0.1;
        let xs = 0.55;
        let data = Dataset::new(Points::from_scalars(&x).unwrap(), y.to_vec()).unwrap();
        let model = GpModel::fit(&data, &k, noise).unwrap();
        let p = model
            .predict(&Points::from_scalars(&[xs]).unwrap(), VarianceKind::Observation)
            .unwrap();

        let kf = |a: f64, b: f64| k.eval(&[a], &[b]).unwrap();
        let a = kf(x[0], x[0]) + noise;
        let b = kf(x[0], x[1]);
        let d = kf(x[1], x[1]) + noise;
        let det = a * d - b * b;
        let inv = [[d / det, -b / det], [-b / det, a / det]];
        let ks = [kf(xs, x[0]), kf(xs, x[1])];
        let mut mean = 0.0;
        let mut quad = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                mean += ks[i] * inv[i][j] * y[j];
                quad += ks[i] * inv[i][j] * ks[j];
            }
        }
        let var = kf(xs, xs) - quad + noise;
        assert_relative_eq!(p.mean[0], mean, max_relative = 1e-12);
        assert_relative_eq!(p.variance[0], var, max_relative = 1e-12);
    }

    #[test]
    fn jitter_rescues_singular_gram() {
        let k = unit_se();
        let mut m = DMatrix::from_element(3, 3, 1.0);
        m[(0, 0)] = 1.0;
        let (_, jitter) = cholesky_jittered(&m).unwrap();
        assert!(jitter > 0.0);
        let x = Points::from_scalars(&[0.5, 0.5, 0.5]).unwrap();
        let data = Dataset::new(x, vec![1.0, 1.0, 1.0]).unwrap();
        assert!(log_marginal_likelihood(&data, &k, 0.0).unwrap().is_finite());
        let neg = DMatrix::from_diagonal_element(2, 2, -1.0);
        assert!(matches!(
            cholesky_jittered(&neg),
            Err(crate::GskError::Numerical(_))
        ));
    }

    #[test]
    fn basis_requires_separable_and_noise() {
        let comps = vec![NonstationaryComponent::new(1.0, vec![1.0], vec![0.2], vec![0.5])];
        let wrap = NonstationaryGsk::new(
            StarKernel::StationaryWrap(BaseKernel::SquaredExponential),
            comps.clone(),
        )
        .unwrap();
        let sep =
            NonstationaryGsk::new(StarKernel::Separable(BaseKernel::SquaredExponential), comps)
                .unwrap();
        let data = one_point(1.0);
        assert!(matches!(
            BasisModel::fit(&data, &wrap, 0.1),
            Err(crate::GskError::Contract(_))
        ));
        assert!(matches!(
            BasisModel::fit(&data, &sep, 0.0),
            Err(crate::GskError::Contract(_))
        ));
    }

    #[test]
    fn basis_prior_variance() {
        let k = NonstationaryGsk::new(
            StarKernel::Separable(BaseKernel::Matern(MaternOrder::Half)),
            vec![
                NonstationaryComponent::new(0.6, vec![1.5], vec![0.2], vec![0.9]),
                NonstationaryComponent::new(1.1, vec![0.3], vec![-0.4], vec![1.7]),
            ],
        )
        .unwrap();
        let model = BasisModel::prior(&k, 0.05).unwrap();
        let x = [0.37];
        let phi = separable_features(&k, &x).unwrap();
        let p = model
            .predict(&Points::from_scalars(&x).unwrap(), VarianceKind::Observation)
            .unwrap();
        let expect = 0.05 + phi.iter().map(|v| v * v).sum::<f64>();
        assert_relative_eq!(p.variance[0], expect, max_relative = 1e-13);
        assert_relative_eq!(
            phi.iter().map(|v| v * v).sum::<f64>(),
            k.eval(&x, &x).unwrap(),
            max_relative = 1e-13
        );
    }

    #[test]
    fn basis_interpolates_span() {
        // n = 2 <= 2K targets are always reachable by the 2K features
        let k = NonstationaryGsk::new(
            StarKernel::Separable(BaseKernel::SquaredExponential),
            vec![NonstationaryComponent::new(1.0, vec![0.5], vec![0.3], vec![1.2])],
        )
        .unwrap();
        let data = Dataset::new(
            Points::from_scalars(&[0.1, 0.4]).unwrap(),
            vec![0.8, -0.3],
        )
        .unwrap();
        let model = BasisModel::fit(&data, &k, 1e-10).unwrap();
        let p = model.predict(data.x(), VarianceKind::Latent).unwrap();
        for (m, y) in p.mean.iter().zip(data.y()) {
            assert!((m - y).abs() < 1e-6, "{m} vs {y}");
        }
    }
}
