#![allow(dead_code)]

use std::sync::Arc;

use dlmodel::functions::Quadratic;
use dlmodel::models::SmoothModel;
use dlmodel::{FeasibleSet, ObjectiveSpec, Vector};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random positive definite quadratic with its minimizer.
pub struct QuadraticCase {
    pub q: Quadratic,
    pub x_star: Vector,
    pub f_star: f64,
    pub l: f64,
    pub x0: Vector,
}

impl QuadraticCase {
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let a = m.transpose() * &m / n as f64 + DMatrix::identity(n, n) * 0.01;
        let b = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let x0 = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let q = Quadratic::new((&a + a.transpose()) * 0.5, b).unwrap();
        let x_star = q.minimizer().unwrap();
        let f_star = dlmodel::functions::ConvexFunction::value(&q, &x_star);
        let l = q.lipschitz();
        Self { q, x_star, f_star, l, x0 }
    }

    pub fn model(&self) -> SmoothModel {
        SmoothModel::quadratic(self.q.clone())
    }

    pub fn objective(&self) -> ObjectiveSpec {
        ObjectiveSpec::new(FeasibleSet::unconstrained(self.x0.len()))
            .with_function(Arc::new(self.q.clone()))
            .with_optimum(self.x_star.clone(), self.f_star)
    }

    /// `R` with `R^2 = V(x_*, x_0)` for the Euclidean prox.
    pub fn r(&self) -> f64 {
        (0.5 * (&self.x_star - &self.x0).norm_squared()).sqrt()
    }
}
