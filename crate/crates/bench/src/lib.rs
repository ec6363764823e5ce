//! Fixtures shared by the benchmarks.

use dlmodel::functions::Quadratic;
use dlmodel::Vector;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A seeded positive definite quadratic of dimension `n` and a start point.
pub fn quadratic(n: usize, seed: u64) -> (Quadratic, Vector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let a = m.transpose() * &m / n as f64 + DMatrix::identity(n, n) * 0.01;
    let a = (&a + a.transpose()) * 0.5;
    let b = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    let x0 = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    (Quadratic::new(a, b).expect("symmetric"), x0)
}
