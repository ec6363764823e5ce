//! Convex functions consumed by the models and subproblem solvers.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::Vector;

/// A convex function with a deterministic subgradient selection.
///
/// Smooth functions return their gradient from [`ConvexFunction::subgradient`].
/// At kinks the selection rule is fixed per implementation (e.g. `sign(0) = 0`
/// for absolute values).
pub trait ConvexFunction: Send + Sync + fmt::Debug {
    fn value(&self, x: &Vector) -> f64;
    fn subgradient(&self, x: &Vector) -> Vector;

    /// Coordinate-wise decomposition `f(x) = sum_i f_i(x_i)`, when available.
    fn separable(&self) -> Option<&dyn Separable> {
        None
    }

    /// `Some(lambda)` when the function is exactly `lambda * |x|_1`.
    fn l1_weight(&self) -> Option<f64> {
        None
    }
}

/// Per-coordinate access to a separable convex function.
pub trait Separable: Send + Sync {
    fn component_value(&self, i: usize, t: f64) -> f64;
    /// The subdifferential of the i-th component at `t` as an interval.
    fn component_subdifferential(&self, i: usize, t: f64) -> (f64, f64);
    /// Points where the i-th component is not differentiable.
    fn component_kinks(&self, _i: usize) -> Vec<f64> {
        Vec::new()
    }
}

/// `x^T A x / 2 - b^T x + c` with symmetric positive semidefinite `A`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    pub a: DMatrix<f64>,
    pub b: Vector,
    pub c: f64,
}

impl Quadratic {
    pub fn new(a: DMatrix<f64>, b: Vector) -> Result<Self> {
        if !a.is_square() || a.nrows() != b.len() {
            return Err(Error::RejectedInput(format!(
                "quadratic: matrix {}x{} does not match vector of length {}",
                a.nrows(),
                a.ncols(),
                b.len()
            )));
        }
        let asym = (&a - a.transpose()).amax();
        if asym > 1e-10 * (1.0 + a.amax()) {
            return Err(Error::RejectedInput("quadratic: matrix is not symmetric".into()));
        }
        Ok(Self { a, b, c: 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// Largest eigenvalue of `A`, the Lipschitz constant of the gradient.
    pub fn lipschitz(&self) -> f64 {
        SymmetricEigen::new(self.a.clone()).eigenvalues.max().max(0.0)
    }

    /// Unconstrained minimizer, when `A` is positive definite.
    pub fn minimizer(&self) -> Option<Vector> {
        self.a.clone().cholesky().map(|c| c.solve(&self.b))
    }
}

impl ConvexFunction for Quadratic {
    fn value(&self, x: &Vector) -> f64 {
        0.5 * x.dot(&(&self.a * x)) - self.b.dot(x) + self.c
    }

    fn subgradient(&self, x: &Vector) -> Vector {
        &self.a * x - &self.b
    }
}

/// `|A x - b|_2^2 / 2`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub a: DMatrix<f64>,
    pub b: Vector,
}

impl LeastSquares {
    pub fn new(a: DMatrix<f64>, b: Vector) -> Result<Self> {
        if a.nrows() != b.len() {
            return Err(Error::RejectedInput("least squares: row count does not match b".into()));
        }
        Ok(Self { a, b })
    }

    /// `sigma_max(A)^2`.
    pub fn lipschitz(&self) -> f64 {
        let gram = self.a.transpose() * &self.a;
        SymmetricEigen::new(gram).eigenvalues.max().max(0.0)
    }
}

impl ConvexFunction for LeastSquares {
    fn value(&self, x: &Vector) -> f64 {
        0.5 * (&self.a * x - &self.b).norm_squared()
    }

    fn subgradient(&self, x: &Vector) -> Vector {
        self.a.transpose() * (&self.a * x - &self.b)
    }
}

/// `weight * |x|_1`, subgradient `weight * sign(x)` with `sign(0) = 0`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    pub weight: f64,
}

impl ConvexFunction for L1Norm {
    fn value(&self, x: &Vector) -> f64 {
        self.weight * x.lp_norm(1)
    }

    fn subgradient(&self, x: &Vector) -> Vector {
        x.map(|v| self.weight * sign(v))
    }

    fn separable(&self) -> Option<&dyn Separable> {
        Some(self)
    }

    fn l1_weight(&self) -> Option<f64> {
        Some(self.weight)
    }
}

impl Separable for L1Norm {
    fn component_value(&self, _i: usize, t: f64) -> f64 {
        self.weight * t.abs()
    }

    fn component_subdifferential(&self, _i: usize, t: f64) -> (f64, f64) {
        if t > 0.0 {
            (self.weight, self.weight)
        } else if t < 0.0 {
            (-self.weight, -self.weight)
        } else {
            (-self.weight, self.weight)
        }
    }

    fn component_kinks(&self, _i: usize) -> Vec<f64> {
        vec![0.0]
    }
}

/// `sum_i |x_i|^(1 + nu) / (1 + nu)`: its gradient is Holder continuous with
/// exponent `nu`. For `nu = 0` this is `|x|_1`.
#[derive(Debug, Clone, Copy)]
pub struct HolderPower {
    pub nu: f64,
}

impl HolderPower {
    pub fn new(nu: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&nu) {
            return Err(Error::Configuration(format!("Holder exponent {nu} outside [0, 1]")));
        }
        Ok(Self { nu })
    }

    /// Holder constant of the gradient in one dimension: `2^(1 - nu)`.
    pub fn holder_constant_1d(&self) -> f64 {
        2f64.powf(1.0 - self.nu)
    }

    fn derivative(&self, t: f64) -> f64 {
        if self.nu == 0.0 {
            sign(t)
        } else {
            sign(t) * t.abs().powf(self.nu)
        }
    }
}

impl ConvexFunction for HolderPower {
    fn value(&self, x: &Vector) -> f64 {
        let q = 1.0 + self.nu;
        x.iter().map(|v| v.abs().powf(q)).sum::<f64>() / q
    }

    fn subgradient(&self, x: &Vector) -> Vector {
        x.map(|v| self.derivative(v))
    }

    fn separable(&self) -> Option<&dyn Separable> {
        Some(self)
    }

    fn l1_weight(&self) -> Option<f64> {
        (self.nu == 0.0).then_some(1.0)
    }
}

impl Separable for HolderPower {
    fn component_value(&self, _i: usize, t: f64) -> f64 {
        t.abs().powf(1.0 + self.nu) / (1.0 + self.nu)
    }

    fn component_subdifferential(&self, _i: usize, t: f64) -> (f64, f64) {
        if self.nu == 0.0 && t == 0.0 {
            (-1.0, 1.0)
        } else {
            let d = self.derivative(t);
            (d, d)
        }
    }

    fn component_kinks(&self, _i: usize) -> Vec<f64> {
        if self.nu == 0.0 {
            vec![0.0]
        } else {
            Vec::new()
        }
    }
}

/// Outer function of a superposition `f(f_1(x), ..., f_m(x))`: convex,
/// nondecreasing in every argument and `M`-Lipschitz with respect to l1.
pub trait OuterFunction: Send + Sync + fmt::Debug {
    fn value(&self, u: &[f64]) -> f64;
    /// A nonnegative subgradient (weights on the inner functions).
    fn subgradient(&self, u: &[f64]) -> Vec<f64>;
    /// The Lipschitz constant `M` with respect to the l1 norm.
    fn lipschitz_l1(&self) -> f64;

    /// For outer functions of the form `f(u) = max_{w in W} <w, u>`, the
    /// Euclidean projection of `w` onto `W`. Enables the dual subproblem
    /// solver.
    fn project_dual(&self, _w: &[f64]) -> Option<Vec<f64>> {
        None
    }
}

/// `max_i u_i`; the subgradient picks the lowest index attaining the max.
#[derive(Debug, Clone, Copy, Default)]
pub struct MaxOuter;

impl OuterFunction for MaxOuter {
    fn value(&self, u: &[f64]) -> f64 {
        u.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn subgradient(&self, u: &[f64]) -> Vec<f64> {
        let mut best = 0;
        for (i, v) in u.iter().enumerate() {
            if *v > u[best] {
                best = i;
            }
        }
        let mut w = vec![0.0; u.len()];
        if !u.is_empty() {
            w[best] = 1.0;
        }
        w
    }

    fn lipschitz_l1(&self) -> f64 {
        1.0
    }

    fn project_dual(&self, w: &[f64]) -> Option<Vec<f64>> {
        let v = Vector::from_column_slice(w);
        Some(crate::subproblem::project_simplex(&v, 1.0).as_slice().to_vec())
    }
}

/// `sum_i w_i u_i` with nonnegative weights.
#[derive(Debug, Clone)]
pub struct WeightedSumOuter {
    weights: Vec<f64>,
}

impl WeightedSumOuter {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Configuration("weighted sum needs nonnegative weights".into()));
        }
        Ok(Self { weights })
    }
}

impl OuterFunction for WeightedSumOuter {
    fn value(&self, u: &[f64]) -> f64 {
        u.iter().zip(&self.weights).map(|(a, w)| a * w).sum()
    }

    fn subgradient(&self, _u: &[f64]) -> Vec<f64> {
        self.weights.clone()
    }

    fn lipschitz_l1(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    fn project_dual(&self, _w: &[f64]) -> Option<Vec<f64>> {
        Some(self.weights.clone())
    }
}

type ValueFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// A convex function assembled from closures.
#[derive(Clone)]
pub struct FnFunction {
    value: ValueFn,
    subgradient: GradFn,
}

impl FnFunction {
    pub fn new(
        value: impl Fn(&Vector) -> f64 + Send + Sync + 'static,
        subgradient: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Self { value: Arc::new(value), subgradient: Arc::new(subgradient) }
    }
}

impl fmt::Debug for FnFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("FnFunction")
    }
}

impl ConvexFunction for FnFunction {
    fn value(&self, x: &Vector) -> f64 {
        (self.value)(x)
    }

    fn subgradient(&self, x: &Vector) -> Vector {
        (self.subgradient)(x)
    }
}

pub(crate) fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}
