use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{reject, Error, Result};
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::tolerances;
use crate::Vector;

/// The strongly convex `phi` of a saddle model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SaddleRegularizer {
    /// `mu |y|_2^2 / 2` on `R^m`; strongly convex for `p = 2`.
    Euclidean,
    /// `mu sum y_i ln y_i` on the unit simplex; strongly convex for `p = 1`.
    Entropy,
}

/// Model of `f(x) = max_y { <x, b - A y> - phi(y) }` built from an inexact
/// maximizer `y~`: `F_d(x) = <x, b - A y~> - phi(y~)` and
/// `psi(z, x) = <b - A y~, z - x>`, a `(delta, 2L)`-model with
/// `L = max_{|y|_p <= 1} |A y|_2^2 / mu`.
///
/// The inner ascent takes damped steps of size `1 / (2 mu)` from the
/// regularizer's minimizer and stops at function accuracy `delta / 2`.
#[derive(Debug, Clone)]
pub struct SaddleModel {
    a: DMatrix<f64>,
    b: Vector,
    mu: f64,
    regularizer: SaddleRegularizer,
    delta: f64,
    max_inner_iters: usize,
    domain: FeasibleSet,
}

impl SaddleModel {
    pub fn new(a: DMatrix<f64>, b: Vector, mu: f64, regularizer: SaddleRegularizer, delta: f64) -> Result<Self> {
        if a.nrows() != b.len() || a.ncols() == 0 {
            return reject("saddle model: A must be n x m with n = len(b)");
        }
        if !(mu.is_finite() && mu > 0.0) {
            return reject(format!("saddle model: mu = {mu} must be positive"));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return reject(format!("saddle model: inner accuracy {delta} must be nonnegative"));
        }
        let domain = FeasibleSet::unconstrained(b.len());
        Ok(Self { a, b, mu, regularizer, delta, max_inner_iters: 200, domain })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("saddle model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    /// `max_{|y|_p <= 1} |A y|_2^2 / mu`: the squared spectral norm for
    /// `p = 2`, the largest squared column norm for `p = 1`.
    pub fn l(&self) -> f64 {
        let top = match self.regularizer {
            SaddleRegularizer::Euclidean => {
                SymmetricEigen::new(self.a.transpose() * &self.a).eigenvalues.max().max(0.0)
            }
            SaddleRegularizer::Entropy => self.a.column_iter().map(|c| c.norm_squared()).fold(0.0, f64::max),
        };
        top / self.mu
    }

    /// `(delta, 2L)`.
    pub fn declared(&self) -> (f64, f64) {
        (self.delta, 2.0 * self.l())
    }

    fn phi(&self, y: &Vector) -> f64 {
        match self.regularizer {
            SaddleRegularizer::Euclidean => 0.5 * self.mu * y.norm_squared(),
            SaddleRegularizer::Entropy => {
                self.mu * y.iter().filter(|v| **v > 0.0).map(|v| v * v.ln()).sum::<f64>()
            }
        }
    }

    /// `<x, b - A y> - phi(y)`.
    pub fn inner_value(&self, x: &Vector, y: &Vector) -> f64 {
        x.dot(&(&self.b - &self.a * y)) - self.phi(y)
    }

    /// The exact maximizer.
    pub fn maximizer(&self, x: &Vector) -> Vector {
        let s = self.a.transpose() * x;
        match self.regularizer {
            SaddleRegularizer::Euclidean => -s / self.mu,
            SaddleRegularizer::Entropy => softmax(&(-s / self.mu)),
        }
    }

    /// `f(x)` in closed form.
    pub fn value(&self, x: &Vector) -> f64 {
        let s = self.a.transpose() * x;
        let base = x.dot(&self.b);
        match self.regularizer {
            SaddleRegularizer::Euclidean => base + s.norm_squared() / (2.0 * self.mu),
            SaddleRegularizer::Entropy => {
                let t = -s / self.mu;
                let m = t.max();
                base + self.mu * (m + t.map(|v| (v - m).exp()).sum().ln())
            }
        }
    }

    /// A maximizer within function accuracy `delta / 2` and its gap.
    pub fn inner_solve(&self, x: &Vector) -> Result<(Vector, f64)> {
        let target = 0.5 * self.delta;
        let exact = self.maximizer(x);
        let f = self.value(x);
        let gap = |y: &Vector| f - self.inner_value(x, y);
        let scale = tolerances::EXIT_TEST_ULPS * f64::EPSILON * (1.0 + f.abs());
        let m = self.a.ncols();
        let mut y = match self.regularizer {
            SaddleRegularizer::Euclidean => Vector::zeros(m),
            SaddleRegularizer::Entropy => Vector::from_element(m, 1.0 / m as f64),
        };
        for _ in 0..self.max_inner_iters {
            let g = gap(&y);
            if g <= target {
                return Ok((y, g.max(0.0)));
            }
            if g <= scale {
                break;
            }
            y = match self.regularizer {
                SaddleRegularizer::Euclidean => (&y + &exact) * 0.5,
                SaddleRegularizer::Entropy => {
                    let log = y.zip_map(&exact, |a, b| 0.5 * (a.ln() + b.max(f64::MIN_POSITIVE).ln()));
                    softmax(&log)
                }
            };
        }
        let g = gap(&exact);
        if g <= target.max(scale) {
            return Ok((exact, g.max(0.0)));
        }
        Err(Error::Oracle { message: "inner maximization did not reach its accuracy".into(), residual: g })
    }
}

fn softmax(t: &Vector) -> Vector {
    let m = t.max();
    let e = t.map(|v| (v - m).exp());
    let s = e.sum();
    e / s
}

impl Model for SaddleModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, x: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, x)?;
        check_delta(delta_request)?;
        let (y, _) = self.inner_solve(x)?;
        let (delta, l) = self.declared();
        Ok(ModelEvaluation {
            center: x.clone(),
            f_delta: self.inner_value(x, &y),
            psi: Psi::Linear { gradient: &self.b - &self.a * &y },
            delta,
            l_hint: l,
        })
    }
}
