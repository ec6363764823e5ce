use std::fmt;
use std::sync::Arc;

use crate::error::{reject, Error, Result};
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::{certify, FeasibleSet};
use crate::Vector;

/// A jointly convex `F(y, x)` with `L`-Lipschitz joint gradient.
pub trait JointObjective: Send + Sync + fmt::Debug {
    fn inner_dim(&self) -> usize;
    fn outer_dim(&self) -> usize;
    fn value(&self, y: &Vector, x: &Vector) -> f64;
    fn grad_y(&self, y: &Vector, x: &Vector) -> Vector;
    fn grad_x(&self, y: &Vector, x: &Vector) -> Vector;
    /// The exact minimizer over the inner set, when available. Required
    /// when the inner set is unbounded.
    fn inner_minimizer(&self, _x: &Vector) -> Option<Vector> {
        None
    }
}

/// Residual allowed for exact inner minimizers when `delta = 0`.
const EXACT_INNER: f64 = 1e-9;

/// Model of `f(x) = min_{y in Q_y} F(y, x)` built from a point `y~` with
/// `<grad_y F(y~, x), y - y~> >= -delta` on `Q_y`:
/// `F_d(x) = F(y~, x) - 2 delta`, `psi(z, x) = <grad_x F(y~, x), z - x>`.
/// It is a `(6 delta, 2L)`-model.
#[derive(Debug, Clone)]
pub struct MinMinModel {
    objective: Arc<dyn JointObjective>,
    inner_set: FeasibleSet,
    l: f64,
    delta: f64,
    max_inner_iters: usize,
    domain: FeasibleSet,
}

impl MinMinModel {
    pub fn new(objective: Arc<dyn JointObjective>, inner_set: FeasibleSet, l: f64, delta: f64) -> Result<Self> {
        if inner_set.dim() != objective.inner_dim() {
            return reject("min-min model: inner set dimension mismatch");
        }
        if !(l.is_finite() && l > 0.0) {
            return reject(format!("min-min model: L = {l} must be positive"));
        }
        if !(delta.is_finite() && delta >= 0.0) {
            return reject(format!("min-min model: inner accuracy {delta} must be nonnegative"));
        }
        let domain = FeasibleSet::unconstrained(objective.outer_dim());
        Ok(Self { objective, inner_set, l, delta, max_inner_iters: 100_000, domain })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("min-min model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn with_inner_iters(mut self, iters: usize) -> Self {
        self.max_inner_iters = iters;
        self
    }

    /// `(6 delta, 2L)`.
    pub fn declared(&self) -> (f64, f64) {
        (6.0 * self.delta, 2.0 * self.l)
    }

    /// A point `y~` certified to accuracy `delta` and its certificate.
    pub fn inner_solve(&self, x: &Vector) -> Result<(Vector, f64)> {
        if let Some(y) = self.objective.inner_minimizer(x) {
            let h = self.objective.grad_y(&y, x);
            let residual = if self.inner_set.is_bounded() {
                certify(&y, &h, &self.inner_set)?
            } else {
                h.norm()
            };
            if residual > self.delta.max(EXACT_INNER) {
                return Err(Error::Oracle { message: "inner minimizer is not stationary".into(), residual });
            }
            return Ok((y, residual));
        }
        if !self.inner_set.is_bounded() {
            return Err(Error::Configuration("an unbounded inner set needs an exact inner minimizer".into()));
        }
        self.accelerated(x)
    }

    /// Accelerated projected gradient with step `1/L` and function-value
    /// restarts, stopped by the certificate.
    fn accelerated(&self, x: &Vector) -> Result<(Vector, f64)> {
        let obj = &self.objective;
        let set = &self.inner_set;
        let step = 1.0 / self.l;
        let mut y = set.center_point();
        let mut residual = certify(&y, &obj.grad_y(&y, x), set)?;
        let mut best = (y.clone(), residual);
        let mut w = y.clone();
        let mut theta = 1.0f64;
        let mut fy = obj.value(&y, x);
        for _ in 0..self.max_inner_iters {
            if residual <= self.delta {
                return Ok(best);
            }
            let next = set.project(&(&w - obj.grad_y(&w, x) * step));
            let f_next = obj.value(&next, x);
            if f_next > fy {
                theta = 1.0;
                w = y.clone();
                continue;
            }
            let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
            w = set.project(&(&next + (&next - &y) * ((theta - 1.0) / theta_next)));
            theta = theta_next;
            y = next;
            fy = f_next;
            residual = certify(&y, &obj.grad_y(&y, x), set)?;
            if residual < best.1 {
                best = (y.clone(), residual);
            }
        }
        if best.1 <= self.delta {
            return Ok(best);
        }
        Err(Error::Oracle { message: "inner minimization did not reach its accuracy".into(), residual: best.1 })
    }
}

impl Model for MinMinModel {
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
            f_delta: self.objective.value(&y, x) - 2.0 * self.delta,
            psi: Psi::Linear { gradient: self.objective.grad_x(&y, x) },
            delta,
            l_hint: l,
        })
    }
}
