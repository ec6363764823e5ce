use std::sync::Arc;

use crate::error::{reject, Result};
use crate::functions::{ConvexFunction, Quadratic};
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// `psi(x, y) = <grad F(y), x - y>` for an `L`-smooth `F`; exact.
#[derive(Debug, Clone)]
pub struct SmoothModel {
    f: Arc<dyn ConvexFunction>,
    l: f64,
    domain: FeasibleSet,
}

impl SmoothModel {
    pub fn new(f: Arc<dyn ConvexFunction>, dim: usize, l: f64) -> Result<Self> {
        if !(l.is_finite() && l >= 0.0) {
            return reject(format!("smooth model: L = {l} must be nonnegative"));
        }
        Ok(Self { f, l, domain: FeasibleSet::unconstrained(dim) })
    }

    /// `L` is the top eigenvalue of the quadratic's matrix.
    pub fn quadratic(q: Quadratic) -> Self {
        let dim = q.dim();
        let l = q.lipschitz();
        Self { f: Arc::new(q), l, domain: FeasibleSet::unconstrained(dim) }
    }

    /// Restricts the points the model accepts.
    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("smooth model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn function(&self) -> &Arc<dyn ConvexFunction> {
        &self.f
    }
}

impl Model for SmoothModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, y)?;
        check_delta(delta_request)?;
        Ok(ModelEvaluation {
            center: y.clone(),
            f_delta: self.f.value(y),
            psi: Psi::Linear { gradient: self.f.subgradient(y) },
            delta: 0.0,
            l_hint: self.l,
        })
    }
}
