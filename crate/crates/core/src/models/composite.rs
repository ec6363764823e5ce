use std::sync::Arc;

use crate::error::{reject, Result};
use crate::functions::ConvexFunction;
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// `F = f + h` with `L`-smooth `f`; `psi(x, y) = <grad f(y), x - y> + h(x) - h(y)`.
#[derive(Debug, Clone)]
pub struct CompositeModel {
    f: Arc<dyn ConvexFunction>,
    h: Arc<dyn ConvexFunction>,
    l: f64,
    domain: FeasibleSet,
}

impl CompositeModel {
    pub fn new(f: Arc<dyn ConvexFunction>, h: Arc<dyn ConvexFunction>, dim: usize, l: f64) -> Result<Self> {
        if !(l.is_finite() && l >= 0.0) {
            return reject(format!("composite model: L = {l} must be nonnegative"));
        }
        Ok(Self { f, h, l, domain: FeasibleSet::unconstrained(dim) })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("composite model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// `f(x) + h(x)`.
    pub fn value(&self, x: &Vector) -> f64 {
        self.f.value(x) + self.h.value(x)
    }
}

impl Model for CompositeModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, y)?;
        check_delta(delta_request)?;
        let h_at_center = self.h.value(y);
        Ok(ModelEvaluation {
            center: y.clone(),
            f_delta: self.f.value(y) + h_at_center,
            psi: Psi::Composite { gradient: self.f.subgradient(y), h: self.h.clone(), h_at_center },
            delta: 0.0,
            l_hint: self.l,
        })
    }
}
