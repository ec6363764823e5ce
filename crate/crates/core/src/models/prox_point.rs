use std::sync::Arc;

use crate::error::{reject, Result};
use crate::functions::ConvexFunction;
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// `psi(x, y) = F(x) - F(y)`: an exact model for every `L >= 0`. The
/// methods run with the fixed constant `L` and no backtracking, which
/// turns every step into a proximal-point step.
#[derive(Debug, Clone)]
pub struct ProxPointModel {
    f: Arc<dyn ConvexFunction>,
    l: f64,
    domain: FeasibleSet,
}

impl ProxPointModel {
    pub fn new(f: Arc<dyn ConvexFunction>, dim: usize, l: f64) -> Result<Self> {
        if !(l.is_finite() && l >= 0.0) {
            return reject(format!("prox-point model: L = {l} must be nonnegative"));
        }
        Ok(Self { f, l, domain: FeasibleSet::unconstrained(dim) })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("prox-point model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }
}

impl Model for ProxPointModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, y)?;
        check_delta(delta_request)?;
        let f_at_center = self.f.value(y);
        Ok(ModelEvaluation {
            center: y.clone(),
            f_delta: f_at_center,
            psi: Psi::Difference { f: self.f.clone(), f_at_center },
            delta: 0.0,
            l_hint: self.l,
        })
    }

    fn fixed_l(&self) -> Option<f64> {
        Some(self.l)
    }
}
