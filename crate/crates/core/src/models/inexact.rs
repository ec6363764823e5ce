use std::sync::Arc;

use crate::error::{reject, Result};
use crate::functions::ConvexFunction;
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// Smooth `F` on a compact set of diameter `D`, with a gradient corrupted by
/// a fixed error direction of size `Delta = delta / (2D)`. Taking
/// `F_d(y) = F(y) - Delta D` makes it a `(delta, L)`-model.
#[derive(Debug, Clone)]
pub struct InexactGradientModel {
    f: Arc<dyn ConvexFunction>,
    l: f64,
    domain: FeasibleSet,
    diameter: f64,
    direction: Vector,
}

impl InexactGradientModel {
    /// `direction` is normalized; the domain must be bounded.
    pub fn new(f: Arc<dyn ConvexFunction>, l: f64, domain: FeasibleSet, direction: Vector) -> Result<Self> {
        if !domain.is_bounded() {
            return reject("inexact gradient model needs a bounded domain");
        }
        if direction.len() != domain.dim() || !(direction.norm() > 0.0) {
            return reject("inexact gradient model: bad error direction");
        }
        if !(l.is_finite() && l >= 0.0) {
            return reject(format!("inexact gradient model: L = {l} must be nonnegative"));
        }
        let diameter = domain.diameter();
        let direction = &direction / direction.norm();
        Ok(Self { f, l, domain, diameter, direction })
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }
}

impl Model for InexactGradientModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, y)?;
        check_delta(delta_request)?;
        if self.diameter == 0.0 {
            return Ok(ModelEvaluation {
                center: y.clone(),
                f_delta: self.f.value(y),
                psi: Psi::Linear { gradient: self.f.subgradient(y) },
                delta: 0.0,
                l_hint: self.l,
            });
        }
        let size = delta_request / (2.0 * self.diameter);
        let gradient = self.f.subgradient(y) + &self.direction * size;
        Ok(ModelEvaluation {
            center: y.clone(),
            f_delta: self.f.value(y) - size * self.diameter,
            psi: Psi::Linear { gradient },
            delta: delta_request,
            l_hint: self.l,
        })
    }
}
