use std::sync::Arc;

use crate::error::{reject, Result};
use crate::functions::{ConvexFunction, OuterFunction};
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// `F(x) = f(f_1(x), ..., f_m(x))` with a monotone `M`-Lipschitz outer `f`
/// and `L_i`-smooth inner `f_i`. The model linearizes the inner functions
/// and is exact with constant `M sum L_i`.
#[derive(Debug, Clone)]
pub struct SuperpositionModel {
    outer: Arc<dyn OuterFunction>,
    inner: Vec<(Arc<dyn ConvexFunction>, f64)>,
    domain: FeasibleSet,
}

impl SuperpositionModel {
    pub fn new(
        outer: Arc<dyn OuterFunction>,
        inner: Vec<(Arc<dyn ConvexFunction>, f64)>,
        dim: usize,
    ) -> Result<Self> {
        if inner.is_empty() {
            return reject("superposition model needs at least one inner function");
        }
        if inner.iter().any(|(_, l)| !(l.is_finite() && *l >= 0.0)) {
            return reject("superposition model: inner constants must be nonnegative");
        }
        Ok(Self { outer, inner, domain: FeasibleSet::unconstrained(dim) })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("superposition model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    /// `M sum L_i`.
    pub fn l(&self) -> f64 {
        self.outer.lipschitz_l1() * self.inner.iter().map(|(_, l)| l).sum::<f64>()
    }

    pub fn value(&self, x: &Vector) -> f64 {
        let u: Vec<f64> = self.inner.iter().map(|(f, _)| f.value(x)).collect();
        self.outer.value(&u)
    }
}

impl Model for SuperpositionModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, y)?;
        check_delta(delta_request)?;
        let values: Vec<f64> = self.inner.iter().map(|(f, _)| f.value(y)).collect();
        let gradients: Vec<Vector> = self.inner.iter().map(|(f, _)| f.subgradient(y)).collect();
        let f_at_center = self.outer.value(&values);
        Ok(ModelEvaluation {
            center: y.clone(),
            f_delta: f_at_center,
            psi: Psi::Superposition { outer: self.outer.clone(), values, gradients, f_at_center },
            delta: 0.0,
            l_hint: self.l(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{MaxOuter, Quadratic};
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn max_model_matches_direct_linearization() {
        let f1 = Quadratic::new(dmatrix![2.0, 0.0; 0.0, 1.0], dvector![1.0, 0.0]).unwrap();
        let f2 = Quadratic::new(dmatrix![1.0, 0.5; 0.5, 1.0], dvector![0.0, -1.0]).unwrap();
        let fs: Vec<Quadratic> = vec![f1, f2];
        let inner = fs.iter().map(|q| (Arc::new(q.clone()) as Arc<dyn ConvexFunction>, q.lipschitz())).collect();
        let m = SuperpositionModel::new(Arc::new(MaxOuter), inner, 2).unwrap();
        let y = dvector![0.3, -0.4];
        let e = m.evaluate(&y, 0.0).unwrap();
        for x in [dvector![1.0, 1.0], dvector![-0.5, 0.2], y.clone()] {
            let direct = fs
                .iter()
                .map(|q| q.value(&y) + q.subgradient(&y).dot(&(&x - &y)))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!((e.f_delta + e.psi_at(&x) - direct).abs() < 1e-14);
        }
    }
}
