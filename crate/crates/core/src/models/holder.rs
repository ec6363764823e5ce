use std::sync::Arc;

use crate::error::{reject, Error, Result};
use crate::functions::ConvexFunction;
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// `L(delta) = L_nu [L_nu (1 - nu) / (2 delta (1 + nu))]^((1 - nu) / (1 + nu))`.
pub fn holder_effective_l(nu: f64, l_nu: f64, delta: f64) -> Result<f64> {
    check_exponent(nu)?;
    if !(l_nu.is_finite() && l_nu >= 0.0) {
        return reject(format!("Holder constant {l_nu} must be nonnegative"));
    }
    if nu == 1.0 {
        return Ok(l_nu);
    }
    if !(delta.is_finite() && delta > 0.0) {
        return reject(format!("delta = {delta} must be positive for nu = {nu} < 1"));
    }
    let p = (1.0 - nu) / (1.0 + nu);
    Ok(l_nu * (l_nu * (1.0 - nu) / (2.0 * delta * (1.0 + nu))).powf(p))
}

fn check_exponent(nu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&nu) {
        return Err(Error::Configuration(format!("Holder exponent {nu} outside [0, 1]")));
    }
    Ok(())
}

/// `ceil(2^((3 + 5 nu) / (1 + 3 nu)) (L_nu R^(1 + nu) / eps)^(2 / (1 + 3 nu)))`,
/// at least 1.
pub fn universal_iteration_bound(nu: f64, l_nu: f64, r: f64, eps: f64) -> Result<u64> {
    check_exponent(nu)?;
    if !(l_nu > 0.0 && r > 0.0 && eps > 0.0) {
        return reject("iteration bound needs positive L_nu, R and epsilon");
    }
    let base = l_nu * r.powf(1.0 + nu) / eps;
    let v = 2f64.powf((3.0 + 5.0 * nu) / (1.0 + 3.0 * nu)) * base.powf(2.0 / (1.0 + 3.0 * nu));
    if !v.is_finite() || v >= u64::MAX as f64 {
        return Ok(u64::MAX);
    }
    let near = v.round();
    let n = if (v - near).abs() <= 1e-12 * v { near } else { v.ceil() };
    Ok((n as u64).max(1))
}

/// The smallest [`universal_iteration_bound`] over `(nu, L_nu)` pairs.
pub fn universal_iteration_bound_inf(pairs: &[(f64, f64)], r: f64, eps: f64) -> Result<u64> {
    if pairs.is_empty() {
        return reject("no Holder pairs supplied");
    }
    let mut best = u64::MAX;
    for &(nu, l_nu) in pairs {
        best = best.min(universal_iteration_bound(nu, l_nu, r, eps)?);
    }
    Ok(best)
}

/// Linear model of a function with `nu`-Holder continuous (sub)gradient.
/// A request `delta` yields a `(delta, L(delta))`-model.
#[derive(Debug, Clone)]
pub struct HolderModel {
    f: Arc<dyn ConvexFunction>,
    nu: f64,
    l_nu: f64,
    domain: FeasibleSet,
}

impl HolderModel {
    pub fn new(f: Arc<dyn ConvexFunction>, dim: usize, nu: f64, l_nu: f64) -> Result<Self> {
        check_exponent(nu)?;
        if !(l_nu.is_finite() && l_nu > 0.0) {
            return reject(format!("Holder constant {l_nu} must be positive"));
        }
        Ok(Self { f, nu, l_nu, domain: FeasibleSet::unconstrained(dim) })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("Holder model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn l_nu(&self) -> f64 {
        self.l_nu
    }

    pub fn effective_l(&self, delta: f64) -> Result<f64> {
        holder_effective_l(self.nu, self.l_nu, delta)
    }
}

impl Model for HolderModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, y)?;
        check_delta(delta_request)?;
        let l_hint = self.effective_l(delta_request)?;
        Ok(ModelEvaluation {
            center: y.clone(),
            f_delta: self.f.value(y),
            psi: Psi::Linear { gradient: self.f.subgradient(y) },
            delta: delta_request,
            l_hint,
        })
    }
}
