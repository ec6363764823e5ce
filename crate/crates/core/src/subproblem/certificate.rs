use super::set::FeasibleSet;
use crate::error::{reject, Result};
use crate::Vector;

/// Which solver produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverTag {
    ClosedForm,
    Entropy,
    SimplexProjection,
    Bisection,
    Iterative,
    Dual,
    LinearMinimization,
    Perturbed,
}

impl SolverTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverTag::ClosedForm => "closed_form",
            SolverTag::Entropy => "entropy",
            SolverTag::SimplexProjection => "simplex_projection",
            SolverTag::Bisection => "bisection",
            SolverTag::Iterative => "iterative",
            SolverTag::Dual => "dual",
            SolverTag::LinearMinimization => "linear_minimization",
            SolverTag::Perturbed => "perturbed",
        }
    }
}

/// An inexact minimizer `x~` of a subproblem `phi` over `Q` with a witness
/// `h` such that `<h, x - x~> >= -certified_delta_tilde` for all `x` in `Q`.
///
/// `h` is a subgradient of `phi` at `x~` up to `subgradient_slack`: it
/// satisfies `phi(x) >= phi(x~) + <h, x - x~> - subgradient_slack`. Only
/// dual solvers report a nonzero slack, and it is already included in
/// `certified_delta_tilde`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubproblemCertificate {
    pub solution: Vector,
    pub witness: Vector,
    pub certified_delta_tilde: f64,
    pub subgradient_slack: f64,
    pub method: SolverTag,
}

impl SubproblemCertificate {
    /// Builds a certificate whose accuracy is computed by [`certify`].
    pub fn certified(solution: Vector, witness: Vector, set: &FeasibleSet, method: SolverTag) -> Result<Self> {
        let delta = certify(&solution, &witness, set)?;
        Ok(Self { solution, witness, certified_delta_tilde: delta, subgradient_slack: 0.0, method })
    }
}

/// `max(0, -min_{x in Q} <h, x - x~>)`, computed from the support function of
/// `Q` and padded upward by a bound on the rounding error of the evaluation,
/// so the returned value is never smaller than the exact one.
pub fn certify(x: &Vector, h: &Vector, set: &FeasibleSet) -> Result<f64> {
    if x.len() != set.dim() || h.len() != set.dim() {
        return reject("certify: dimension mismatch");
    }
    if h.iter().chain(x.iter()).any(|v| !v.is_finite()) {
        return reject("certify: non-finite input");
    }
    let (min_value, argmin) = set.support_min(h)?;
    let gap = h.dot(x) - min_value;
    let n = x.len() as f64;
    let magnitude: f64 = h
        .iter()
        .zip(x.iter().zip(argmin.iter()))
        .map(|(hi, (xi, mi))| hi.abs() * (xi.abs() + mi.abs()))
        .sum();
    let pad = 2.0 * (n + 2.0) * f64::EPSILON * magnitude;
    Ok((gap + pad).max(0.0))
}
