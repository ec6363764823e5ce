//! Exact solvers for `min_Q V(x, z) + alpha <g, x>` (plus an optional
//! `alpha * lambda * |x|_1`) when the prox and set admit a formula.

use super::certificate::{SolverTag, SubproblemCertificate};
use super::set::{project_simplex, FeasibleSet};
use crate::error::{reject, Error, Result};
use crate::geometry::ProxSetup;
use crate::tolerances;
use crate::Vector;

fn soft_threshold(v: f64, tau: f64) -> f64 {
    if v > tau {
        v - tau
    } else if v < -tau {
        v + tau
    } else {
        0.0
    }
}

fn check_inputs(alpha: f64, g: &Vector, z: &Vector, set: &FeasibleSet) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return reject(format!("step {alpha} must be finite and nonnegative"));
    }
    if g.len() != set.dim() || z.len() != set.dim() {
        return reject("subproblem: dimension mismatch");
    }
    if g.iter().chain(z.iter()).any(|v| !v.is_finite()) {
        return reject("subproblem: non-finite data");
    }
    Ok(())
}

/// Exact minimizer of `|x - z|^2 / 2 + alpha <g, x> + alpha * l1 * |x|_1`
/// over an unconstrained set, a box or (without the l1 term) a ball.
pub fn solve_euclidean_closed_form(
    alpha: f64,
    g: &Vector,
    z: &Vector,
    set: &FeasibleSet,
    l1: Option<f64>,
) -> Result<SubproblemCertificate> {
    solve_weighted_closed_form(&ProxSetup::Euclidean, alpha, g, z, set, l1)
}

/// [`solve_euclidean_closed_form`] for any Euclidean-type prox, including
/// weighted ones on boxes.
pub fn solve_weighted_closed_form(
    prox: &ProxSetup,
    alpha: f64,
    g: &Vector,
    z: &Vector,
    set: &FeasibleSet,
    l1: Option<f64>,
) -> Result<SubproblemCertificate> {
    check_inputs(alpha, g, z, set)?;
    let n = set.dim();
    let weights = match prox {
        ProxSetup::Euclidean => Vector::from_element(n, 1.0),
        ProxSetup::WeightedEuclidean { weights } if weights.len() == n => weights.clone(),
        ProxSetup::WeightedEuclidean { .. } => return reject("weighted prox: dimension mismatch"),
        _ => return Err(Error::Unsupported("closed form needs a Euclidean prox".into())),
    };
    let lambda = l1.unwrap_or(0.0);
    if !(lambda.is_finite() && lambda >= 0.0) {
        return reject("l1 weight must be finite and nonnegative");
    }
    match set {
        FeasibleSet::Unconstrained { .. } | FeasibleSet::Box { .. } => {
            let (lower, upper) = match set {
                FeasibleSet::Box { lower, upper } => (Some(lower), Some(upper)),
                _ => (None, None),
            };
            let mut x = Vector::zeros(n);
            let mut h = Vector::zeros(n);
            for i in 0..n {
                let w = weights[i];
                let free = soft_threshold(z[i] - alpha * g[i] / w, alpha * lambda / w);
                let l = lower.map_or(f64::NEG_INFINITY, |v| v[i]);
                let u = upper.map_or(f64::INFINITY, |v| v[i]);
                let t = free.clamp(l, u);
                x[i] = t;
                if t != free {
                    let base = w * (t - z[i]) + alpha * g[i];
                    let (lo, hi) = if t > 0.0 {
                        (base + alpha * lambda, base + alpha * lambda)
                    } else if t < 0.0 {
                        (base - alpha * lambda, base - alpha * lambda)
                    } else {
                        (base - alpha * lambda, base + alpha * lambda)
                    };
                    h[i] = 0.0f64.clamp(lo, hi);
                }
            }
            SubproblemCertificate::certified(x, h, set, SolverTag::ClosedForm)
        }
        FeasibleSet::Ball { center, radius } => {
            if lambda != 0.0 {
                return Err(Error::Unsupported("l1 term on a ball has no closed form".into()));
            }
            if !matches!(prox, ProxSetup::Euclidean) {
                return Err(Error::Unsupported("weighted prox on a ball has no closed form".into()));
            }
            let v = z - g * alpha;
            let d = &v - center;
            let norm = d.norm();
            if norm <= *radius {
                return SubproblemCertificate::certified(v, Vector::zeros(n), set, SolverTag::ClosedForm);
            }
            let x = center + d * (radius / norm);
            let h = &x - &v;
            SubproblemCertificate::certified(x, h, set, SolverTag::ClosedForm)
        }
        FeasibleSet::Simplex { .. } => {
            if lambda != 0.0 || !matches!(prox, ProxSetup::Euclidean) {
                return Err(Error::Unsupported("simplex closed form needs a Euclidean prox and linear term".into()));
            }
            solve_simplex_projection(alpha, g, z, set)
        }
    }
}

/// Euclidean prox on a simplex: the projection of `z - alpha g`.
pub fn solve_simplex_projection(alpha: f64, g: &Vector, z: &Vector, set: &FeasibleSet) -> Result<SubproblemCertificate> {
    check_inputs(alpha, g, z, set)?;
    let FeasibleSet::Simplex { scale, .. } = set else {
        return reject("simplex projection on a non-simplex set");
    };
    let v = z - g * alpha;
    let x = project_simplex(&v, *scale);
    let h = &x - &v;
    SubproblemCertificate::certified(x, h, set, SolverTag::SimplexProjection)
}

/// Entropy prox on a simplex: `x_i` proportional to `z_i exp(-alpha g_i)`,
/// evaluated in the log domain. `z` must lie in the simplex interior.
pub fn solve_simplex_entropy(alpha: f64, g: &Vector, z: &Vector, set: &FeasibleSet) -> Result<SubproblemCertificate> {
    check_inputs(alpha, g, z, set)?;
    if z.iter().any(|v| *v <= 0.0) {
        return reject("entropy subproblem: center on the simplex boundary");
    }
    entropy_step(alpha, g, z, set)
}

/// Entropy step with the center clipped to the interior floor.
pub(crate) fn entropy_step(alpha: f64, g: &Vector, z: &Vector, set: &FeasibleSet) -> Result<SubproblemCertificate> {
    let FeasibleSet::Simplex { scale, .. } = set else {
        return reject("entropy prox requires a simplex");
    };
    let log_z = z.map(|v| v.max(tolerances::ENTROPY_FLOOR).ln());
    let a = &log_z - g * alpha;
    let m = a.max();
    let e = a.map(|v| (v - m).exp());
    let total = e.sum();
    let x = e * (scale / total);
    let prox = ProxSetup::Entropy;
    let h = prox.divergence_gradient(&x, z) + g * alpha;
    SubproblemCertificate::certified(x, h, set, SolverTag::Entropy)
}

/// Exact minimizer of `<g, x>` over a compact set; the witness is `g`.
pub fn solve_linear_minimization(g: &Vector, set: &FeasibleSet) -> Result<SubproblemCertificate> {
    if !set.is_bounded() {
        return reject("linear minimization over an unbounded set");
    }
    if g.len() != set.dim() || g.iter().any(|v| !v.is_finite()) {
        return reject("linear minimization: bad direction");
    }
    let (_, x) = set.support_min(g)?;
    SubproblemCertificate::certified(x, g.clone(), set, SolverTag::LinearMinimization)
}
