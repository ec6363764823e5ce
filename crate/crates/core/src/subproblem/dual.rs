//! Dual solver for superposition models whose outer function is a support
//! function `f(u) = max_{w in W} <w, u>`.
//!
//! With `l(x)` the vector of inner linearizations, the subproblem is
//! `min_x max_{w in W} V(x, z) + alpha <w, l(x)>`. For fixed `w` the inner
//! minimization is a linear subproblem solved exactly; the concave dual is
//! maximized by accelerated projected gradient ascent. The primal point
//! `x(w)` comes with the witness of its linear subproblem, which is an
//! `eps`-subgradient of the full objective with
//! `eps = alpha (f(l(x)) - <w, l(x)>)`.

use super::certificate::{SolverTag, SubproblemCertificate};
use super::Subproblem;
use crate::error::{Error, Result};
use crate::oracle::{linearizations, Psi};
use crate::tolerances;
use crate::Vector;

/// Solves a superposition subproblem through its dual. Fails when the
/// outer function has no dual description or the linear subproblems have
/// no exact solver for this prox and set.
pub fn solve_superposition_dual(problem: &Subproblem, target: f64, max_iters: usize) -> Result<SubproblemCertificate> {
    problem.check()?;
    try_solve(problem, target, max_iters)?
        .ok_or_else(|| Error::Unsupported("superposition dual needs a support-function outer and an exact linear solver".into()))
}

pub(crate) fn try_solve(problem: &Subproblem, target: f64, max_iters: usize) -> Result<Option<SubproblemCertificate>> {
    let Psi::Superposition { outer, values, gradients, .. } = problem.psi else {
        return Ok(None);
    };
    let m = values.len();
    if m == 0 {
        return Ok(None);
    }
    let y = problem.psi_center;
    let l_at_center = linearizations(values, gradients, y, problem.center);
    let Some(start) = outer.project_dual(&outer.subgradient(&l_at_center)) else {
        return Ok(None);
    };
    let target = target.max(tolerances::ITERATIVE_FLOOR);

    // x(w) and the dual value D(w) with its gradient alpha * l(x(w)).
    let primal = |w: &[f64]| -> Result<Option<(SubproblemCertificate, f64, Vec<f64>)>> {
        let mut g = Vector::zeros(problem.dim());
        for (wi, gi) in w.iter().zip(gradients) {
            if *wi != 0.0 {
                g.axpy(*wi, gi, 1.0);
            }
        }
        let psi = Psi::Linear { gradient: g };
        let linear = Subproblem { psi: &psi, ..*problem };
        let Some(cert) = linear.solve_structured()? else {
            return Ok(None);
        };
        let l = linearizations(values, gradients, y, &cert.solution);
        let inner: f64 = w.iter().zip(&l).map(|(a, b)| a * b).sum();
        let dual = problem.prox.divergence(&cert.solution, problem.center) + problem.alpha * inner;
        Ok(Some((cert, dual, l)))
    };
    let finish = |w: &[f64], cert: SubproblemCertificate, l: &[f64]| -> SubproblemCertificate {
        let inner: f64 = w.iter().zip(l).map(|(a, b)| a * b).sum();
        let slack = (problem.alpha * (outer.value(l) - inner)).max(0.0);
        SubproblemCertificate {
            certified_delta_tilde: cert.certified_delta_tilde + slack,
            subgradient_slack: slack,
            method: SolverTag::Dual,
            ..cert
        }
    };

    let Some((cert, mut d_w, l_w)) = primal(&start)? else {
        return Ok(None);
    };
    let mut best = finish(&start, cert, &l_w);
    if best.certified_delta_tilde <= target {
        return Ok(Some(best));
    }
    let project = |v: &[f64]| outer.project_dual(v).expect("dual projection available");
    let mut w = start.clone();
    let mut momentum = start;
    let mut theta = 1.0f64;
    let mut step = 1.0 / (problem.alpha * problem.alpha + 1e-300);
    for _ in 0..max_iters {
        let Some((_, d_mom, l_mom)) = primal(&momentum)? else {
            return Ok(None);
        };
        let grad: Vec<f64> = l_mom.iter().map(|v| problem.alpha * v).collect();
        let mut accepted = None;
        while step > 1e-300 {
            let trial: Vec<f64> = momentum.iter().zip(&grad).map(|(a, g)| a + step * g).collect();
            let next = project(&trial);
            let Some((cert, d_next, l_next)) = primal(&next)? else {
                return Ok(None);
            };
            let diff: Vec<f64> = next.iter().zip(&momentum).map(|(a, b)| a - b).collect();
            let lin: f64 = grad.iter().zip(&diff).map(|(g, d)| g * d).sum();
            let sq: f64 = diff.iter().map(|d| d * d).sum();
            let slack = 4.0 * f64::EPSILON * (d_mom.abs() + d_next.abs() + 1.0);
            if d_next >= d_mom + lin - sq / (2.0 * step) - slack {
                accepted = Some((next, cert, d_next, l_next));
                break;
            }
            step *= 0.5;
        }
        let Some((next, cert, d_next, l_next)) = accepted else {
            break;
        };
        let candidate = finish(&next, cert, &l_next);
        if candidate.certified_delta_tilde < best.certified_delta_tilde {
            best = candidate;
        }
        if best.certified_delta_tilde <= target {
            break;
        }
        if d_next < d_w {
            theta = 1.0;
            momentum = w.clone();
            continue;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / theta_next;
        momentum = project(&next.iter().zip(&w).map(|(a, b)| a + beta * (a - b)).collect::<Vec<_>>());
        theta = theta_next;
        w = next;
        d_w = d_next;
        step *= 1.25;
    }
    Ok(Some(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::MaxOuter;
    use crate::geometry::ProxSetup;
    use crate::subproblem::FeasibleSet;
    use nalgebra::dvector;
    use std::sync::Arc;

    #[test]
    fn max_of_two_lines_meets_at_kink() {
        // phi(x) = (x - 0)^2 / 2 + max(x - 1, -x - 1) on R: minimizer 0.
        let psi = Psi::Superposition {
            outer: Arc::new(MaxOuter),
            values: vec![-1.0, -1.0],
            gradients: vec![dvector![1.0], dvector![-1.0]],
            f_at_center: -1.0,
        };
        let set = FeasibleSet::unconstrained(1);
        let z = dvector![0.3];
        let y = dvector![0.0];
        let p = Subproblem { prox: &ProxSetup::Euclidean, set: &set, center: &z, alpha: 1.0, psi: &psi, psi_center: &y };
        let c = solve_superposition_dual(&p, 1e-12, 1000).unwrap();
        // Exact solution: kink at 0 since |0.3| < 1.
        assert!(c.solution[0].abs() < 1e-6);
        assert!(c.certified_delta_tilde <= 1e-10);
        assert_eq!(c.method, SolverTag::Dual);
    }
}
