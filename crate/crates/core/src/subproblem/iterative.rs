//! Generic inner solver: accelerated projected gradient with restarts for
//! Euclidean-type prox-functions, mirror steps for the entropy prox.

use super::certificate::{certify, SolverTag, SubproblemCertificate};
use super::set::FeasibleSet;
use super::Subproblem;
use crate::error::{Error, Result};
use crate::geometry::ProxSetup;
use crate::tolerances;
use crate::Vector;

/// Momentum is reset at least this often.
const RESTART_PERIOD: usize = 50;

/// Runs the iterative solver until the certificate reaches `target` and
/// fails with the best achieved accuracy when `max_iters` runs out.
pub fn solve_inner_iterative(problem: &Subproblem, target: f64, max_iters: usize) -> Result<SubproblemCertificate> {
    problem.check()?;
    let best = best_effort(problem, target, max_iters)?;
    if best.certified_delta_tilde > target {
        return Err(Error::InexactNotCertified { achieved: best.certified_delta_tilde, target });
    }
    Ok(best)
}

/// The iterative solver returning its best certificate whatever the budget.
pub(crate) fn best_effort(problem: &Subproblem, target: f64, max_iters: usize) -> Result<SubproblemCertificate> {
    let work = problem.working_set()?;
    let target = target.max(0.0);
    match problem.prox {
        ProxSetup::Entropy => mirror(problem, &work, target, max_iters),
        _ => accelerated(problem, &work, target, max_iters),
    }
}

/// Step acceptance: the curvature test `<g(c) - g(y), c - y> <= bound`
/// stays reliable when function differences drown in rounding; the
/// descent test `f(c) <= linear + quad` is used only while it is resolvable.
fn sufficient(linear: f64, quad: f64, fc: f64, curvature: f64, bound: f64) -> bool {
    if curvature <= bound {
        return true;
    }
    let slack = 4.0 * f64::EPSILON * (linear.abs() + fc.abs() + 1.0);
    quad > 100.0 * slack && fc <= linear + quad
}

struct Tracker<'a> {
    problem: &'a Subproblem<'a>,
    work: &'a FeasibleSet,
    best: Option<SubproblemCertificate>,
}

impl Tracker<'_> {
    /// Certifies `x` against the working set and keeps the best.
    fn offer(&mut self, x: &Vector) -> Result<f64> {
        let h = self.problem.witness(x);
        let delta = certify(x, &h, self.work)?;
        let better = self.best.as_ref().is_none_or(|b| delta < b.certified_delta_tilde);
        if better {
            self.best = Some(SubproblemCertificate {
                solution: x.clone(),
                witness: h,
                certified_delta_tilde: delta,
                subgradient_slack: 0.0,
                method: SolverTag::Iterative,
            });
        }
        Ok(self.best.as_ref().map_or(f64::INFINITY, |b| b.certified_delta_tilde))
    }

    fn finish(self) -> SubproblemCertificate {
        self.best.expect("at least one point is always certified")
    }
}

fn accelerated(problem: &Subproblem, work: &FeasibleSet, target: f64, max_iters: usize) -> Result<SubproblemCertificate> {
    let mut tracker = Tracker { problem, work, best: None };
    let mut x = work.project(problem.center);
    if tracker.offer(&x)? <= target {
        return Ok(tracker.finish());
    }
    let mut y = x.clone();
    let mut theta = 1.0f64;
    let mut step = 1.0f64;
    let mut since_restart = 0usize;
    for _ in 0..max_iters {
        let gy = problem.gradient(&y);
        let fy = problem.value(&y);
        let mut accepted = None;
        while step > 1e-300 {
            let candidate = work.project(&(&y - &gy * step));
            let d = &candidate - &y;
            let fc = problem.value(&candidate);
            let curvature = (problem.gradient(&candidate) - &gy).dot(&d);
            let quad = d.norm_squared() / (2.0 * step);
            if sufficient(fy + gy.dot(&d), quad, fc, curvature, 2.0 * quad) {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            break;
        };
        if tracker.offer(&next)? <= target {
            break;
        }
        since_restart += 1;
        if (&y - &next).dot(&(&next - &x)) > 0.0 || since_restart >= RESTART_PERIOD {
            theta = 1.0;
            since_restart = 0;
            y = next.clone();
            x = next;
            continue;
        }
        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        y = work.project(&(&next + (&next - &x) * ((theta - 1.0) / theta_next)));
        theta = theta_next;
        x = next;
        step *= 1.25;
    }
    Ok(tracker.finish())
}

fn mirror(problem: &Subproblem, work: &FeasibleSet, target: f64, max_iters: usize) -> Result<SubproblemCertificate> {
    let FeasibleSet::Simplex { scale, .. } = work else {
        return Err(Error::Unsupported("entropy prox needs a simplex feasible set".into()));
    };
    let interior = |v: &Vector| {
        let c = v.map(|t| t.max(tolerances::ENTROPY_FLOOR));
        let s = c.sum();
        c * (scale / s)
    };
    let mut tracker = Tracker { problem, work, best: None };
    let mut x = interior(problem.center);
    if tracker.offer(&x)? <= target {
        return Ok(tracker.finish());
    }
    let prox = ProxSetup::Entropy;
    let mut step = 1.0f64;
    for _ in 0..max_iters {
        let g = problem.gradient(&x);
        let fx = problem.value(&x);
        let log_x = x.map(|t| t.max(tolerances::ENTROPY_FLOOR).ln());
        let mut accepted = None;
        while step > 1e-300 {
            let a = &log_x - &g * step;
            let m = a.max();
            let e = a.map(|v| (v - m).exp());
            let candidate = interior(&(&e * (scale / e.sum())));
            let fc = problem.value(&candidate);
            let d = &candidate - &x;
            let curvature = (problem.gradient(&candidate) - &g).dot(&d);
            let quad = prox.divergence(&candidate, &x) / step;
            let symmetric = (prox.divergence(&candidate, &x) + prox.divergence(&x, &candidate)) / step;
            if sufficient(fx + g.dot(&d), quad, fc, curvature, symmetric) {
                accepted = Some(candidate);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            break;
        };
        x = next;
        if tracker.offer(&x)? <= target {
            break;
        }
        step = (step * 1.5).min(1.0);
    }
    Ok(tracker.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{FnFunction, Quadratic};
    use crate::oracle::Psi;
    use nalgebra::{dmatrix, dvector};
    use std::sync::Arc;

    #[test]
    fn quadratic_phi_reaches_closed_form_minimizer() {
        // phi(x) = |x - z|^2 / 2 + alpha (x^T A x / 2 - b^T x), minimizer
        // solves (I + alpha A) x = z + alpha b.
        let q = Quadratic::new(dmatrix![3.0, 1.0; 1.0, 2.0], dvector![1.0, -1.0]).unwrap();
        let psi = Psi::Difference { f: Arc::new(q.clone()), f_at_center: 0.0 };
        let set = FeasibleSet::unconstrained(2);
        let z = dvector![0.4, 0.1];
        let y = z.clone();
        let alpha = 0.7;
        let p = Subproblem { prox: &ProxSetup::Euclidean, set: &set, center: &z, alpha, psi: &psi, psi_center: &y };
        let c = solve_inner_iterative(&p, 1e-12, 5000).unwrap();
        let m = nalgebra::DMatrix::identity(2, 2) + &q.a * alpha;
        let exact = m.lu().solve(&(&z + &q.b * alpha)).unwrap();
        assert!((&c.solution - &exact).norm() < 1e-8);
        assert!(c.certified_delta_tilde <= 1e-12);
        assert!(p.value(&c.solution) - p.value(&exact) <= c.certified_delta_tilde + 1e-9);
    }

    #[test]
    fn huge_target_returns_start() {
        let psi = Psi::Linear { gradient: dvector![1.0, 1.0] };
        let set = FeasibleSet::cube(2, 1.0).unwrap();
        let z = dvector![0.0, 0.0];
        let p = Subproblem { prox: &ProxSetup::Euclidean, set: &set, center: &z, alpha: 1.0, psi: &psi, psi_center: &z };
        let c = solve_inner_iterative(&p, 100.0, 10).unwrap();
        assert_eq!(c.solution, z);
    }

    #[test]
    fn prox_of_absolute_value() {
        // L |x - x_k|^2 / 2 + |x| with L = 2, x_k = 1.3: soft threshold 0.8.
        let abs = FnFunction::new(|x| x[0].abs(), |x| dvector![crate::functions::sign(x[0])]);
        let psi = Psi::Difference { f: Arc::new(abs), f_at_center: 1.3 };
        let set = FeasibleSet::unconstrained(1);
        let z = dvector![1.3];
        let p = Subproblem { prox: &ProxSetup::Euclidean, set: &set, center: &z, alpha: 0.5, psi: &psi, psi_center: &z };
        let c = best_effort(&p, 1e-10, 2000).unwrap();
        let phi = |t: f64| (t - 1.3) * (t - 1.3) + t.abs();
        let grid = (0..=3_000_000).map(|k| -1.0 + k as f64 * 1e-6).min_by(|a, b| phi(*a).total_cmp(&phi(*b))).unwrap();
        assert!((c.solution[0] - grid).abs() < 1e-6);
        assert!((c.solution[0] - 0.8).abs() < 1e-6);
    }

    #[test]
    fn exhausted_budget_reports_best() {
        let q = Quadratic::new(dmatrix![100.0, 0.0; 0.0, 1.0], dvector![1.0, 1.0]).unwrap();
        let psi = Psi::Difference { f: Arc::new(q), f_at_center: 0.0 };
        let set = FeasibleSet::cube(2, 5.0).unwrap();
        let z = dvector![3.0, -3.0];
        let p = Subproblem { prox: &ProxSetup::Euclidean, set: &set, center: &z, alpha: 1.0, psi: &psi, psi_center: &z };
        match solve_inner_iterative(&p, 0.0, 1) {
            Err(Error::InexactNotCertified { achieved, target }) => {
                assert!(achieved > 0.0);
                assert_eq!(target, 0.0);
            }
            other => panic!("expected budget failure, got {other:?}"),
        }
    }
}
