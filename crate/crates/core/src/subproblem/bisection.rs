//! Coordinate-wise bisection for separable subproblems
//! `sum_i V_i(x_i) + alpha * psi_i(x_i)` over a box.

use super::certificate::{SolverTag, SubproblemCertificate};
use super::set::FeasibleSet;
use crate::error::{reject, Result};
use crate::Vector;

/// A convex function of one real variable with its subdifferential.
pub trait ScalarConvex {
    fn value(&self, t: f64) -> f64;
    /// `[f'_-(t), f'_+(t)]`.
    fn subdifferential(&self, t: f64) -> (f64, f64);
    /// Points of nondifferentiability.
    fn kinks(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// `w (t - z)^2 / 2`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledSquare {
    pub weight: f64,
    pub center: f64,
}

impl ScalarConvex for ScaledSquare {
    fn value(&self, t: f64) -> f64 {
        0.5 * self.weight * (t - self.center) * (t - self.center)
    }

    fn subdifferential(&self, t: f64) -> (f64, f64) {
        let d = self.weight * (t - self.center);
        (d, d)
    }
}

/// `slope * t`.
#[derive(Debug, Clone, Copy)]
pub struct LinearScalar {
    pub slope: f64,
}

impl ScalarConvex for LinearScalar {
    fn value(&self, t: f64) -> f64 {
        self.slope * t
    }

    fn subdifferential(&self, _t: f64) -> (f64, f64) {
        (self.slope, self.slope)
    }
}

/// Pointwise sum of scalar convex functions.
pub struct ScalarSum<'a>(pub Vec<&'a dyn ScalarConvex>);

impl ScalarConvex for ScalarSum<'_> {
    fn value(&self, t: f64) -> f64 {
        self.0.iter().map(|f| f.value(t)).sum()
    }

    fn subdifferential(&self, t: f64) -> (f64, f64) {
        self.0.iter().fold((0.0, 0.0), |(lo, hi), f| {
            let (a, b) = f.subdifferential(t);
            (lo + a, hi + b)
        })
    }

    fn kinks(&self) -> Vec<f64> {
        self.0.iter().flat_map(|f| f.kinks()).collect()
    }
}

/// Minimizes `V_i(t) + alpha psi_i(t)` over `bounds[i]` for every
/// coordinate by bisection on the sign of the subdifferential, stopping
/// when the bracket is narrower than `eps` or can no longer be split.
/// Kinks where `0` lies in the subdifferential are returned exactly.
///
/// The certificate is computed over the box formed by `bounds`.
pub fn solve_separable_bisection(
    alpha: f64,
    psi: &[&dyn ScalarConvex],
    v: &[&dyn ScalarConvex],
    bounds: &[(f64, f64)],
    eps: f64,
) -> Result<SubproblemCertificate> {
    if psi.len() != v.len() || v.len() != bounds.len() {
        return reject("bisection: component counts differ");
    }
    if !(alpha.is_finite() && alpha >= 0.0) || eps.is_nan() || eps < 0.0 {
        return reject("bisection: bad step or accuracy");
    }
    let n = bounds.len();
    let mut x = Vector::zeros(n);
    let mut h = Vector::zeros(n);
    for i in 0..n {
        let (l, u) = bounds[i];
        if !(l.is_finite() && u.is_finite() && l <= u) {
            return reject(format!("bisection: coordinate {i} needs a finite interval"));
        }
        let (t, w) = solve_coordinate(alpha, psi[i], v[i], l, u, eps);
        x[i] = t;
        h[i] = w;
    }
    let lower = Vector::from_iterator(n, bounds.iter().map(|b| b.0));
    let upper = Vector::from_iterator(n, bounds.iter().map(|b| b.1));
    let set = FeasibleSet::boxed(lower, upper)?;
    SubproblemCertificate::certified(x, h, &set, SolverTag::Bisection)
}

fn solve_coordinate(alpha: f64, psi: &dyn ScalarConvex, v: &dyn ScalarConvex, l: f64, u: f64, eps: f64) -> (f64, f64) {
    let sub = |t: f64| {
        let (a, b) = v.subdifferential(t);
        let (c, d) = psi.subdifferential(t);
        (a + alpha * c, b + alpha * d)
    };
    let witness = |(lo, hi): (f64, f64)| 0.0f64.clamp(lo, hi);

    let at_l = sub(l);
    if at_l.1 >= 0.0 {
        return (l, witness(at_l));
    }
    let at_u = sub(u);
    if at_u.0 <= 0.0 {
        return (u, witness(at_u));
    }
    let mut a = l;
    let mut b = u;
    let mut kinks = psi.kinks();
    kinks.extend(v.kinks());
    for k in kinks {
        if k <= a || k >= b {
            continue;
        }
        let d = sub(k);
        if d.0 <= 0.0 && d.1 >= 0.0 {
            return (k, 0.0);
        }
        if d.1 < 0.0 {
            a = k;
        } else {
            b = k;
        }
    }
    while b - a > eps {
        let m = a + 0.5 * (b - a);
        if m <= a || m >= b {
            break;
        }
        let d = sub(m);
        if d.1 < 0.0 {
            a = m;
        } else if d.0 > 0.0 {
            b = m;
        } else {
            return (m, 0.0);
        }
    }
    let wa = witness(sub(a));
    let wb = witness(sub(b));
    if wa.abs() <= wb.abs() {
        (a, wa)
    } else {
        (b, wb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Abs;

    impl ScalarConvex for Abs {
        fn value(&self, t: f64) -> f64 {
            t.abs()
        }
        fn subdifferential(&self, t: f64) -> (f64, f64) {
            if t > 0.0 {
                (1.0, 1.0)
            } else if t < 0.0 {
                (-1.0, -1.0)
            } else {
                (-1.0, 1.0)
            }
        }
        fn kinks(&self) -> Vec<f64> {
            vec![0.0]
        }
    }

    #[test]
    fn soft_threshold_by_bisection() {
        let v = ScaledSquare { weight: 1.0, center: 2.0 };
        let c = solve_separable_bisection(1.0, &[&Abs], &[&v], &[(-10.0, 10.0)], 1e-12).unwrap();
        assert!((c.solution[0] - 1.0).abs() < 1e-11);
        // Grid search of (t - 2)^2 / 2 + |t| over [-10, 10].
        let phi = |t: f64| 0.5 * (t - 2.0) * (t - 2.0) + t.abs();
        let best = (0..=2_000_000).map(|k| -10.0 + k as f64 * 1e-5).min_by(|a, b| phi(*a).total_cmp(&phi(*b))).unwrap();
        assert!((c.solution[0] - best).abs() < 1e-5);
        assert!(c.certified_delta_tilde < 1e-9);
    }

    #[test]
    fn zero_psi_returns_center() {
        let zero = LinearScalar { slope: 0.0 };
        let vs = [ScaledSquare { weight: 1.0, center: 0.3 }, ScaledSquare { weight: 2.0, center: -4.0 }];
        let c = solve_separable_bisection(
            1.0,
            &[&zero, &zero],
            &[&vs[0], &vs[1]],
            &[(-5.0, 5.0), (-5.0, 5.0)],
            0.0,
        )
        .unwrap();
        assert!((c.solution[0] - 0.3).abs() < 1e-15);
        assert!((c.solution[1] + 4.0).abs() < 1e-15);
    }

    #[test]
    fn kink_is_hit_exactly() {
        let v = ScaledSquare { weight: 1.0, center: 0.5 };
        let c = solve_separable_bisection(1.0, &[&Abs], &[&v], &[(-3.0, 7.0)], 1e-3).unwrap();
        assert_eq!(c.solution[0], 0.0);
        assert_eq!(c.certified_delta_tilde, 0.0);
    }

    #[test]
    fn mismatched_components_rejected() {
        let v = ScaledSquare { weight: 1.0, center: 0.0 };
        assert!(solve_separable_bisection(1.0, &[], &[&v], &[(0.0, 1.0)], 0.0).is_err());
        assert!(solve_separable_bisection(1.0, &[&Abs], &[&v], &[(1.0, 0.0)], 0.0).is_err());
    }
}
