use crate::error::{reject, Error, Result};
use crate::oracle::{check_delta, check_point, Model, ModelEvaluation, Psi};
use crate::subproblem::{solve_separable_bisection, ScalarConvex, ScaledSquare};
use crate::subproblem::FeasibleSet;
use crate::Vector;

/// `lambda |t|`.
struct ScaledAbs(f64);

impl ScalarConvex for ScaledAbs {
    fn value(&self, t: f64) -> f64 {
        self.0 * t.abs()
    }

    fn subdifferential(&self, t: f64) -> (f64, f64) {
        if t > 0.0 {
            (self.0, self.0)
        } else if t < 0.0 {
            (-self.0, -self.0)
        } else {
            (-self.0, self.0)
        }
    }

    fn kinks(&self) -> Vec<f64> {
        vec![0.0]
    }
}

/// Model of the Moreau envelope `f(x) = min_y { phi(y) + L |y - x|^2 / 2 }`
/// of `phi = lambda |.|_1`. With `Lambda(x, y) = phi(y) + L |y - x|^2 / 2`
/// and an inner point `y~` satisfying
/// `max_y { Lambda(x, y~) - Lambda(x, y) + L |y - y~|^2 / 2 } <= delta`,
/// `F_d(x) = Lambda(x, y~) - delta` and `psi(z, x) = <L (x - y~), z - x>`
/// form a `(delta, L)`-model.
#[derive(Debug, Clone)]
pub struct MoreauModel {
    lambda: f64,
    l: f64,
    delta: f64,
    domain: FeasibleSet,
}

impl MoreauModel {
    pub fn new(dim: usize, lambda: f64, l: f64, delta: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return reject(format!("Moreau model: lambda = {lambda} must be nonnegative"));
        }
        if !(l.is_finite() && l > 0.0) {
            return reject(format!("Moreau model: L = {l} must be positive"));
        }
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::Configuration(format!("Moreau model: inner accuracy {delta} must be positive")));
        }
        Ok(Self { lambda, l, delta, domain: FeasibleSet::unconstrained(dim) })
    }

    pub fn on(mut self, domain: FeasibleSet) -> Result<Self> {
        if domain.dim() != self.domain.dim() {
            return reject("Moreau model: domain dimension mismatch");
        }
        self.domain = domain;
        Ok(self)
    }

    /// `(delta, L)`.
    pub fn declared(&self) -> (f64, f64) {
        (self.delta, self.l)
    }

    /// `Lambda(x, y)`.
    pub fn lambda_value(&self, x: &Vector, y: &Vector) -> f64 {
        self.lambda * y.lp_norm(1) + 0.5 * self.l * (y - x).norm_squared()
    }

    /// The exact minimizer `y(x)`: soft thresholding at `lambda / L`.
    pub fn prox_point(&self, x: &Vector) -> Vector {
        let t = self.lambda / self.l;
        x.map(|v| if v > t { v - t } else if v < -t { v + t } else { 0.0 })
    }

    /// `f(x)` in closed form.
    pub fn value(&self, x: &Vector) -> f64 {
        self.lambda_value(x, &self.prox_point(x))
    }

    /// The inner gap of `y`: `sum lambda |y_i| + L y_i (y_i - x_i)` when
    /// `|x_i - y_i| <= lambda / L` for every `i`, infinite otherwise.
    pub fn inner_gap(&self, x: &Vector, y: &Vector) -> f64 {
        let t = self.lambda / self.l;
        let mut gap = 0.0;
        for (xi, yi) in x.iter().zip(y.iter()) {
            if (xi - yi).abs() > t {
                return f64::INFINITY;
            }
            gap += self.lambda * yi.abs() + self.l * yi * (yi - xi);
        }
        gap
    }

    /// Coordinate bisection on `L (y - x)^2 / 2 + lambda |y|` with a
    /// shrinking tolerance until the inner gap is at most `delta`.
    pub fn inner_solve(&self, x: &Vector) -> Result<(Vector, f64)> {
        let n = x.len();
        let t = self.lambda / self.l;
        let squares: Vec<ScaledSquare> = x.iter().map(|&c| ScaledSquare { weight: 1.0, center: c }).collect();
        let abs = ScaledAbs(self.lambda);
        let v: Vec<&dyn ScalarConvex> = squares.iter().map(|s| s as &dyn ScalarConvex).collect();
        let psi: Vec<&dyn ScalarConvex> = (0..n).map(|_| &abs as &dyn ScalarConvex).collect();
        let bounds: Vec<(f64, f64)> = x.iter().map(|&c| (c - t - 1.0, c + t + 1.0)).collect();
        let mut eps = self.delta.sqrt().min(1.0);
        let mut last = f64::INFINITY;
        for _ in 0..60 {
            let cert = solve_separable_bisection(1.0 / self.l, &psi, &v, &bounds, eps)?;
            let y = Vector::from_iterator(n, cert.solution.iter().zip(x.iter()).map(|(yi, xi)| yi.clamp(xi - t, xi + t)));
            let gap = self.inner_gap(x, &y);
            if gap <= self.delta {
                return Ok((y, gap.max(0.0)));
            }
            last = gap;
            eps *= 0.1;
        }
        Err(Error::Oracle { message: "Moreau inner solve did not reach its accuracy".into(), residual: last })
    }
}

impl Model for MoreauModel {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    fn evaluate(&self, x: &Vector, delta_request: f64) -> Result<ModelEvaluation> {
        check_point(&self.domain, x)?;
        check_delta(delta_request)?;
        let (y, _) = self.inner_solve(x)?;
        Ok(ModelEvaluation {
            center: x.clone(),
            f_delta: self.lambda_value(x, &y) - self.delta,
            psi: Psi::Linear { gradient: (x - &y) * self.l },
            delta: self.delta,
            l_hint: self.l,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    #[test]
    fn abs_envelope_at_two() {
        let m = MoreauModel::new(1, 1.0, 1.0, 1e-10).unwrap();
        let x = dvector![2.0];
        assert_eq!(m.prox_point(&x), dvector![1.0]);
        assert_eq!(m.value(&x), 1.5);
        let (y, gap) = m.inner_solve(&x).unwrap();
        assert!((y[0] - 1.0).abs() < 1e-9);
        assert!(gap <= 1e-10);
        let e = m.evaluate(&x, 0.0).unwrap();
        assert!((e.psi.as_linear().unwrap()[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn minimizer_of_phi_is_fixed() {
        let m = MoreauModel::new(2, 0.5, 2.0, 1e-8).unwrap();
        let x = dvector![0.0, 0.0];
        let e = m.evaluate(&x, 0.0).unwrap();
        assert_eq!(e.psi.as_linear().unwrap().norm(), 0.0);
    }

    #[test]
    fn gap_requires_dual_feasibility() {
        let m = MoreauModel::new(1, 1.0, 1.0, 1e-3).unwrap();
        assert_eq!(m.inner_gap(&dvector![2.0], &dvector![0.5]), f64::INFINITY);
        assert_eq!(m.inner_gap(&dvector![2.0], &dvector![1.0]), 0.0);
    }
}
