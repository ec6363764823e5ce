use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::{reject, Result};
use crate::Vector;

/// A closed convex nonempty feasible set `Q`.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    Unconstrained { dim: usize },
    Box { lower: Vector, upper: Vector },
    Ball { center: Vector, radius: f64 },
    /// `{x >= 0 : sum x_i = scale}`.
    Simplex { dim: usize, scale: f64 },
}

impl FeasibleSet {
    pub fn unconstrained(dim: usize) -> Self {
        FeasibleSet::Unconstrained { dim }
    }

    pub fn boxed(lower: Vector, upper: Vector) -> Result<Self> {
        if lower.len() != upper.len() {
            return reject("box bounds have different lengths");
        }
        if lower.iter().zip(upper.iter()).any(|(l, u)| !(l <= u) || !l.is_finite() || !u.is_finite()) {
            return reject("box bounds must be finite with lower <= upper");
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// The cube `[-half_width, half_width]^dim`.
    pub fn cube(dim: usize, half_width: f64) -> Result<Self> {
        Self::boxed(Vector::from_element(dim, -half_width), Vector::from_element(dim, half_width))
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return reject("ball radius must be finite and nonnegative");
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn simplex(dim: usize, scale: f64) -> Result<Self> {
        if dim == 0 || !(scale.is_finite() && scale > 0.0) {
            return reject("simplex needs positive dimension and scale");
        }
        Ok(FeasibleSet::Simplex { dim, scale })
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Unconstrained { dim } | FeasibleSet::Simplex { dim, .. } => *dim,
            FeasibleSet::Box { lower, .. } => lower.len(),
            FeasibleSet::Ball { center, .. } => center.len(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, FeasibleSet::Unconstrained { .. })
    }

    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            FeasibleSet::Unconstrained { .. } => true,
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
            FeasibleSet::Ball { center, radius } => (x - center).norm() <= radius + tol,
            FeasibleSet::Simplex { scale, .. } => {
                x.iter().all(|v| *v >= -tol) && (x.sum() - scale).abs() <= tol * (1.0 + scale)
            }
        }
    }

    /// Euclidean projection onto the set.
    pub fn project(&self, x: &Vector) -> Vector {
        match self {
            FeasibleSet::Unconstrained { .. } => x.clone(),
            FeasibleSet::Box { lower, upper } => {
                Vector::from_iterator(x.len(), (0..x.len()).map(|i| x[i].clamp(lower[i], upper[i])))
            }
            FeasibleSet::Ball { center, radius } => {
                let d = x - center;
                let n = d.norm();
                if n <= *radius {
                    x.clone()
                } else {
                    center + d * (radius / n)
                }
            }
            FeasibleSet::Simplex { scale, .. } => project_simplex(x, *scale),
        }
    }

    /// `min_{x in Q} <h, x>` and a minimizer. Ties go to the box lower
    /// corner, the lowest-index simplex vertex and the ball center.
    pub fn support_min(&self, h: &Vector) -> Result<(f64, Vector)> {
        if h.len() != self.dim() {
            return reject("support function: dimension mismatch");
        }
        match self {
            FeasibleSet::Unconstrained { dim } => {
                if h.iter().all(|v| *v == 0.0) {
                    Ok((0.0, Vector::zeros(*dim)))
                } else {
                    reject("linear minimization over an unbounded set")
                }
            }
            FeasibleSet::Box { lower, upper } => {
                let arg = Vector::from_iterator(
                    h.len(),
                    (0..h.len()).map(|i| if h[i] < 0.0 { upper[i] } else { lower[i] }),
                );
                Ok((h.dot(&arg), arg))
            }
            FeasibleSet::Ball { center, radius } => {
                let n = h.norm();
                if n == 0.0 {
                    return Ok((0.0, center.clone()));
                }
                let arg = center - h * (radius / n);
                Ok((h.dot(center) - radius * n, arg))
            }
            FeasibleSet::Simplex { dim, scale } => {
                let mut best = 0;
                for i in 1..*dim {
                    if h[i] < h[best] {
                        best = i;
                    }
                }
                let mut arg = Vector::zeros(*dim);
                arg[best] = *scale;
                Ok((scale * h[best], arg))
            }
        }
    }

    /// A canonical interior point: box midpoint, ball center, simplex
    /// barycenter, origin when unconstrained.
    pub fn center_point(&self) -> Vector {
        match self {
            FeasibleSet::Unconstrained { dim } => Vector::zeros(*dim),
            FeasibleSet::Box { lower, upper } => (lower + upper) * 0.5,
            FeasibleSet::Ball { center, .. } => center.clone(),
            FeasibleSet::Simplex { dim, scale } => Vector::from_element(*dim, scale / *dim as f64),
        }
    }

    /// Euclidean diameter; infinite when unbounded.
    pub fn diameter(&self) -> f64 {
        match self {
            FeasibleSet::Unconstrained { .. } => f64::INFINITY,
            FeasibleSet::Box { lower, upper } => (upper - lower).norm(),
            FeasibleSet::Ball { radius, .. } => 2.0 * radius,
            FeasibleSet::Simplex { dim, scale } => {
                if *dim > 1 {
                    scale * std::f64::consts::SQRT_2
                } else {
                    0.0
                }
            }
        }
    }

    /// Draws a point of the set. Unbounded sets are sampled from the cube
    /// `[-radius, radius]^n`; simplices from the uniform (Dirichlet(1))
    /// distribution, which lands in the interior almost surely.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, radius: f64) -> Vector {
        let n = self.dim();
        match self {
            FeasibleSet::Unconstrained { .. } => {
                Vector::from_iterator(n, (0..n).map(|_| rng.random_range(-radius..=radius)))
            }
            FeasibleSet::Box { lower, upper } => Vector::from_iterator(
                n,
                (0..n).map(|i| lower[i] + (upper[i] - lower[i]) * rng.random::<f64>()),
            ),
            FeasibleSet::Ball { center, radius } => {
                let dir = Vector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)));
                let norm = dir.norm();
                if norm == 0.0 {
                    return center.clone();
                }
                let r = radius * rng.random::<f64>().powf(1.0 / n as f64);
                center + dir * (r / norm)
            }
            FeasibleSet::Simplex { scale, .. } => {
                let e = Vector::from_iterator(n, (0..n).map(|_| Exp1.sample(rng)));
                let s: f64 = e.sum();
                e * (scale / s)
            }
        }
    }
}

/// Euclidean projection onto `{x >= 0 : sum x = scale}` by sorting.
pub fn project_simplex(x: &Vector, scale: f64) -> Vector {
    let mut sorted: Vec<f64> = x.iter().copied().collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, v) in sorted.iter().enumerate() {
        cumulative += v;
        let t = (cumulative - scale) / (j + 1) as f64;
        if v - t > 0.0 {
            theta = t;
        }
    }
    let mut y = x.map(|v| (v - theta).max(0.0));
    let total = y.sum();
    if total > 0.0 && total.is_finite() {
        y *= scale / total;
    }
    y
}
