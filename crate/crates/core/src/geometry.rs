//! Norms, prox-functions and Bregman divergences.
//!
//! A prox-function `d` is continuously differentiable on the interior of the
//! feasible set and 1-strongly convex with respect to a chosen norm. Its
//! Bregman divergence `V(x, y) = d(x) - d(y) - <grad d(y), x - y>` is the
//! distance used by every subproblem, and satisfies `V(x, y) >= |x - y|^2 / 2`.

use std::fmt;
use std::sync::Arc;

use crate::error::{reject, Error, Result};
use crate::tolerances;
use crate::Vector;

/// A norm on R^n together with its exact dual.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// The l2 norm.
    Euclidean,
    /// The lp norm for `p` in `[1, inf]`; `f64::INFINITY` selects the max norm.
    P(f64),
    /// `sqrt(sum w_i x_i^2)` with strictly positive weights.
    WeightedEuclidean(Vector),
}

impl NormSpec {
    /// Validated lp norm.
    pub fn p(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Configuration(format!("norm exponent {p} outside [1, inf]")));
        }
        Ok(if p == 2.0 { NormSpec::Euclidean } else { NormSpec::P(p) })
    }

    /// Validated weighted Euclidean norm.
    pub fn weighted(weights: Vector) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Configuration("norm weights must be finite and positive".into()));
        }
        Ok(NormSpec::WeightedEuclidean(weights))
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match self {
            NormSpec::Euclidean => Ok(()),
            NormSpec::P(p) if p.is_nan() || *p < 1.0 => {
                Err(Error::Configuration(format!("norm exponent {p} outside [1, inf]")))
            }
            NormSpec::P(_) => Ok(()),
            NormSpec::WeightedEuclidean(w) => {
                if w.len() != dim {
                    return reject(format!("weight vector has length {}, expected {dim}", w.len()));
                }
                if w.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                    return Err(Error::Configuration("norm weights must be finite and positive".into()));
                }
                Ok(())
            }
        }
    }

    /// Value of the norm. Panics on a weight/dimension mismatch.
    pub fn norm(&self, x: &Vector) -> f64 {
        match self {
            NormSpec::Euclidean => x.norm(),
            NormSpec::P(p) => lp_norm(x.as_slice(), *p),
            NormSpec::WeightedEuclidean(w) => {
                assert_eq!(w.len(), x.len(), "weighted norm dimension mismatch");
                x.iter().zip(w.iter()).map(|(xi, wi)| wi * xi * xi).sum::<f64>().sqrt()
            }
        }
    }

    /// The dual norm `max_{|v| <= 1} <lambda, v>`.
    pub fn dual_norm(&self, lambda: &Vector) -> Result<f64> {
        self.validate(lambda.len())?;
        if lambda.iter().any(|v| !v.is_finite()) {
            return reject("dual norm of a non-finite vector");
        }
        Ok(self.dual().norm(lambda))
    }

    /// The dual norm as a norm in its own right.
    pub fn dual(&self) -> NormSpec {
        match self {
            NormSpec::Euclidean => NormSpec::Euclidean,
            NormSpec::P(p) => NormSpec::P(conjugate_exponent(*p)),
            NormSpec::WeightedEuclidean(w) => NormSpec::WeightedEuclidean(w.map(|wi| 1.0 / wi)),
        }
    }
}

/// `q` with `1/p + 1/q = 1`.
pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn lp_norm(x: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if p.is_infinite() || scale == 0.0 {
        return scale;
    }
    scale * x.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// A user-supplied prox-function. Implementations must be 1-strongly convex
/// with respect to [`ProxFunction::norm`].
pub trait ProxFunction: Send + Sync + fmt::Debug {
    fn norm(&self) -> &NormSpec;
    fn value(&self, x: &Vector) -> f64;
    fn gradient(&self, x: &Vector) -> Vector;
    /// Short identifier of the domain the function lives on.
    fn domain_tag(&self) -> &str {
        "custom"
    }
}

/// A prox-function `d` with its norm and induced Bregman divergence.
#[derive(Debug, Clone)]
pub enum ProxSetup {
    /// `d(x) = |x|_2^2 / 2`, so `V(x, y) = |x - y|_2^2 / 2`.
    Euclidean,
    /// `d(x) = sum x_i ln x_i` on the simplex; 1-strongly convex in l1.
    Entropy,
    /// `d(x) = sum w_i x_i^2 / 2` with all `w_i >= 1`, measured in the plain
    /// Euclidean norm.
    WeightedEuclidean { weights: Vector },
    Custom(Arc<dyn ProxFunction>),
}

static EUCLIDEAN: NormSpec = NormSpec::Euclidean;
static L1: NormSpec = NormSpec::P(1.0);

impl ProxSetup {
    pub fn weighted(weights: Vector) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w >= 1.0)) {
            return Err(Error::Configuration(
                "weighted Euclidean prox requires all weights >= 1".into(),
            ));
        }
        Ok(ProxSetup::WeightedEuclidean { weights })
    }

    pub fn norm(&self) -> &NormSpec {
        match self {
            ProxSetup::Euclidean | ProxSetup::WeightedEuclidean { .. } => &EUCLIDEAN,
            ProxSetup::Entropy => &L1,
            ProxSetup::Custom(f) => f.norm(),
        }
    }

    pub fn domain_tag(&self) -> &str {
        match self {
            ProxSetup::Euclidean | ProxSetup::WeightedEuclidean { .. } => "rn",
            ProxSetup::Entropy => "simplex",
            ProxSetup::Custom(f) => f.domain_tag(),
        }
    }

    /// `d(x)`.
    pub fn value(&self, x: &Vector) -> f64 {
        match self {
            ProxSetup::Euclidean => 0.5 * x.norm_squared(),
            ProxSetup::Entropy => x.iter().map(|&v| xlogx(v)).sum(),
            ProxSetup::WeightedEuclidean { weights } => {
                0.5 * x.iter().zip(weights.iter()).map(|(v, w)| w * v * v).sum::<f64>()
            }
            ProxSetup::Custom(f) => f.value(x),
        }
    }

    /// `grad d(x)`. Entropy coordinates are clipped to the interior floor.
    pub fn gradient(&self, x: &Vector) -> Vector {
        match self {
            ProxSetup::Euclidean => x.clone(),
            ProxSetup::Entropy => x.map(|v| v.max(tolerances::ENTROPY_FLOOR).ln() + 1.0),
            ProxSetup::WeightedEuclidean { weights } => x.component_mul(weights),
            ProxSetup::Custom(f) => f.gradient(x),
        }
    }

    /// `grad_x V(x, z) = grad d(x) - grad d(z)`.
    pub fn divergence_gradient(&self, x: &Vector, z: &Vector) -> Vector {
        match self {
            ProxSetup::Euclidean => x - z,
            ProxSetup::WeightedEuclidean { weights } => (x - z).component_mul(weights),
            _ => self.gradient(x) - self.gradient(z),
        }
    }

    fn check_domain(&self, x: &Vector, y: &Vector) -> Result<()> {
        if x.len() != y.len() {
            return reject(format!("dimension mismatch: {} vs {}", x.len(), y.len()));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return reject("non-finite coordinate");
        }
        match self {
            ProxSetup::Entropy => {
                if x.iter().any(|&v| v < 0.0) {
                    return reject("entropy prox: negative coordinate in x");
                }
                if y.iter().any(|&v| v <= 0.0) {
                    return reject("entropy prox: y must lie in the simplex interior");
                }
                Ok(())
            }
            ProxSetup::WeightedEuclidean { weights } if weights.len() != x.len() => {
                reject("weighted prox: weight/dimension mismatch")
            }
            _ => Ok(()),
        }
    }

    /// Bregman divergence `V(x, y)` in its closed form for the shipped kinds.
    pub fn bregman_divergence(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_domain(x, y)?;
        Ok(self.divergence(x, y))
    }

    /// Unchecked `V(x, y)`; callers guarantee the domain.
    pub(crate) fn divergence(&self, x: &Vector, y: &Vector) -> f64 {
        match self {
            ProxSetup::Euclidean => 0.5 * (x - y).norm_squared(),
            ProxSetup::Entropy => x
                .iter()
                .zip(y.iter())
                .map(|(&xi, &yi)| {
                    let yi = yi.max(tolerances::ENTROPY_FLOOR);
                    if xi == 0.0 {
                        yi
                    } else {
                        xi * (xi / yi).ln() - xi + yi
                    }
                })
                .sum::<f64>()
                .max(0.0),
            ProxSetup::WeightedEuclidean { weights } => {
                0.5 * x
                    .iter()
                    .zip(y.iter())
                    .zip(weights.iter())
                    .map(|((a, b), w)| w * (a - b) * (a - b))
                    .sum::<f64>()
            }
            ProxSetup::Custom(_) => self.divergence_from_definition(x, y),
        }
    }

    /// `d(x) - d(y) - <grad d(y), x - y>` evaluated literally.
    pub fn divergence_from_definition(&self, x: &Vector, y: &Vector) -> f64 {
        self.value(x) - self.value(y) - self.gradient(y).dot(&(x - y))
    }
}

fn xlogx(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v * v.max(tolerances::ENTROPY_FLOOR).ln()
    }
}

/// Checks `d(x) >= d(y) + <grad d(y), x - y> + |x - y|^2 / 2` on every
/// sampled pair, within [`tolerances::STRONG_CONVEXITY`].
pub fn strong_convexity_probe(setup: &ProxSetup, samples: &[(Vector, Vector)]) -> Result<bool> {
    if samples.is_empty() {
        return reject("strong convexity probe needs at least one sample pair");
    }
    for (x, y) in samples {
        setup.check_domain(x, y)?;
        let gap = setup.divergence_from_definition(x, y);
        let half_sq = 0.5 * setup.norm().norm(&(x - y)).powi(2);
        if gap < half_sq - tolerances::STRONG_CONVEXITY {
            return Ok(false);
        }
    }
    Ok(true)
}
