//! The (delta, L)-model interface.
//!
//! A model of `F` at `y` is a value `F_d(y)` and a function `psi(., y)`,
//! convex with `psi(y, y) = 0`, such that for all feasible `x`
//!
//! ```text
//! 0 <= F(x) - F_d(y) - psi(x, y) <= L/2 |x - y|^2 + delta.
//! ```

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{reject, Result};
use crate::functions::{ConvexFunction, OuterFunction};
use crate::geometry::NormSpec;
use crate::subproblem::FeasibleSet;
use crate::tolerances;
use crate::Vector;

/// The function `x -> psi(x, y)` of one model evaluation.
#[derive(Debug, Clone)]
pub enum Psi {
    /// `<g, x - y>`.
    Linear { gradient: Vector },
    /// `<g, x - y> + h(x) - h(y)`.
    Composite { gradient: Vector, h: Arc<dyn ConvexFunction>, h_at_center: f64 },
    /// `f(x) - f(y)`.
    Difference { f: Arc<dyn ConvexFunction>, f_at_center: f64 },
    /// `outer(f_1(y) + <g_1, x - y>, ..., f_m(y) + <g_m, x - y>) - F(y)`.
    Superposition {
        outer: Arc<dyn OuterFunction>,
        values: Vec<f64>,
        gradients: Vec<Vector>,
        f_at_center: f64,
    },
}

impl Psi {
    /// `psi(x, center)`.
    pub fn value(&self, center: &Vector, x: &Vector) -> f64 {
        match self {
            Psi::Linear { gradient } => gradient.dot(&(x - center)),
            Psi::Composite { gradient, h, h_at_center } => {
                gradient.dot(&(x - center)) + (h.value(x) - h_at_center)
            }
            Psi::Difference { f, f_at_center } => f.value(x) - f_at_center,
            Psi::Superposition { outer, values, gradients, f_at_center } => {
                let u = linearizations(values, gradients, center, x);
                outer.value(&u) - f_at_center
            }
        }
    }

    /// A subgradient of `psi(., center)` at `x`.
    pub fn subgradient(&self, center: &Vector, x: &Vector) -> Vector {
        match self {
            Psi::Linear { gradient } => gradient.clone(),
            Psi::Composite { gradient, h, .. } => gradient + h.subgradient(x),
            Psi::Difference { f, .. } => f.subgradient(x),
            Psi::Superposition { outer, values, gradients, .. } => {
                let u = linearizations(values, gradients, center, x);
                let w = outer.subgradient(&u);
                let mut g = Vector::zeros(x.len());
                for (wi, gi) in w.iter().zip(gradients) {
                    if *wi != 0.0 {
                        g.axpy(*wi, gi, 1.0);
                    }
                }
                g
            }
        }
    }

    /// The gradient of the linear part, when `psi` is linear.
    pub fn as_linear(&self) -> Option<&Vector> {
        match self {
            Psi::Linear { gradient } => Some(gradient),
            _ => None,
        }
    }
}

pub(crate) fn linearizations(values: &[f64], gradients: &[Vector], center: &Vector, x: &Vector) -> Vec<f64> {
    let d = x - center;
    values.iter().zip(gradients).map(|(v, g)| v + g.dot(&d)).collect()
}

/// One oracle call: `F_d(y)`, `psi(., y)`, the model's `delta` and a
/// suggested local constant.
#[derive(Debug, Clone)]
pub struct ModelEvaluation {
    pub center: Vector,
    pub f_delta: f64,
    pub psi: Psi,
    pub delta: f64,
    pub l_hint: f64,
}

impl ModelEvaluation {
    pub fn psi_at(&self, x: &Vector) -> f64 {
        self.psi.value(&self.center, x)
    }

    pub fn psi_subgradient(&self, x: &Vector) -> Vector {
        self.psi.subgradient(&self.center, x)
    }
}

/// A (delta, L)-model of an objective.
pub trait Model: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;

    /// Evaluates the model at `y`. Exact models ignore `delta_request`;
    /// inexact ones use it to pick their accuracy.
    fn evaluate(&self, y: &Vector, delta_request: f64) -> Result<ModelEvaluation>;

    /// A constant the methods must use instead of backtracking.
    fn fixed_l(&self) -> Option<f64> {
        None
    }
}

pub(crate) fn check_point(domain: &FeasibleSet, y: &Vector) -> Result<()> {
    if y.len() != domain.dim() {
        return reject(format!("point has dimension {}, model expects {}", y.len(), domain.dim()));
    }
    if !domain.contains(y, tolerances::MEMBERSHIP) {
        return reject("point outside the model's feasible set");
    }
    Ok(())
}

pub(crate) fn check_delta(delta_request: f64) -> Result<()> {
    if !(delta_request >= 0.0 && delta_request.is_finite()) {
        return reject(format!("delta request {delta_request} must be finite and nonnegative"));
    }
    Ok(())
}

pub type ValueFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;

/// The problem `F(x) -> min` over `Q`.
#[derive(Clone)]
pub struct ObjectiveSpec {
    /// True objective, used only for testing and reporting.
    pub value: Option<ValueFn>,
    pub set: FeasibleSet,
    pub known_optimum: Option<(Vector, f64)>,
}

impl ObjectiveSpec {
    pub fn new(set: FeasibleSet) -> Self {
        Self { value: None, set, known_optimum: None }
    }

    pub fn with_value(mut self, f: impl Fn(&Vector) -> f64 + Send + Sync + 'static) -> Self {
        self.value = Some(Arc::new(f));
        self
    }

    pub fn with_function(self, f: Arc<dyn ConvexFunction>) -> Self {
        self.with_value(move |x| f.value(x))
    }

    pub fn with_optimum(mut self, x: Vector, f: f64) -> Self {
        self.known_optimum = Some((x, f));
        self
    }

    pub fn optimal_value(&self) -> Option<f64> {
        self.known_optimum.as_ref().map(|(_, f)| *f)
    }

    pub fn optimizer(&self) -> Option<&Vector> {
        self.known_optimum.as_ref().map(|(x, _)| x)
    }

    pub fn evaluate(&self, x: &Vector) -> Option<f64> {
        self.value.as_ref().map(|f| f(x))
    }
}

impl fmt::Debug for ObjectiveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveSpec")
            .field("set", &self.set)
            .field("has_value", &self.value.is_some())
            .field("known_optimum", &self.known_optimum)
            .finish()
    }
}

/// Sampling settings for [`verify_sandwich_with`].
#[derive(Debug, Clone)]
pub struct SandwichOptions {
    pub l_true: f64,
    pub delta_request: f64,
    pub norm: NormSpec,
    pub n_samples: usize,
    pub seed: u64,
    /// Half-width of the sampling cube when the set is unbounded.
    pub radius: f64,
}

impl SandwichOptions {
    pub fn new(l_true: f64, n_samples: usize, seed: u64) -> Self {
        Self { l_true, delta_request: 0.0, norm: NormSpec::Euclidean, n_samples, seed, radius: 1.0 }
    }

    pub fn delta_request(mut self, delta: f64) -> Self {
        self.delta_request = delta;
        self
    }

    pub fn norm(mut self, norm: NormSpec) -> Self {
        self.norm = norm;
        self
    }

    pub fn radius(mut self, radius: f64) -> Self {
        self.radius = radius;
        self
    }
}

/// Worst violations of the model inequalities over the sampled pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SandwichReport {
    pub samples: usize,
    /// Largest declared delta seen.
    pub delta: f64,
    /// `max(0, -(F(x) - F_d(y) - psi(x, y)))`.
    pub max_lower_violation: f64,
    /// `max(0, F(x) - F_d(y) - psi(x, y) - L/2 |x - y|^2 - delta)`.
    pub max_upper_violation: f64,
    /// `max |psi(y, y)|`.
    pub max_psi_at_center: f64,
    /// Largest violation of `psi(x', y) >= psi(x, y) + <g, x' - x>`.
    pub max_convexity_violation: f64,
    pub passed: bool,
}

/// [`verify_sandwich_with`] with Euclidean norm, exact request and unit
/// sampling radius.
pub fn verify_sandwich(
    model: &dyn Model,
    objective: &ObjectiveSpec,
    l_true: f64,
    n_samples: usize,
    seed: u64,
) -> Result<SandwichReport> {
    verify_sandwich_with(model, objective, &SandwichOptions::new(l_true, n_samples, seed))
}

/// Samples `(x, y)` pairs from the feasible set and checks the model
/// inequalities, `psi(y, y) = 0` and the subgradient inequality of `psi`.
pub fn verify_sandwich_with(
    model: &dyn Model,
    objective: &ObjectiveSpec,
    options: &SandwichOptions,
) -> Result<SandwichReport> {
    let Some(f) = objective.value.as_ref() else {
        return reject("sandwich verification needs the true objective");
    };
    if options.n_samples == 0 {
        return reject("sandwich verification needs at least one sample");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let set = &objective.set;
    let mut report = SandwichReport {
        samples: options.n_samples,
        delta: 0.0,
        max_lower_violation: 0.0,
        max_upper_violation: 0.0,
        max_psi_at_center: 0.0,
        max_convexity_violation: 0.0,
        passed: false,
    };
    for _ in 0..options.n_samples {
        let y = set.sample(&mut rng, options.radius);
        let x = set.sample(&mut rng, options.radius);
        let eval = model.evaluate(&y, options.delta_request)?;
        report.delta = report.delta.max(eval.delta);

        let residual = f(&x) - eval.f_delta - eval.psi_at(&x);
        let quad = 0.5 * options.l_true * options.norm.norm(&(&x - &y)).powi(2);
        report.max_lower_violation = report.max_lower_violation.max(-residual);
        report.max_upper_violation = report.max_upper_violation.max(residual - quad - eval.delta);
        report.max_psi_at_center = report.max_psi_at_center.max(eval.psi_at(&y).abs());

        let g = eval.psi_subgradient(&x);
        let other = set.sample(&mut rng, options.radius);
        let linear = eval.psi_at(&x) + g.dot(&(&other - &x));
        let scale = 1.0 + linear.abs();
        report.max_convexity_violation =
            report.max_convexity_violation.max((linear - eval.psi_at(&other)) / scale);
    }
    report.passed = report.max_lower_violation <= tolerances::SANDWICH_LOWER
        && report.max_upper_violation <= tolerances::SANDWICH_UPPER
        && report.max_psi_at_center == 0.0
        && report.max_convexity_violation <= tolerances::SANDWICH_LOWER;
    Ok(report)
}
