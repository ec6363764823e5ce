//! Inexact minimization of `phi(x) = V(x, z) + alpha * psi(x)` over `Q`.
//!
//! Every solver returns a [`SubproblemCertificate`]: a point `x~` and a
//! witness `h` with `<h, x - x~> >= -delta~` for all `x` in `Q`, where
//! `delta~` is recomputed from the support function of `Q`.

mod bisection;
mod certificate;
mod closed_form;
mod dual;
mod iterative;
mod set;

use std::sync::Arc;

pub use bisection::{solve_separable_bisection, LinearScalar, ScalarConvex, ScalarSum, ScaledSquare};
pub use certificate::{certify, SolverTag, SubproblemCertificate};
pub use closed_form::{
    solve_euclidean_closed_form, solve_linear_minimization, solve_simplex_entropy, solve_simplex_projection,
    solve_weighted_closed_form,
};
pub use dual::solve_superposition_dual;
pub use iterative::solve_inner_iterative;
pub use set::{project_simplex, FeasibleSet};

use crate::error::{reject, Error, Result};
use crate::functions::{ConvexFunction, Separable};
use crate::geometry::{NormSpec, ProxSetup};
use crate::oracle::{ModelEvaluation, Psi};
use crate::tolerances;
use crate::Vector;

/// Default inner budget when no exact solver applies.
pub const DEFAULT_INNER_ITERS: usize = 20_000;

/// How the methods solve their Bregman subproblems.
#[derive(Debug, Clone, PartialEq)]
pub enum SubproblemPolicy {
    /// Closed form, then bisection, then a dual or iterative solve.
    Auto,
    /// Always use the iterative solver with the given budget.
    Iterative { max_iters: usize },
    /// Drop `V` and minimize the linear model over `Q`.
    FrankWolfe,
    /// Solve exactly, then move the solution toward the set center until
    /// the certified accuracy reaches the requested `delta~`.
    Perturbed,
}

/// One subproblem instance `min_Q V(x, z) + alpha psi(x, y)`.
#[derive(Debug, Clone, Copy)]
pub struct Subproblem<'a> {
    pub prox: &'a ProxSetup,
    pub set: &'a FeasibleSet,
    /// The Bregman center `z`.
    pub center: &'a Vector,
    pub alpha: f64,
    pub psi: &'a Psi,
    /// The point `y` at which `psi` was built.
    pub psi_center: &'a Vector,
}

impl<'a> Subproblem<'a> {
    pub fn new(
        prox: &'a ProxSetup,
        set: &'a FeasibleSet,
        center: &'a Vector,
        alpha: f64,
        eval: &'a ModelEvaluation,
    ) -> Self {
        Self { prox, set, center, alpha, psi: &eval.psi, psi_center: &eval.center }
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    /// `phi(x)`.
    pub fn value(&self, x: &Vector) -> f64 {
        self.prox.divergence(x, self.center) + self.alpha * self.psi.value(self.psi_center, x)
    }

    /// A subgradient of `phi` at `x` using the fixed selection rules.
    pub fn gradient(&self, x: &Vector) -> Vector {
        self.prox.divergence_gradient(x, self.center) + self.psi.subgradient(self.psi_center, x) * self.alpha
    }

    /// A subgradient of `phi` at `x`; separable nonsmooth parts contribute
    /// the element of their subdifferential closest to cancelling the rest.
    pub fn witness(&self, x: &Vector) -> Vector {
        let Some((linear, extra)) = self.split() else {
            return self.gradient(x);
        };
        let mut base = self.prox.divergence_gradient(x, self.center);
        if let Some(g) = linear {
            base.axpy(self.alpha, g, 1.0);
        }
        match extra {
            None => base,
            Some(f) => match f.separable() {
                Some(sep) => Vector::from_iterator(
                    x.len(),
                    (0..x.len()).map(|i| {
                        let (lo, hi) = sep.component_subdifferential(i, x[i]);
                        0.0f64.clamp(base[i] + self.alpha * lo, base[i] + self.alpha * hi)
                    }),
                ),
                None => base + f.subgradient(x) * self.alpha,
            },
        }
    }

    /// `psi` as a linear part plus an extra convex term, if it has that shape.
    fn split(&self) -> Option<(Option<&'a Vector>, Option<&'a Arc<dyn ConvexFunction>>)> {
        match self.psi {
            Psi::Linear { gradient } => Some((Some(gradient), None)),
            Psi::Composite { gradient, h, .. } => Some((Some(gradient), Some(h))),
            Psi::Difference { f, .. } => Some((None, Some(f))),
            Psi::Superposition { .. } => None,
        }
    }

    fn euclidean_type(&self) -> bool {
        match self.prox {
            ProxSetup::Euclidean => true,
            ProxSetup::WeightedEuclidean { weights } => weights.len() == self.dim(),
            _ => false,
        }
    }

    fn weights(&self) -> Vector {
        match self.prox {
            ProxSetup::WeightedEuclidean { weights } => weights.clone(),
            _ => Vector::from_element(self.dim(), 1.0),
        }
    }

    /// Half-width of a box around `z` that contains the exact minimizer
    /// when `Q` is unconstrained: `2 alpha |s|_* + 1` with `s` a
    /// subgradient of `psi` at `z`, rescaled to coordinate distances.
    pub fn localization_radius(&self) -> f64 {
        let s = self.psi.subgradient(self.psi_center, self.center);
        let norm = self.prox.norm();
        let dual = norm.dual().norm(&s);
        let factor = match norm {
            NormSpec::WeightedEuclidean(w) => 1.0 / w.min().sqrt(),
            _ => 1.0,
        };
        (2.0 * self.alpha * dual + 1.0) * factor
    }

    /// The set the iterative and bisection solvers work on: `Q` itself, or
    /// the localization box when `Q` is unconstrained.
    pub fn working_set(&self) -> Result<FeasibleSet> {
        match self.set {
            FeasibleSet::Unconstrained { .. } => {
                let r = self.localization_radius();
                if !r.is_finite() {
                    return reject("subproblem: non-finite localization radius");
                }
                FeasibleSet::boxed(self.center.add_scalar(-r), self.center.add_scalar(r))
            }
            other => Ok(other.clone()),
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        if self.center.len() != n || self.psi_center.len() != n {
            return reject("subproblem: dimension mismatch");
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return reject(format!("subproblem: step {} must be finite and nonnegative", self.alpha));
        }
        if matches!(self.prox, ProxSetup::Entropy) {
            match self.set {
                FeasibleSet::Simplex { scale, .. } if *scale <= 1.0 => {}
                FeasibleSet::Simplex { .. } => {
                    return Err(Error::Configuration("entropy prox needs a simplex of scale <= 1".into()))
                }
                _ => return Err(Error::Unsupported("entropy prox needs a simplex feasible set".into())),
            }
        }
        Ok(())
    }

    /// Exact solve when a closed form or bisection applies.
    fn solve_structured(&self) -> Result<Option<SubproblemCertificate>> {
        let Some((linear, extra)) = self.split() else {
            return Ok(None);
        };
        let n = self.dim();
        let zero;
        let g = match linear {
            Some(g) => g,
            None => {
                zero = Vector::zeros(n);
                &zero
            }
        };
        let l1 = match extra {
            None => Some(None),
            Some(f) => f.l1_weight().map(Some),
        };
        let box_like = matches!(self.set, FeasibleSet::Unconstrained { .. } | FeasibleSet::Box { .. });
        if let Some(l1) = l1 {
            let linear_only = l1.is_none();
            match (self.prox, self.set) {
                (ProxSetup::Euclidean | ProxSetup::WeightedEuclidean { .. }, _) if box_like && self.euclidean_type() => {
                    return solve_weighted_closed_form(self.prox, self.alpha, g, self.center, self.set, l1).map(Some)
                }
                (ProxSetup::Euclidean, FeasibleSet::Ball { .. } | FeasibleSet::Simplex { .. }) if linear_only => {
                    return solve_euclidean_closed_form(self.alpha, g, self.center, self.set, None).map(Some)
                }
                (ProxSetup::Entropy, FeasibleSet::Simplex { .. }) if linear_only => {
                    return closed_form::entropy_step(self.alpha, g, self.center, self.set).map(Some)
                }
                _ => {}
            }
        }
        if let Some(f) = extra {
            if let Some(sep) = f.separable() {
                if box_like && self.euclidean_type() {
                    return self.solve_bisection(g, sep).map(Some);
                }
            }
        }
        Ok(None)
    }

    fn solve_bisection(&self, g: &Vector, sep: &dyn Separable) -> Result<SubproblemCertificate> {
        let n = self.dim();
        let work = self.working_set()?;
        let FeasibleSet::Box { lower, upper } = &work else {
            return reject("bisection needs a box");
        };
        let w = self.weights();
        let squares: Vec<ScaledSquare> =
            (0..n).map(|i| ScaledSquare { weight: w[i], center: self.center[i] }).collect();
        let parts: Vec<SeparablePart> = (0..n).map(|i| SeparablePart { sep, index: i, slope: g[i] }).collect();
        let psi: Vec<&dyn ScalarConvex> = parts.iter().map(|p| p as &dyn ScalarConvex).collect();
        let v: Vec<&dyn ScalarConvex> = squares.iter().map(|s| s as &dyn ScalarConvex).collect();
        let bounds: Vec<(f64, f64)> = (0..n).map(|i| (lower[i], upper[i])).collect();
        solve_separable_bisection(self.alpha, &psi, &v, &bounds, 0.0)
    }
}

/// Coordinate `index` of `slope * t + sep_i(t)`.
struct SeparablePart<'a> {
    sep: &'a dyn Separable,
    index: usize,
    slope: f64,
}

impl ScalarConvex for SeparablePart<'_> {
    fn value(&self, t: f64) -> f64 {
        self.slope * t + self.sep.component_value(self.index, t)
    }

    fn subdifferential(&self, t: f64) -> (f64, f64) {
        let (lo, hi) = self.sep.component_subdifferential(self.index, t);
        (self.slope + lo, self.slope + hi)
    }

    fn kinks(&self) -> Vec<f64> {
        self.sep.component_kinks(self.index)
    }
}

/// Solves a subproblem under `policy`. `target` is the requested `delta~`;
/// exact and best-effort solvers may return a certificate above it, and
/// callers record the certified value.
pub fn solve_subproblem(problem: &Subproblem, policy: &SubproblemPolicy, target: f64) -> Result<SubproblemCertificate> {
    problem.check()?;
    if !(target.is_finite() && target >= 0.0) {
        return reject(format!("requested accuracy {target} must be finite and nonnegative"));
    }
    match policy {
        SubproblemPolicy::Auto => solve_auto(problem, target),
        SubproblemPolicy::Iterative { max_iters } => {
            iterative::best_effort(problem, target.max(tolerances::ITERATIVE_FLOOR), *max_iters)
        }
        SubproblemPolicy::FrankWolfe => solve_frank_wolfe(problem),
        SubproblemPolicy::Perturbed => solve_perturbed(problem, target),
    }
}

fn solve_auto(problem: &Subproblem, target: f64) -> Result<SubproblemCertificate> {
    if let Some(c) = problem.solve_structured()? {
        return Ok(c);
    }
    if let Some(c) = dual::try_solve(problem, target, DEFAULT_INNER_ITERS)? {
        return Ok(c);
    }
    iterative::best_effort(problem, target.max(tolerances::ITERATIVE_FLOOR), DEFAULT_INNER_ITERS)
}

/// Minimizes `alpha psi(., y)` over `Q` and certifies the result as an
/// inexact solution of the full subproblem.
fn solve_frank_wolfe(problem: &Subproblem) -> Result<SubproblemCertificate> {
    let Some(g) = problem.psi.as_linear() else {
        return Err(Error::Unsupported("linear minimization needs a linear model".into()));
    };
    let lmo = solve_linear_minimization(g, problem.set)?;
    let u = lmo.solution;
    let h = problem.prox.divergence_gradient(&u, problem.center) + g * problem.alpha;
    SubproblemCertificate::certified(u, h, problem.set, SolverTag::LinearMinimization)
}

fn solve_perturbed(problem: &Subproblem, target: f64) -> Result<SubproblemCertificate> {
    if !problem.set.is_bounded() {
        return Err(Error::Unsupported("perturbed solves need a bounded set".into()));
    }
    let exact = solve_auto(problem, 0.0)?;
    if exact.certified_delta_tilde >= target {
        return Ok(exact);
    }
    let start = exact.solution.clone();
    let mut anchor = problem.set.center_point();
    if (&anchor - &start).norm() == 0.0 {
        anchor = problem.set.support_min(&Vector::from_element(problem.dim(), 1.0))?.1;
    }
    let direction = &anchor - &start;
    if direction.norm() == 0.0 {
        return Ok(exact);
    }
    let at = |tau: f64| -> Result<SubproblemCertificate> {
        let x = problem.set.project(&(&start + &direction * tau));
        let h = problem.witness(&x);
        SubproblemCertificate::certified(x, h, problem.set, SolverTag::Perturbed)
    };
    let full = at(1.0)?;
    if full.certified_delta_tilde <= target {
        return Ok(full);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = SubproblemCertificate { method: SolverTag::Perturbed, ..exact };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let c = at(mid)?;
        if c.certified_delta_tilde <= target {
            lo = mid;
            best = c;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}
