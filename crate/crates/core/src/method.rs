//! Settings shared by the gradient and fast gradient methods.

use std::time::Instant;

use crate::error::{reject, Error, Result};
use crate::geometry::ProxSetup;
use crate::oracle::{Model, ModelEvaluation, ObjectiveSpec};
use crate::subproblem::{solve_subproblem, FeasibleSet, Subproblem, SubproblemCertificate, SubproblemPolicy};
use crate::tolerances;
use crate::trace::{MethodTag, RunTrace, TraceRow};
use crate::Vector;

/// The model accuracy `delta_k` requested at each step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSchedule {
    Zero,
    Constant(f64),
    /// `delta_k = epsilon alpha_{k+1} / (4 A_{k+1})`, recomputed for every
    /// trial constant.
    Universal { epsilon: f64 },
}

impl DeltaSchedule {
    /// `delta_k` for a trial step `alpha_{k+1}` with `A_{k+1}`.
    pub fn request(&self, alpha: f64, a_next: f64) -> f64 {
        match self {
            DeltaSchedule::Zero => 0.0,
            DeltaSchedule::Constant(c) => *c,
            DeltaSchedule::Universal { epsilon } => universal_delta(alpha, a_next, *epsilon),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DeltaSchedule::Zero => Ok(()),
            DeltaSchedule::Constant(c) if c.is_finite() && *c >= 0.0 => Ok(()),
            DeltaSchedule::Universal { epsilon } if epsilon.is_finite() && *epsilon > 0.0 => Ok(()),
            other => Err(Error::Configuration(format!("invalid delta schedule {other:?}"))),
        }
    }
}

/// `epsilon alpha / (4 A)`.
pub fn universal_delta(alpha: f64, a_next: f64, epsilon: f64) -> f64 {
    epsilon * alpha / (4.0 * a_next)
}

/// The requested subproblem accuracy `delta~_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaTildeSchedule {
    Zero,
    Constant(f64),
}

impl DeltaTildeSchedule {
    pub fn request(&self, _k: usize) -> f64 {
        match self {
            DeltaTildeSchedule::Zero => 0.0,
            DeltaTildeSchedule::Constant(c) => *c,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            DeltaTildeSchedule::Constant(c) if !(c.is_finite() && *c >= 0.0) => {
                Err(Error::Configuration(format!("invalid delta~ {c}")))
            }
            _ => Ok(()),
        }
    }
}

/// Configuration of one run of either method.
#[derive(Debug, Clone)]
pub struct MethodConfig {
    pub x0: Vector,
    pub iterations: usize,
    pub l0: f64,
    pub delta: DeltaSchedule,
    pub delta_tilde: DeltaTildeSchedule,
    pub prox: ProxSetup,
    pub set: FeasibleSet,
    pub policy: SubproblemPolicy,
    /// Keep `x_k`, `y_k`, `u_k` in the trace rows.
    pub record_points: bool,
}

impl MethodConfig {
    /// Exact schedules, Euclidean prox, automatic subproblem solver.
    pub fn new(x0: Vector, set: FeasibleSet, iterations: usize, l0: f64) -> Self {
        Self {
            x0,
            iterations,
            l0,
            delta: DeltaSchedule::Zero,
            delta_tilde: DeltaTildeSchedule::Zero,
            prox: ProxSetup::Euclidean,
            set,
            policy: SubproblemPolicy::Auto,
            record_points: true,
        }
    }

    pub fn with_prox(mut self, prox: ProxSetup) -> Self {
        self.prox = prox;
        self
    }

    pub fn with_delta(mut self, delta: DeltaSchedule) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_delta_tilde(mut self, delta_tilde: DeltaTildeSchedule) -> Self {
        self.delta_tilde = delta_tilde;
        self
    }

    pub fn with_policy(mut self, policy: SubproblemPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_record_points(mut self, record: bool) -> Self {
        self.record_points = record;
        self
    }

    pub fn validate(&self, model: &dyn Model) -> Result<()> {
        if !(self.l0.is_finite() && self.l0 > 0.0) {
            return Err(Error::Configuration(format!("L0 = {} must be positive", self.l0)));
        }
        if let Some(l) = model.fixed_l() {
            if !(l.is_finite() && l > 0.0) {
                return Err(Error::Configuration(format!("fixed L = {l} must be positive")));
            }
        }
        self.delta.validate()?;
        self.delta_tilde.validate()?;
        if self.x0.len() != self.set.dim() || model.dim() != self.set.dim() {
            return reject("x0, model and feasible set dimensions differ");
        }
        if !self.set.contains(&self.x0, tolerances::MEMBERSHIP) {
            return reject("x0 is not feasible");
        }
        Ok(())
    }
}

/// Fills the reporting columns of a row from the objective.
pub(crate) fn report(row: &mut TraceRow, objective: Option<&ObjectiveSpec>, iterate: &Vector, output: &Vector) {
    let Some(obj) = objective else {
        return;
    };
    row.f_iterate = obj.evaluate(iterate);
    row.f_output = obj.evaluate(output);
    if let (Some(f), Some(fs)) = (row.f_output, obj.optimal_value()) {
        row.gap = Some(f - fs);
    }
    if let Some(xs) = obj.optimizer() {
        row.dist_to_opt = Some((output - xs).norm());
    }
}

pub(crate) fn empty_trace(method: MethodTag, config: &MethodConfig, objective: Option<&ObjectiveSpec>) -> RunTrace {
    let f0 = objective.and_then(|o| o.evaluate(&config.x0));
    let gap0 = match (f0, objective.and_then(|o| o.optimal_value())) {
        (Some(f), Some(fs)) => Some(f - fs),
        _ => None,
    };
    RunTrace {
        method,
        x0: config.x0.clone(),
        l0: config.l0,
        f0,
        gap0,
        rows: Vec::new(),
        output: config.x0.clone(),
        range_exhausted: false,
    }
}

/// Result of one trial constant inside a backtracking loop.
pub(crate) struct Trial {
    pub l: f64,
    pub alpha: f64,
    pub a_next: f64,
    pub eval: ModelEvaluation,
    pub cert: SubproblemCertificate,
    pub delta_tilde_request: f64,
}

/// Solves the step subproblem for one trial.
pub(crate) fn solve_step(
    config: &MethodConfig,
    center: &Vector,
    alpha: f64,
    eval: &ModelEvaluation,
    k: usize,
) -> Result<(SubproblemCertificate, f64)> {
    let target = config.delta_tilde.request(k);
    let problem = Subproblem::new(&config.prox, &config.set, center, alpha, eval);
    let cert = solve_subproblem(&problem, &config.policy, target)?;
    Ok((cert, target))
}

/// The backtracking exit test
/// `F_d(x) <= F_d(y) + psi(x, y) + L/2 |x - y|^2 + delta`, with a rounding
/// allowance proportional to the magnitudes involved.
pub(crate) fn exit_test(config: &MethodConfig, eval_y: &ModelEvaluation, f_delta_x: f64, x: &Vector, l: f64) -> bool {
    let psi = eval_y.psi_at(x);
    let quad = 0.5 * l * config.prox.norm().norm(&(x - &eval_y.center)).powi(2);
    let rhs = eval_y.f_delta + psi + quad + eval_y.delta;
    let scale = f_delta_x.abs() + eval_y.f_delta.abs() + psi.abs() + quad + eval_y.delta;
    f_delta_x <= rhs + tolerances::EXIT_TEST_ULPS * f64::EPSILON * scale
}

/// The recorded `delta~` of an accepted step.
pub(crate) fn recorded_delta_tilde(trial: &Trial) -> f64 {
    trial.delta_tilde_request.max(trial.cert.certified_delta_tilde)
}

/// Fails when a trial step or its accumulated weight is no longer a
/// finite double (with room for the schedule's `4 A`).
pub(crate) fn check_range(k: usize, alpha: f64, a_next: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && (4.0 * a_next).is_finite() {
        Ok(())
    } else {
        Err(Error::RangeExhausted { step: k })
    }
}

pub(crate) fn divergence(k: usize, doublings: u32, l: f64) -> Error {
    Error::Divergence { step: k, doublings, l }
}

pub(crate) fn elapsed(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}
