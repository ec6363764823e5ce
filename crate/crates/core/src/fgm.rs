//! The adaptive fast gradient method and its convergence bound.

use std::time::Instant;

use crate::error::{reject, Error, Result};
use crate::method::{self, MethodConfig, Trial};
use crate::oracle::{Model, ObjectiveSpec};
use crate::tolerances;
use crate::trace::{MethodTag, RunTrace, TraceRow};
use crate::Vector;

/// The largest root of `L a^2 - a - A = 0`.
pub fn alpha_largest_root(a: f64, l: f64) -> Result<f64> {
    if !(l.is_finite() && l > 0.0) {
        return reject(format!("trial constant {l} must be positive"));
    }
    if !(a.is_finite() && a >= 0.0) {
        return reject(format!("A = {a} must be nonnegative"));
    }
    Ok((1.0 + (1.0 + 4.0 * l * a).sqrt()) / (2.0 * l))
}

/// Mutable state of a fast-gradient run.
#[derive(Debug, Clone)]
pub struct FgmState {
    pub k: usize,
    pub x: Vector,
    pub u: Vector,
    pub a: f64,
    pub l_next: f64,
}

impl FgmState {
    pub fn new(config: &MethodConfig) -> Self {
        Self { k: 0, x: config.x0.clone(), u: config.x0.clone(), a: 0.0, l_next: config.l0 / 2.0 }
    }
}

/// An accepted step.
pub struct FgmStepOutcome {
    pub(crate) trial: Trial,
    pub y: Vector,
    pub backtracks: u32,
}

impl FgmStepOutcome {
    pub fn l(&self) -> f64 {
        self.trial.l
    }

    pub fn alpha(&self) -> f64 {
        self.trial.alpha
    }
}

/// One accepted step. For every trial constant `alpha`, `A`, `y` and the
/// requested `delta` are recomputed before the model is called.
pub fn fgm_step(state: &mut FgmState, model: &dyn Model, config: &MethodConfig) -> Result<FgmStepOutcome> {
    let fixed = model.fixed_l();
    let mut l = fixed.unwrap_or(state.l_next);
    let mut doublings = 0u32;
    loop {
        if l == 0.0 {
            return Err(Error::RangeExhausted { step: state.k });
        }
        let alpha = alpha_largest_root(state.a, l)?;
        let a_next = state.a + alpha;
        method::check_range(state.k, alpha, a_next)?;
        let request = config.delta.request(alpha, a_next);
        let y = (&state.u * alpha + &state.x * state.a) / a_next;
        let eval = model.evaluate(&y, request)?;
        let (cert, target) = method::solve_step(config, &state.u, alpha, &eval, state.k)?;
        let x_next = (&cert.solution * alpha + &state.x * state.a) / a_next;
        let accepted = match fixed {
            Some(_) => true,
            None => {
                let eval_next = model.evaluate(&x_next, request)?;
                method::exit_test(config, &eval, eval_next.f_delta, &x_next, l)
            }
        };
        if accepted {
            state.k += 1;
            state.a = a_next;
            state.u = cert.solution.clone();
            state.x = x_next;
            state.l_next = if fixed.is_some() { l } else { l / 2.0 };
            let trial = Trial { l, alpha, a_next, eval, cert, delta_tilde_request: target };
            return Ok(FgmStepOutcome { trial, y, backtracks: doublings });
        }
        doublings += 1;
        if doublings > tolerances::BACKTRACK_CAP {
            return Err(method::divergence(state.k, doublings - 1, l));
        }
        l *= 2.0;
    }
}

/// Runs `config.iterations` steps; the output is `x_N`.
pub fn fgm_run(config: &MethodConfig, model: &dyn Model, objective: Option<&ObjectiveSpec>) -> Result<RunTrace> {
    config.validate(model)?;
    let mut trace = method::empty_trace(MethodTag::FastGradient, config, objective);
    let mut state = FgmState::new(config);
    for _ in 0..config.iterations {
        let start = Instant::now();
        let out = match fgm_step(&mut state, model, config) {
            Ok(out) => out,
            Err(Error::RangeExhausted { .. }) => {
                trace.range_exhausted = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let t = &out.trial;
        let mut row = TraceRow {
            k: state.k,
            l: t.l,
            alpha: t.alpha,
            a: t.a_next,
            backtracks: out.backtracks,
            delta: t.eval.delta,
            delta_tilde: method::recorded_delta_tilde(t),
            certified_delta_tilde: t.cert.certified_delta_tilde,
            f_iterate: None,
            f_output: None,
            gap: None,
            dist_to_opt: None,
            x: config.record_points.then(|| state.x.clone()),
            y: config.record_points.then(|| out.y.clone()),
            u: config.record_points.then(|| state.u.clone()),
            step_seconds: 0.0,
        };
        method::report(&mut row, objective, &state.x, &state.x);
        row.step_seconds = method::elapsed(start);
        trace.rows.push(row);
    }
    trace.output = state.x;
    Ok(trace)
}

/// `8 L R^2 / (N+1)^2 + 2 sum delta_k A_{k+1} / A_N + 8 L sum delta~_k / (N+1)^2`
/// over the first `n` rows; 0 rows give infinity.
pub fn fgm_bound_prefix(l: f64, r: f64, trace: &RunTrace, n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let rows = &trace.rows[..n];
    let n1 = (n as f64 + 1.0).powi(2);
    let sum_da: f64 = rows.iter().map(|r| r.delta * r.a).sum();
    let sum_dt: f64 = rows.iter().map(|r| r.delta_tilde).sum();
    8.0 * l * r * r / n1 + 2.0 * sum_da / rows[n - 1].a + 8.0 * l * sum_dt / n1
}

pub fn fgm_bound(l: f64, r: f64, trace: &RunTrace) -> f64 {
    fgm_bound_prefix(l, r, trace, trace.len())
}

/// The bound at every prefix `N = 1..len`.
pub fn fgm_bound_curve(l: f64, r: f64, trace: &RunTrace) -> Vec<f64> {
    let mut sum_da = 0.0;
    let mut sum_dt = 0.0;
    trace
        .rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            sum_da += row.delta * row.a;
            sum_dt += row.delta_tilde;
            let n1 = (i as f64 + 2.0).powi(2);
            8.0 * l * r * r / n1 + 2.0 * sum_da / row.a + 8.0 * l * sum_dt / n1
        })
        .collect()
}

/// `R^2 / A_N + 2 sum delta_k A_{k+1} / A_N + sum delta~_k / A_N` at every
/// prefix, valid for any accepted constants.
pub fn fgm_realized_bound_curve(r: f64, trace: &RunTrace) -> Vec<f64> {
    let mut sum_da = 0.0;
    let mut sum_dt = 0.0;
    trace
        .rows
        .iter()
        .map(|row| {
            sum_da += row.delta * row.a;
            sum_dt += row.delta_tilde;
            (r * r + 2.0 * sum_da + sum_dt) / row.a
        })
        .collect()
}

/// Whether `A_k >= (k+1)^2 / (8 L_eff)` for every row.
pub fn check_sequence_growth(trace: &RunTrace, l_eff: f64) -> bool {
    first_growth_violation(trace, l_eff).is_none()
}

/// The first `k` with `A_k < (k+1)^2 / (8 L_eff)`.
pub fn first_growth_violation(trace: &RunTrace, l_eff: f64) -> Option<usize> {
    trace
        .rows
        .iter()
        .find(|r| {
            let need = ((r.k + 1) as f64).powi(2) / (8.0 * l_eff);
            r.a * (1.0 + 4.0 * f64::EPSILON) < need
        })
        .map(|r| r.k)
}
