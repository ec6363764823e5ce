//! The adaptive gradient method and its convergence bound.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::method::{self, MethodConfig, Trial};
use crate::oracle::{Model, ModelEvaluation, ObjectiveSpec};
use crate::tolerances;
use crate::trace::{MethodTag, RunTrace, TraceRow};
use crate::Vector;

/// Mutable state of a gradient-method run.
#[derive(Debug, Clone)]
pub struct GdState {
    /// Number of accepted steps.
    pub k: usize,
    pub x: Vector,
    /// Trial constant for the next step.
    pub l_next: f64,
    pub a: f64,
    /// Running `alpha`-weighted average of `x_1, ..., x_k`.
    pub x_bar: Vector,
    cached: Option<(f64, ModelEvaluation)>,
}

impl GdState {
    pub fn new(config: &MethodConfig) -> Self {
        Self { k: 0, x: config.x0.clone(), l_next: config.l0 / 2.0, a: 0.0, x_bar: config.x0.clone(), cached: None }
    }
}

fn evaluate_cached(
    model: &dyn Model,
    cache: &mut Option<(f64, ModelEvaluation)>,
    x: &Vector,
    request: f64,
) -> Result<ModelEvaluation> {
    if let Some((r, eval)) = cache {
        if *r == request && eval.center == *x {
            return Ok(eval.clone());
        }
    }
    let eval = model.evaluate(x, request)?;
    *cache = Some((request, eval.clone()));
    Ok(eval)
}

/// One accepted step: backtracks on `L` until the exit test holds, then
/// halves the trial constant. Returns the accepted trial and the number of
/// rejections.
pub fn gd_step(state: &mut GdState, model: &dyn Model, config: &MethodConfig) -> Result<GdStepOutcome> {
    let fixed = model.fixed_l();
    let mut l = fixed.unwrap_or(state.l_next);
    let mut doublings = 0u32;
    loop {
        let alpha = 1.0 / l;
        let a_next = state.a + alpha;
        method::check_range(state.k, alpha, a_next)?;
        let request = config.delta.request(alpha, a_next);
        let eval = evaluate_cached(model, &mut state.cached, &state.x, request)?;
        let (cert, target) = method::solve_step(config, &state.x, alpha, &eval, state.k)?;
        let x_next = cert.solution.clone();
        let mut next_cache = None;
        let accepted = match fixed {
            Some(_) => true,
            None => {
                let eval_next = evaluate_cached(model, &mut next_cache, &x_next, request)?;
                method::exit_test(config, &eval, eval_next.f_delta, &x_next, l)
            }
        };
        if accepted {
            let trial = Trial { l, alpha, a_next, eval, cert, delta_tilde_request: target };
            state.k += 1;
            state.a = a_next;
            state.x_bar += (&x_next - &state.x_bar) * (alpha / a_next);
            state.x = x_next;
            state.cached = next_cache;
            state.l_next = if fixed.is_some() { l } else { l / 2.0 };
            return Ok(GdStepOutcome { trial, backtracks: doublings });
        }
        doublings += 1;
        if doublings > tolerances::BACKTRACK_CAP {
            return Err(method::divergence(state.k, doublings - 1, l));
        }
        l *= 2.0;
    }
}

/// An accepted step.
pub struct GdStepOutcome {
    pub(crate) trial: Trial,
    pub backtracks: u32,
}

impl GdStepOutcome {
    pub fn l(&self) -> f64 {
        self.trial.l
    }

    pub fn alpha(&self) -> f64 {
        self.trial.alpha
    }
}

/// Runs `config.iterations` steps and returns the trace; its output is
/// the weighted average `x-bar_N`.
pub fn gd_run(config: &MethodConfig, model: &dyn Model, objective: Option<&ObjectiveSpec>) -> Result<RunTrace> {
    config.validate(model)?;
    let mut trace = method::empty_trace(MethodTag::Gradient, config, objective);
    let mut state = GdState::new(config);
    for _ in 0..config.iterations {
        let start = Instant::now();
        let center = state.x.clone();
        let out = match gd_step(&mut state, model, config) {
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
            y: config.record_points.then_some(center),
            u: None,
            step_seconds: 0.0,
        };
        method::report(&mut row, objective, &state.x, &state.x_bar);
        row.step_seconds = method::elapsed(start);
        trace.rows.push(row);
    }
    trace.output = state.x_bar;
    Ok(trace)
}

/// `2 L R^2 / N + (2L / N) sum delta~_k + (2 / A_N) sum alpha_{k+1} delta_k`
/// over the first `n` rows; 0 rows give infinity.
pub fn gd_bound_prefix(l: f64, r: f64, trace: &RunTrace, n: usize) -> f64 {
    if n == 0 {
        return f64::INFINITY;
    }
    let rows = &trace.rows[..n];
    let nf = n as f64;
    let sum_dt: f64 = rows.iter().map(|r| r.delta_tilde).sum();
    let sum_ad: f64 = rows.iter().map(|r| r.alpha * r.delta).sum();
    2.0 * l * r * r / nf + 2.0 * l * sum_dt / nf + 2.0 * sum_ad / rows[n - 1].a
}

/// The bound at the full trace length.
pub fn gd_bound(l: f64, r: f64, trace: &RunTrace) -> f64 {
    gd_bound_prefix(l, r, trace, trace.len())
}

/// The bound at every prefix `N = 1..len`.
pub fn gd_bound_curve(l: f64, r: f64, trace: &RunTrace) -> Vec<f64> {
    (1..=trace.len()).map(|n| gd_bound_prefix(l, r, trace, n)).collect()
}

/// `(R^2 + sum delta~_k + 2 sum alpha_{k+1} delta_k) / A_N` at every prefix,
/// valid for any accepted constants.
pub fn gd_realized_bound_curve(r: f64, trace: &RunTrace) -> Vec<f64> {
    let mut sum_dt = 0.0;
    let mut sum_ad = 0.0;
    trace
        .rows
        .iter()
        .map(|row| {
            sum_dt += row.delta_tilde;
            sum_ad += row.alpha * row.delta;
            (r * r + sum_dt + 2.0 * sum_ad) / row.a
        })
        .collect()
}
