//! Per-iteration records of a run.

use crate::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodTag {
    Gradient,
    FastGradient,
}

impl MethodTag {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::Gradient => "gd",
            MethodTag::FastGradient => "fgm",
        }
    }
}

/// One accepted step `k` (the step producing `x_k` from `x_{k-1}`).
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    /// Accepted `L_k`.
    pub l: f64,
    pub alpha: f64,
    /// `A_k = sum_{i <= k} alpha_i`.
    pub a: f64,
    /// Rejected trial constants before acceptance.
    pub backtracks: u32,
    /// `delta_{k-1}` declared by the model on the accepted trial.
    pub delta: f64,
    /// `delta~_{k-1}` used in the bounds: the larger of the requested and
    /// the certified value.
    pub delta_tilde: f64,
    pub certified_delta_tilde: f64,
    /// `F(x_k)` when the objective is known.
    pub f_iterate: Option<f64>,
    /// `F` at the method's output point (the averaged point for the
    /// gradient method, `x_k` for the fast one).
    pub f_output: Option<f64>,
    /// `f_output - F_*` when the optimum is known.
    pub gap: Option<f64>,
    /// Distance from the output point to the known minimizer.
    pub dist_to_opt: Option<f64>,
    pub x: Option<Vector>,
    pub y: Option<Vector>,
    pub u: Option<Vector>,
    pub step_seconds: f64,
}

impl TraceRow {
    /// A row with the step data only and no errors or reporting columns.
    pub fn bare(k: usize, l: f64, alpha: f64, a: f64) -> Self {
        Self {
            k,
            l,
            alpha,
            a,
            backtracks: 0,
            delta: 0.0,
            delta_tilde: 0.0,
            certified_delta_tilde: 0.0,
            f_iterate: None,
            f_output: None,
            gap: None,
            dist_to_opt: None,
            x: None,
            y: None,
            u: None,
            step_seconds: 0.0,
        }
    }
}

/// The record of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub method: MethodTag,
    pub x0: Vector,
    pub l0: f64,
    /// `F(x_0)` and its gap, when known.
    pub f0: Option<f64>,
    pub gap0: Option<f64>,
    pub rows: Vec<TraceRow>,
    /// `x-bar_N` for the gradient method, `x_N` for the fast one.
    pub output: Vector,
    /// Set when the run stopped before its budget because the step sizes
    /// left the floating-point range.
    pub range_exhausted: bool,
}

impl RunTrace {
    /// A trace with no rows starting at `x0`.
    pub fn empty(method: MethodTag, x0: Vector, l0: f64) -> Self {
        Self { method, output: x0.clone(), x0, l0, f0: None, gap0: None, rows: Vec::new(), range_exhausted: false }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `A_N`, or 0 for an empty trace.
    pub fn a_final(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.a)
    }

    /// Largest accepted `L_k`.
    pub fn max_l(&self) -> f64 {
        self.rows.iter().map(|r| r.l).fold(0.0, f64::max)
    }

    pub fn gaps(&self) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.gap).collect()
    }

    /// Whether every accepted `L_k` is at most `2 max(L_0, l_true)`, with
    /// the first offending `k`.
    pub fn check_l_cap(&self, l_true: f64) -> (bool, Option<usize>) {
        let cap = 2.0 * self.l0.max(l_true);
        match self.rows.iter().find(|r| r.l > cap) {
            Some(r) => (false, Some(r.k)),
            None => (true, None),
        }
    }
}
