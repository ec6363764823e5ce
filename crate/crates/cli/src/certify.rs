//! Checks a finished run against its convergence guarantees.

use std::fmt;

use dlmodel::fgm::{fgm_bound_curve, fgm_realized_bound_curve, first_growth_violation};
use dlmodel::gd::{gd_bound_curve, gd_realized_bound_curve};
use dlmodel::{MethodTag, RunTrace};

/// Relative slack `1e-9 (1 + |F_*|)` on every gap comparison.
pub const GAP_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Check {
    Pass,
    /// The first failing `k`.
    Fail(usize),
    NotApplicable,
}

impl Check {
    pub fn failed(self) -> bool {
        matches!(self, Check::Fail(_))
    }

    fn from_first(first: Option<usize>) -> Self {
        first.map_or(Check::Pass, Check::Fail)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Pass => write!(f, "pass"),
            Check::Fail(k) => write!(f, "FAIL at k={k}"),
            Check::NotApplicable => write!(f, "n/a"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificationReport {
    pub method: MethodTag,
    /// Gap below the convergence bound evaluated with `max(L0, L)` at every prefix.
    pub bound: Check,
    /// Gap below the bound recomputed from the realized `A_N` at every prefix.
    pub realized_bound: Check,
    /// Every accepted `L_k <= 2 max(L0, L)`.
    pub l_cap: Check,
    /// `A_k >= (k+1)^2 / (8 max(L0, L))`; fast gradient only.
    pub a_growth: Check,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        ![self.bound, self.realized_bound, self.l_cap, self.a_growth].iter().any(|c| c.failed())
    }
}

/// `max(L0, L)`.
pub fn effective_l(trace: &RunTrace, l_true: f64) -> f64 {
    trace.l0.max(l_true)
}

/// The convergence bound at every prefix.
pub fn theory_bound_curve(trace: &RunTrace, l_true: f64, r: f64) -> Vec<f64> {
    let l = effective_l(trace, l_true);
    match trace.method {
        MethodTag::Gradient => gd_bound_curve(l, r, trace),
        MethodTag::FastGradient => fgm_bound_curve(l, r, trace),
    }
}

/// The bound from the realized weights at every prefix.
pub fn realized_bound_curve(trace: &RunTrace, r: f64) -> Vec<f64> {
    match trace.method {
        MethodTag::Gradient => gd_realized_bound_curve(r, trace),
        MethodTag::FastGradient => fgm_realized_bound_curve(r, trace),
    }
}

fn first_excess(trace: &RunTrace, bound: &[f64], slack: f64) -> Option<Check> {
    let mut first = None;
    for (row, b) in trace.rows.iter().zip(bound) {
        let gap = row.gap?;
        if first.is_none() && !(gap <= b + slack) {
            first = Some(row.k);
        }
    }
    Some(Check::from_first(first))
}

/// Certifies `trace` for a model with constant `l_true` (none for models
/// whose constant depends on the accuracy) and `R^2 >= V(x_*, x_0)`.
/// Bound checks need the per-row gaps.
pub fn certify_run(trace: &RunTrace, l_true: Option<f64>, r: f64) -> CertificationReport {
    let f_star = trace.rows.first().and_then(|row| Some(row.f_output? - row.gap?));
    let slack = GAP_SLACK * (1.0 + f_star.unwrap_or(0.0).abs());
    let bound = match l_true {
        Some(l) => first_excess(trace, &theory_bound_curve(trace, l, r), slack),
        None => None,
    };
    let realized = first_excess(trace, &realized_bound_curve(trace, r), slack);
    let l_cap = match l_true {
        Some(l) => Check::from_first(trace.check_l_cap(l).1),
        None => Check::NotApplicable,
    };
    let a_growth = match (trace.method, l_true) {
        (MethodTag::FastGradient, Some(l)) => Check::from_first(first_growth_violation(trace, effective_l(trace, l))),
        _ => Check::NotApplicable,
    };
    CertificationReport {
        method: trace.method,
        bound: bound.unwrap_or(Check::NotApplicable),
        realized_bound: realized.unwrap_or(Check::NotApplicable),
        l_cap,
        a_growth,
    }
}
