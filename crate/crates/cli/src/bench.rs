//! Runs the configured methods on a problem and summarizes the results.

use std::fmt::Write as _;

use dlmodel::{fgm_run, gd_run, MethodTag, Result, RunTrace};

use crate::certify::{certify_run, realized_bound_curve, theory_bound_curve, CertificationReport};
use crate::config::BenchmarkConfig;
use crate::error::HarnessResult;
use crate::problems::{build_problem, Problem};

/// One method's run on the problem.
#[derive(Debug, Clone)]
pub struct MethodRun {
    pub trace: RunTrace,
    pub report: CertificationReport,
    /// The convergence bound when the model has a constant, otherwise the
    /// bound from the realized weights.
    pub bound: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkOutcome {
    pub problem: Problem,
    pub l0: f64,
    pub runs: Vec<MethodRun>,
}

impl BenchmarkOutcome {
    pub fn traces(&self) -> Vec<RunTrace> {
        self.runs.iter().map(|r| r.trace.clone()).collect()
    }

    pub fn passed(&self) -> bool {
        self.runs.iter().all(|r| r.report.passed())
    }

    /// A plain-text table of final gaps, bounds and checks.
    pub fn summary(&self) -> String {
        let p = &self.problem;
        let mut s = String::new();
        let l = p.l_true.map_or("adaptive".to_string(), |l| format!("{l:.6e}"));
        writeln!(s, "problem {}: n = {}, L = {l}, L0 = {:.6e}, R = {:.6e}", p.name, p.x0.len(), self.l0, p.r).unwrap();
        if let Some(g) = self.runs.first().and_then(|r| r.trace.gap0) {
            writeln!(s, "initial gap {g:.6e}").unwrap();
        }
        for run in &self.runs {
            let t = &run.trace;
            let rep = &run.report;
            let last = t.rows.last();
            let gap = last.and_then(|r| r.gap).map_or("-".into(), |g| format!("{g:.6e}"));
            let bound = run.bound.last().map_or("-".into(), |b| format!("{b:.6e}"));
            writeln!(
                s,
                "{:>3}: N = {}{}, gap {gap}, bound {bound}, max L {:.6e}, backtracks {}",
                t.method.as_str(),
                t.len(),
                if t.range_exhausted { " (stopped: step range exhausted)" } else { "" },
                t.max_l(),
                t.rows.iter().map(|r| r.backtracks as u64).sum::<u64>(),
            )
            .unwrap();
            writeln!(
                s,
                "     bound {}, realized bound {}, L cap {}, A growth {} => {}",
                rep.bound,
                rep.realized_bound,
                rep.l_cap,
                rep.a_growth,
                if rep.passed() { "PASS" } else { "FAIL" }
            )
            .unwrap();
        }
        s
    }
}

/// Runs one method on a built problem.
pub fn run_method(problem: &Problem, method: MethodTag, iterations: usize, l0: f64) -> Result<RunTrace> {
    let cfg = problem.method_config(iterations, l0);
    match method {
        MethodTag::Gradient => gd_run(&cfg, problem.model.as_ref(), Some(&problem.objective)),
        MethodTag::FastGradient => fgm_run(&cfg, problem.model.as_ref(), Some(&problem.objective)),
    }
}

/// Certifies a trace of `problem` and returns the bound curve to plot.
pub fn certify_method(problem: &Problem, trace: RunTrace) -> MethodRun {
    let report = certify_run(&trace, problem.l_true, problem.r);
    let bound = match problem.l_true {
        Some(l) => theory_bound_curve(&trace, l, problem.r),
        None => realized_bound_curve(&trace, problem.r),
    };
    MethodRun { trace, report, bound }
}

/// Builds the problem, runs every selected method and certifies each run.
pub fn run_benchmark(cfg: &BenchmarkConfig) -> HarnessResult<BenchmarkOutcome> {
    let problem = build_problem(cfg)?;
    let l0 = cfg.l0.unwrap_or_else(|| problem.default_l0());
    let mut runs = Vec::new();
    for method in cfg.method.tags() {
        let trace = run_method(&problem, method, cfg.iters, l0)?;
        runs.push(certify_method(&problem, trace));
    }
    Ok(BenchmarkOutcome { problem, l0, runs })
}
