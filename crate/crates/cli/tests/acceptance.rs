//! The ten acceptance criteria. Each prints one PASS or FAIL line; the
//! test fails if any criterion does.

use std::io::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use dlmodel::fgm::first_growth_violation;
use dlmodel::functions::{ConvexFunction, HolderPower, L1Norm, LeastSquares, MaxOuter};
use dlmodel::models::{
    holder_effective_l, universal_iteration_bound, CompositeModel, HolderModel, ProxPointModel, SmoothModel,
    SuperpositionModel,
};
use dlmodel::oracle::{verify_sandwich_with, SandwichOptions};
use dlmodel::subproblem::{
    certify, solve_euclidean_closed_form, solve_separable_bisection, solve_subproblem, LinearScalar, ScalarConvex,
    ScalarSum, ScaledSquare, Subproblem,
};
use dlmodel::{
    verify_sandwich, FeasibleSet, MethodTag, ModelEvaluation, ObjectiveSpec, ProxSetup, Psi, RunTrace,
    SubproblemPolicy, Vector,
};
use dlmodel_cli::bench::{certify_method, run_method};
use dlmodel_cli::certify::GAP_SLACK;
use dlmodel_cli::problems::random_quadratic;
use dlmodel_cli::{build_problem, emit_csv, run_benchmark, BenchmarkConfig, Overrides, Problem};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn problem(toml: &str, seed: u64) -> Problem {
    let o = Overrides { seed: Some(seed), ..Default::default() };
    build_problem(&BenchmarkConfig::parse(toml, "acceptance", &o).unwrap()).unwrap()
}

fn slack(p: &Problem) -> f64 {
    GAP_SLACK * (1.0 + p.f_star().abs())
}

fn gaps(trace: &RunTrace) -> impl Iterator<Item = (usize, f64)> + '_ {
    trace.rows.iter().map(|r| (r.k, r.gap.expect("known optimum")))
}

/// Dimensions 2..=50 with seeds 0..20.
fn quadratic_suite() -> Vec<Problem> {
    (0..20)
        .map(|i| {
            let n = 2 + i * 48 / 19;
            problem(&format!("[problem]\nkind = \"quadratic\"\ndim = {n}\n"), i as u64)
        })
        .collect()
}

fn bound_suite(method: MethodTag) -> Outcome {
    let suite = quadratic_suite();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (i, p) in suite.iter().enumerate() {
        let trace = run_method(p, method, 1000, p.default_l0()).map_err(|e| e.to_string())?;
        ensure(trace.len() == 1000 || trace.range_exhausted, || format!("problem {i}: run stopped early"))?;
        let l = p.l_true.unwrap();
        let r2 = p.r * p.r;
        for (k, gap) in gaps(&trace) {
            let n = k as f64;
            let bound = match method {
                MethodTag::Gradient => 2.0 * l * r2 / n,
                MethodTag::FastGradient => 8.0 * l * r2 / ((n + 1.0) * (n + 1.0)),
            };
            ensure(gap <= bound + slack(p), || format!("problem {i}, N = {k}: gap {gap:e} > bound {bound:e}"))?;
            if bound > 0.0 {
                worst = worst.max(gap / bound);
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("20 quadratics, N <= 1000, worst gap/bound {worst:.3}, {:.2} s", elapsed.as_secs_f64()))
}

fn criterion_1() -> Outcome {
    bound_suite(MethodTag::FastGradient)
}

fn criterion_2() -> Outcome {
    bound_suite(MethodTag::Gradient)
}

fn criterion_3() -> Outcome {
    let mut problems: Vec<Problem> = quadratic_suite().into_iter().step_by(4).collect();
    for (toml, seed) in [
        ("[problem]\nkind = \"quadratic\"\ndim = 10\nbox_half_width = 0.5\n", 11),
        ("[problem]\nkind = \"lasso\"\ndim = 10\nrows = 30\nlambda = 0.05\n", 10),
        ("[problem]\nkind = \"simplex_quadratic\"\ndim = 10\n", 4),
        ("[problem]\nkind = \"simplex_quadratic\"\ndim = 10\nprox = \"entropy\"\n", 4),
        ("[problem]\nkind = \"saddle\"\nn = 4\nm = 6\nmu = 0.5\ninner_delta = 1e-6\n", 1),
        ("[problem]\nkind = \"min_min\"\nouter_dim = 4\ninner_dim = 3\nmu = 0.1\ninner_delta = 1e-8\n", 2),
        ("[problem]\nkind = \"moreau\"\ndim = 5\nlambda = 1.0\nl = 2.0\ninner_delta = 1e-8\nx0 = 3.0\n", 0),
    ] {
        problems.push(problem(toml, seed));
    }
    let mut runs = 0;
    for p in &problems {
        let l = p.l_true.unwrap();
        for factor in [1e-3, 1.0, 1e3] {
            for method in [MethodTag::Gradient, MethodTag::FastGradient] {
                let l0 = l * factor;
                let trace = run_method(p, method, 300, l0).map_err(|e| e.to_string())?;
                let cap = 2.0 * l0.max(l);
                if let Some(row) = trace.rows.iter().find(|r| r.l > cap) {
                    return Err(format!("{} {method:?} L0 = {l0:e}: L_{} = {:e} > {cap:e}", p.name, row.k, row.l));
                }
                if method == MethodTag::FastGradient {
                    if let Some(k) = first_growth_violation(&trace, l0.max(l)) {
                        return Err(format!("{} L0 = {l0:e}: A_{k} below (k+1)^2 / (8 max(L0, L))", p.name));
                    }
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs, L0 scaled by 1e-3, 1, 1e3"))
}

// Optimum on a face of the box but not at a vertex.
const BOX: &str = "[problem]\nkind = \"quadratic\"\ndim = 10\nbox_half_width = 1.0\n";

fn criterion_4() -> Outcome {
    let dt = 1e-3;
    let o = Overrides { seed: Some(3), delta_tilde: Some(dt), ..Default::default() };
    let p = build_problem(&BenchmarkConfig::parse(BOX, "perturbed", &o).unwrap()).map_err(|e| e.to_string())?;
    let l = p.l_true.unwrap();
    let r2 = p.r * p.r;
    let s = slack(&p);
    let gd = run_method(&p, MethodTag::Gradient, 1000, l).map_err(|e| e.to_string())?;
    let fgm = run_method(&p, MethodTag::FastGradient, 1000, l).map_err(|e| e.to_string())?;
    for t in [&gd, &fgm] {
        if let Some(r) = t.rows.iter().find(|r| r.certified_delta_tilde > dt) {
            return Err(format!("{:?} k = {}: certified {:e} > {dt:e}", t.method, r.k, r.certified_delta_tilde));
        }
        ensure(t.rows.iter().any(|r| r.certified_delta_tilde > 0.5 * dt), || "no inexactness was injected".into())?;
    }
    for (k, gap) in gaps(&gd) {
        let bound = 2.0 * l * dt + 2.0 * l * r2 / k as f64;
        ensure(gap <= bound + s, || format!("gd N = {k}: gap {gap:e} > {bound:e}"))?;
    }
    let mut excess = Vec::new();
    for (k, gap) in gaps(&fgm) {
        let n = k as f64;
        let clean = 8.0 * l * r2 / ((n + 1.0) * (n + 1.0));
        let allowance = 8.0 * l * dt / (n + 1.0);
        ensure(gap - clean <= allowance + s, || format!("fgm N = {k}: excess {:e} > {allowance:e}", gap - clean))?;
        excess.push(allowance);
    }

    let o = Overrides { seed: Some(3), delta: Some(1e-4), ..Default::default() };
    let p = build_problem(&BenchmarkConfig::parse(BOX, "inexact", &o).unwrap()).map_err(|e| e.to_string())?;
    let s = slack(&p);
    let r2 = p.r * p.r;
    let fgm = run_method(&p, MethodTag::FastGradient, 1000, p.default_l0()).map_err(|e| e.to_string())?;
    let (mut delta_sum, mut dt_sum) = (0.0, 0.0);
    let mut term = Vec::new();
    for row in &fgm.rows {
        delta_sum += 2.0 * row.delta * row.a;
        dt_sum += row.delta_tilde.max(row.certified_delta_tilde);
        let t = delta_sum / row.a;
        let bound = (r2 + dt_sum) / row.a + t;
        let gap = row.gap.unwrap();
        ensure(gap <= bound + s, || format!("fgm delta run N = {}: gap {gap:e} > {bound:e}", row.k))?;
        term.push(t);
    }
    let n = term.len();
    ensure(term[n - 1] > 10.0 * term[9], || format!("delta term {:e} at N = {n} vs {:e} at N = 10", term[n - 1], term[9]))?;

    let gd = run_method(&p, MethodTag::Gradient, 1000, p.default_l0()).map_err(|e| e.to_string())?;
    let (mut weighted, mut dt_sum) = (0.0, 0.0);
    for row in &gd.rows {
        weighted += 2.0 * row.alpha * row.delta;
        dt_sum += row.delta_tilde.max(row.certified_delta_tilde);
        let floor = weighted / row.a;
        ensure((floor - 2e-4).abs() <= 1e-12, || format!("gd delta floor {floor:e} at N = {}", row.k))?;
        let bound = (r2 + dt_sum) / row.a + floor;
        let gap = row.gap.unwrap();
        ensure(gap <= bound + s, || format!("gd delta run N = {}: gap {gap:e} > {bound:e}", row.k))?;
    }
    Ok(format!(
        "delta~ = 1e-3: fgm allowance {:.2e} -> {:.2e}; delta = 1e-4: fgm delta term {:.2e} -> {:.2e}, gd floor 2e-4",
        excess[9],
        excess[excess.len() - 1],
        term[9],
        term[n - 1]
    ))
}

fn criterion_5() -> Outcome {
    let eps = 1e-2;
    let cap = universal_iteration_bound(0.0, 1.0, 1.0, eps).map_err(|e| e.to_string())? as usize;
    ensure(cap == 80_000, || format!("iteration cap {cap}"))?;
    let toml = format!(
        "[problem]\nkind = \"holder\"\nnu = 0.0\nl_nu = 2.0\nepsilon = {eps}\nx0 = {}\n",
        std::f64::consts::SQRT_2
    );
    let p = problem(&toml, 0);
    ensure((p.r - 1.0).abs() <= 1e-12, || format!("R = {}", p.r))?;
    let trace = run_method(&p, MethodTag::FastGradient, cap, 1.0).map_err(|e| e.to_string())?;
    let reached = gaps(&trace).find(|&(_, g)| g <= eps).map(|(k, _)| k);
    let Some(reached) = reached else {
        return Err(format!("gap above {eps} for all {} iterations", trace.len()));
    };
    let last = trace.rows.last().unwrap();
    let bound = p.r * p.r / last.a + eps / 2.0;
    let gap = last.gap.unwrap();
    ensure(gap <= bound, || format!("terminal gap {gap:e} > R^2/A_N + eps/2 = {bound:e}"))?;
    Ok(format!("gap <= 1e-2 at k = {reached} (cap {cap}); terminal N = {}, gap {gap:.2e} <= {bound:.2e}", trace.len()))
}

fn criterion_6() -> Outcome {
    let p = problem("[problem]\nkind = \"simplex_quadratic\"\ndim = 10\nconditional_gradient = true\n", 0);
    ensure(p.policy == SubproblemPolicy::FrankWolfe, || "not a linear-minimization run".into())?;
    let l = p.l_true.unwrap();
    let r2 = p.r * p.r;
    // max V(x, y) over the unit simplex under the Euclidean prox.
    let r_q_sq = 1.0;
    let trace = run_method(&p, MethodTag::FastGradient, 2000, l).map_err(|e| e.to_string())?;
    ensure(trace.rows.iter().all(|r| (r.delta_tilde - 2.0 * r_q_sq).abs() <= 1e-12), || format!("delta~ = {:e} is not 2 R_Q^2", trace.rows[0].delta_tilde))?;
    for (k, gap) in gaps(&trace) {
        let n = k as f64;
        let bound = 8.0 * l * r2 / ((n + 1.0) * (n + 1.0)) + 16.0 * l * r_q_sq / (n + 1.0);
        ensure(gap <= bound + slack(&p), || format!("N = {k}: gap {gap:e} > {bound:e}"))?;
    }
    Ok(format!("N = {}, final gap {:.2e}", trace.len(), trace.rows.last().unwrap().gap.unwrap()))
}

fn sandwich(name: &str, model: &dyn dlmodel::Model, obj: &ObjectiveSpec, opts: SandwichOptions, delta: f64) -> Result<(), String> {
    let rep = verify_sandwich_with(model, obj, &opts).map_err(|e| format!("{name}: {e}"))?;
    ensure(rep.samples == 500, || format!("{name}: {} samples", rep.samples))?;
    ensure(rep.passed, || format!("{name}: {rep:?}"))?;
    ensure(rep.delta <= delta, || format!("{name}: delta {:e} above declared {delta:e}", rep.delta))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 5;
    let q = random_quadratic(&mut rng, n);
    let smooth = SmoothModel::quadratic(q.clone());
    let obj = ObjectiveSpec::new(FeasibleSet::unconstrained(n)).with_function(Arc::new(q.clone()));
    sandwich("smooth", &smooth, &obj, SandwichOptions::new(q.lipschitz(), 500, 1), 0.0)?;

    let a = DMatrix::from_fn(8, n, |_, _| rng.random_range(-1.0..1.0));
    let b = Vector::from_fn(8, |_, _| rng.random_range(-1.0..1.0));
    let ls = LeastSquares::new(a, b).unwrap();
    let l1 = L1Norm { weight: 0.3 };
    let composite = CompositeModel::new(Arc::new(ls.clone()), Arc::new(l1), n, ls.lipschitz()).unwrap();
    let (f, h) = (ls.clone(), l1);
    let obj = ObjectiveSpec::new(FeasibleSet::unconstrained(n)).with_value(move |x| f.value(x) + h.value(x));
    sandwich("composite", &composite, &obj, SandwichOptions::new(ls.lipschitz(), 500, 2), 0.0)?;

    let inner: Vec<(Arc<dyn ConvexFunction>, f64)> = (0..3)
        .map(|_| {
            let q = random_quadratic(&mut rng, n);
            let l = q.lipschitz();
            (Arc::new(q) as Arc<dyn ConvexFunction>, l)
        })
        .collect();
    let sup = Arc::new(SuperpositionModel::new(Arc::new(MaxOuter), inner, n).unwrap());
    let exact = sup.clone();
    let obj = ObjectiveSpec::new(FeasibleSet::unconstrained(n)).with_value(move |x| exact.value(x));
    sandwich("superposition", sup.as_ref(), &obj, SandwichOptions::new(sup.l(), 500, 3), 0.0)?;

    for (i, l) in [0.1, 1.0, 10.0].into_iter().enumerate() {
        let f: Arc<dyn ConvexFunction> = Arc::new(L1Norm { weight: 1.0 });
        let model = ProxPointModel::new(f.clone(), n, l).unwrap();
        let obj = ObjectiveSpec::new(FeasibleSet::unconstrained(n)).with_function(f);
        sandwich(&format!("prox-point L = {l}"), &model, &obj, SandwichOptions::new(l, 500, 4 + i as u64), 0.0)?;
    }

    for nu in [0.0, 0.5] {
        let f = Arc::new(HolderPower::new(nu).unwrap());
        let l_nu = f.holder_constant_1d();
        let model = HolderModel::new(f.clone(), 1, nu, l_nu).unwrap();
        let obj = ObjectiveSpec::new(FeasibleSet::unconstrained(1)).with_function(f);
        for delta in [1e-1, 1e-3] {
            let l = holder_effective_l(nu, l_nu, delta).unwrap();
            let opts = SandwichOptions::new(l, 500, 8).delta_request(delta).radius(2.0);
            sandwich(&format!("holder nu = {nu}, delta = {delta}"), &model, &obj, opts, delta)?;
        }
    }

    for (name, toml, seed) in [
        ("min-min", "[problem]\nkind = \"min_min\"\nouter_dim = 4\ninner_dim = 3\nmu = 0.1\ninner_delta = 1e-8\n", 2),
        ("saddle", "[problem]\nkind = \"saddle\"\nn = 4\nm = 6\nmu = 0.5\ninner_delta = 1e-6\n", 1),
        ("saddle entropy", "[problem]\nkind = \"saddle\"\nn = 4\nm = 6\nmu = 0.5\nregularizer = \"entropy\"\ninner_delta = 1e-6\n", 1),
        ("moreau", "[problem]\nkind = \"moreau\"\ndim = 5\nlambda = 1.0\nl = 2.0\ninner_delta = 1e-8\n", 0),
    ] {
        let p = problem(toml, seed);
        let report = verify_sandwich(p.model.as_ref(), &p.objective, p.l_true.unwrap(), 500, 9).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("{name}: {report:?}"))?;
        ensure(report.delta > 0.0, || format!("{name}: no inexactness declared"))?;
    }
    Ok("smooth, composite, superposition, prox-point x3, holder x4, min-min, saddle x2, moreau at 500 samples".into())
}

/// `min_{x in Q} <h, x>` by vertex enumeration or the ball closed form.
fn support_min(set: &FeasibleSet, h: &Vector) -> f64 {
    match set {
        FeasibleSet::Box { lower, upper } => (0..1usize << h.len())
            .map(|mask| (0..h.len()).map(|i| h[i] * if mask >> i & 1 == 1 { upper[i] } else { lower[i] }).sum())
            .fold(f64::INFINITY, f64::min),
        FeasibleSet::Simplex { scale, .. } => h.iter().map(|v| v * scale).fold(f64::INFINITY, f64::min),
        FeasibleSet::Ball { center, radius } => h.dot(center) - radius * h.norm(),
        FeasibleSet::Unconstrained { .. } => unreachable!(),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = 5;
    let set = FeasibleSet::cube(n, 1.0).unwrap();
    let mut worst = 0.0f64;
    let mut checked = 0;
    let mut validate = |set: &FeasibleSet, x: &Vector, h: &Vector, dt: f64| -> Result<(), String> {
        let gap = support_min(set, h) - h.dot(x);
        checked += 1;
        ensure(dt >= 0.0 && gap >= -dt, || format!("certificate fails: min <h, x - x~> = {gap:e} < -{dt:e}"))
    };
    for i in 0..200 {
        let g = Vector::from_fn(n, |_, _| rng.random_range(-3.0..3.0));
        let z = set.project(&Vector::from_fn(n, |_, _| rng.random_range(-2.0..2.0)));
        let alpha = rng.random_range(0.01..5.0);
        let l1 = if i % 2 == 0 { 0.0 } else { rng.random_range(0.01..2.0) };
        let exact = solve_euclidean_closed_form(alpha, &g, &z, &set, (l1 > 0.0).then_some(l1)).unwrap();
        let squares: Vec<ScaledSquare> = z.iter().map(|&c| ScaledSquare { weight: 1.0, center: c }).collect();
        let slopes: Vec<LinearScalar> = g.iter().map(|&s| LinearScalar { slope: s }).collect();
        let abs = dlmodel::functions::L1Norm { weight: l1 };
        let abs = SeparableComponent(&abs);
        let sums: Vec<ScalarSum> = slopes.iter().map(|f| ScalarSum(vec![f as &dyn ScalarConvex, &abs])).collect();
        let psi: Vec<&dyn ScalarConvex> = sums.iter().map(|s| s as &dyn ScalarConvex).collect();
        let v: Vec<&dyn ScalarConvex> = squares.iter().map(|s| s as &dyn ScalarConvex).collect();
        let bis = solve_separable_bisection(alpha, &psi, &v, &vec![(-1.0, 1.0); n], 1e-12).unwrap();
        let diff = (&bis.solution - &exact.solution).amax();
        ensure(diff <= 1e-8, || format!("instance {i}: bisection differs by {diff:e}"))?;
        worst = worst.max(diff);
        validate(&set, &bis.solution, &bis.witness, bis.certified_delta_tilde)?;
        validate(&set, &exact.solution, &exact.witness, exact.certified_delta_tilde)?;
    }

    let sets = [
        FeasibleSet::cube(4, 1.0).unwrap(),
        FeasibleSet::simplex(4, 2.0).unwrap(),
        FeasibleSet::ball(Vector::from_element(4, 0.25), 1.5).unwrap(),
        FeasibleSet::simplex(4, 1.0).unwrap(),
    ];
    let policies = [
        (SubproblemPolicy::Auto, 0.0),
        (SubproblemPolicy::Iterative { max_iters: 50 }, 0.0),
        (SubproblemPolicy::FrankWolfe, 0.0),
        (SubproblemPolicy::Perturbed, 1e-3),
    ];
    for i in 0..120 {
        let set = &sets[i % 4];
        let z = set.project(&Vector::from_fn(4, |_, _| rng.random_range(-1.0..1.0)));
        let z = if matches!(set, FeasibleSet::Simplex { .. }) { (&z + set.center_point()) * 0.5 } else { z };
        let g = Vector::from_fn(4, |_, _| rng.random_range(-3.0..3.0));
        let psi = if i % 2 == 0 {
            Psi::Linear { gradient: g }
        } else {
            let h: Arc<dyn ConvexFunction> = Arc::new(L1Norm { weight: 0.5 });
            let at = h.value(&z);
            Psi::Composite { gradient: g, h, h_at_center: at }
        };
        let eval = ModelEvaluation { center: z.clone(), f_delta: 0.0, psi, delta: 0.0, l_hint: 1.0 };
        let alpha = rng.random_range(0.05..5.0);
        let mut proxes = vec![ProxSetup::Euclidean];
        if matches!(set, FeasibleSet::Simplex { scale, .. } if *scale == 1.0) {
            proxes.push(ProxSetup::Entropy);
        }
        for prox in &proxes {
            for (policy, target) in &policies {
                let sub = Subproblem::new(prox, set, &z, alpha, &eval);
                let cert = match solve_subproblem(&sub, policy, *target) {
                    Ok(c) => c,
                    Err(dlmodel::Error::Unsupported(_)) => continue,
                    Err(e) => return Err(format!("{policy:?}: {e}")),
                };
                let recomputed = certify(&cert.solution, &cert.witness, set).unwrap();
                ensure(recomputed <= cert.certified_delta_tilde, || {
                    format!("{policy:?}: reported {:e} below recomputed {recomputed:e}", cert.certified_delta_tilde)
                })?;
                validate(set, &cert.solution, &cert.witness, cert.certified_delta_tilde)?;
            }
        }
    }
    Ok(format!("200 instances, worst difference {worst:.1e}; {checked} certificates validated"))
}

/// One coordinate of a separable function as a scalar function.
struct SeparableComponent<'a>(&'a L1Norm);

impl ScalarConvex for SeparableComponent<'_> {
    fn value(&self, t: f64) -> f64 {
        dlmodel::functions::Separable::component_value(self.0, 0, t)
    }

    fn subdifferential(&self, t: f64) -> (f64, f64) {
        dlmodel::functions::Separable::component_subdifferential(self.0, 0, t)
    }

    fn kinks(&self) -> Vec<f64> {
        dlmodel::functions::Separable::component_kinks(self.0, 0)
    }
}

fn criterion_9() -> Outcome {
    let p = problem("[problem]\nkind = \"lasso\"\ndim = 10\nrows = 30\nlambda = 0.05\n", 10);
    let trace = run_method(&p, MethodTag::FastGradient, 2000, p.default_l0()).map_err(|e| e.to_string())?;
    let last = trace.rows.last().unwrap().clone();
    let value = last.f_output.unwrap();
    let diff = (value - p.f_star()).abs();
    ensure(diff <= 1e-6, || format!("F(x_N) = {value} vs reference {}", p.f_star()))?;
    let run = certify_method(&p, trace);
    ensure(run.report.passed(), || format!("{:?}", run.report))?;
    Ok(format!("|F(x_N) - F_ref| = {diff:.1e} at N = {}", last.k))
}

fn criterion_10() -> Outcome {
    let configs = [
        "[problem]\nkind = \"quadratic\"\ndim = 20\n[run]\nseed = 3\niters = 300\n",
        "[problem]\nkind = \"quadratic\"\ndim = 10\nbox_half_width = 0.5\n[run]\nseed = 11\niters = 300\ndelta_tilde = 1e-3\n",
        "[problem]\nkind = \"lasso\"\ndim = 10\nrows = 30\nlambda = 0.05\n[run]\nseed = 10\niters = 300\n",
        "[problem]\nkind = \"simplex_quadratic\"\ndim = 10\nprox = \"entropy\"\n[run]\nseed = 4\niters = 300\n",
        "[problem]\nkind = \"saddle\"\nn = 4\nm = 6\nmu = 0.5\ninner_delta = 1e-6\n[run]\nseed = 1\niters = 200\n",
    ];
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut files = 0;
    for (i, toml) in configs.iter().enumerate() {
        let name = format!("det{i}");
        let mut written = Vec::new();
        for dir in &dirs {
            let cfg = BenchmarkConfig::parse(toml, &name, &Overrides::default()).unwrap();
            let out = run_benchmark(&cfg).map_err(|e| e.to_string())?;
            written.push(emit_csv(&out.traces(), dir.path(), &name).map_err(|e| e.to_string())?);
        }
        for (a, b) in written[0].iter().zip(&written[1]) {
            let (x, y) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
            ensure(x == y, || format!("{} and {} differ", a.display(), b.display()))?;
            files += 1;
        }
    }
    Ok(format!("{files} CSV files byte-identical across two runs"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fast gradient bound on 20 quadratics", criterion_1),
        ("gradient bound on 20 quadratics", criterion_2),
        ("L cap and A growth under mis-set L0", criterion_3),
        ("error sensitivity to delta~ and delta", criterion_4),
        ("universal method on |x|", criterion_5),
        ("conditional gradient on the simplex", criterion_6),
        ("model sandwich suite", criterion_7),
        ("subproblem oracle equivalence", criterion_8),
        ("composite LASSO against reference", criterion_9),
        ("deterministic CSV output", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let line = match &outcome {
            Ok(detail) => format!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("FAIL {:>2} {name}: {why}", i + 1)
            }
        };
        writeln!(std::io::stdout(), "{line}").unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
