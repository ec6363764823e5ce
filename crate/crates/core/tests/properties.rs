mod common;

use common::QuadraticCase;
use dlmodel::geometry::strong_convexity_probe;
use dlmodel::subproblem::{
    certify, solve_euclidean_closed_form, solve_separable_bisection, solve_simplex_entropy, solve_subproblem,
    LinearScalar, ScalarConvex, ScaledSquare, Subproblem,
};
use dlmodel::{
    alpha_largest_root, verify_sandwich, FeasibleSet, ModelEvaluation, NormSpec, ProxSetup, Psi, SubproblemPolicy,
    Vector,
};
use proptest::prelude::*;

fn vec_in(n: usize, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(lo..hi, n)
}

fn simplex_point(raw: &[f64]) -> Vector {
    let v = Vector::from_iterator(raw.len(), raw.iter().map(|t| t + 1e-3));
    let s = v.sum();
    v / s
}

/// `w |t|`.
struct ScaledAbs(f64);

impl ScalarConvex for ScaledAbs {
    fn value(&self, t: f64) -> f64 {
        self.0 * t.abs()
    }

    fn subdifferential(&self, t: f64) -> (f64, f64) {
        if t > 0.0 {
            (self.0, self.0)
        } else if t < 0.0 {
            (-self.0, -self.0)
        } else {
            (-self.0, self.0)
        }
    }

    fn kinks(&self) -> Vec<f64> {
        vec![0.0]
    }
}

/// `min_{x in Q} <h, x>` by enumerating the vertices of a box or simplex,
/// or by the closed form for a ball.
fn support_min_oracle(set: &FeasibleSet, h: &Vector) -> f64 {
    match set {
        FeasibleSet::Box { lower, upper } => {
            let n = h.len();
            (0..1usize << n)
                .map(|mask| (0..n).map(|i| h[i] * if mask >> i & 1 == 1 { upper[i] } else { lower[i] }).sum())
                .fold(f64::INFINITY, f64::min)
        }
        FeasibleSet::Simplex { scale, .. } => h.iter().map(|v| v * scale).fold(f64::INFINITY, f64::min),
        FeasibleSet::Ball { center, radius } => h.dot(center) - radius * h.norm(),
        FeasibleSet::Unconstrained { .. } => unreachable!(),
    }
}

fn linear_eval(center: Vector, g: Vector) -> ModelEvaluation {
    ModelEvaluation { center, f_delta: 0.0, psi: Psi::Linear { gradient: g }, delta: 0.0, l_hint: 1.0 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn divergence_dominates_half_squared_distance(
        raw_x in vec_in(4, 0.0, 1.0),
        raw_y in vec_in(4, 0.0, 1.0),
        w in vec_in(4, 1.0, 5.0),
    ) {
        let (sx, sy) = (simplex_point(&raw_x), simplex_point(&raw_y));
        let x = Vector::from_vec(raw_x);
        let y = Vector::from_vec(raw_y);
        let weighted = ProxSetup::weighted(Vector::from_vec(w)).unwrap();
        for (prox, a, b) in [
            (ProxSetup::Euclidean, &x, &y),
            (weighted, &x, &y),
            (ProxSetup::Entropy, &sx, &sy),
        ] {
            let v = prox.bregman_divergence(a, b).unwrap();
            let half = 0.5 * prox.norm().norm(&(a - b)).powi(2);
            prop_assert!(v >= half - 1e-10, "{prox:?}: {v} < {half}");
            prop_assert!(prox.bregman_divergence(a, a).unwrap().abs() <= 1e-12);
            prop_assert!(strong_convexity_probe(&prox, &[(a.clone(), b.clone())]).unwrap());
        }
    }

    #[test]
    fn divergence_matches_closed_forms(raw_x in vec_in(5, 0.0, 1.0), raw_y in vec_in(5, 0.0, 1.0)) {
        let (x, y) = (simplex_point(&raw_x), simplex_point(&raw_y));
        let kl: f64 = x.iter().zip(y.iter()).map(|(a, b)| a * (a / b).ln()).sum();
        prop_assert!((ProxSetup::Entropy.bregman_divergence(&x, &y).unwrap() - kl).abs() <= 1e-10);
        let sq = 0.5 * (&x - &y).norm_squared();
        prop_assert!((ProxSetup::Euclidean.bregman_divergence(&x, &y).unwrap() - sq).abs() <= 1e-10);
    }

    #[test]
    fn dual_norm_bounds_inner_products(
        l in vec_in(4, -3.0, 3.0),
        v in vec_in(4, -3.0, 3.0),
        p in 1.0f64..6.0,
        w in vec_in(4, 0.5, 4.0),
    ) {
        let (l, v) = (Vector::from_vec(l), Vector::from_vec(v));
        for norm in [NormSpec::Euclidean, NormSpec::p(p).unwrap(), NormSpec::p(f64::INFINITY).unwrap(),
                     NormSpec::weighted(Vector::from_vec(w)).unwrap()] {
            let bound = norm.dual_norm(&l).unwrap() * norm.norm(&v);
            prop_assert!(l.dot(&v) <= bound * (1.0 + 1e-12) + 1e-12, "{norm:?}");
        }
    }

    #[test]
    fn alpha_root_satisfies_its_equation(a in 0.0f64..1e6, l in 1e-6f64..1e6) {
        let alpha = alpha_largest_root(a, l).unwrap();
        prop_assert!(alpha > 0.0);
        let residual = l * alpha * alpha - alpha - a;
        prop_assert!(residual.abs() <= 1e-12 * (l * alpha * alpha + alpha + a));
    }

    #[test]
    fn certificates_survive_independent_support_minimization(
        x in vec_in(4, -2.0, 2.0),
        h in vec_in(4, -3.0, 3.0),
        kind in 0usize..3,
    ) {
        let set = match kind {
            0 => FeasibleSet::cube(4, 1.0).unwrap(),
            1 => FeasibleSet::simplex(4, 2.0).unwrap(),
            _ => FeasibleSet::ball(Vector::from_element(4, 0.25), 1.5).unwrap(),
        };
        let x = set.project(&Vector::from_vec(x));
        let h = Vector::from_vec(h);
        let delta = certify(&x, &h, &set).unwrap();
        let min = support_min_oracle(&set, &h) - h.dot(&x);
        prop_assert!(delta >= 0.0);
        prop_assert!(min >= -delta, "min {min} < -{delta}");
    }

    #[test]
    fn inexact_solutions_satisfy_three_point_inequality(
        g in vec_in(3, -2.0, 2.0),
        z in vec_in(3, -1.0, 1.0),
        target in prop_oneof![Just(0.0), 1e-4f64..1e-1],
        alpha in 0.05f64..5.0,
        probe in vec_in(3, -1.0, 1.0),
    ) {
        let set = FeasibleSet::cube(3, 1.0).unwrap();
        let prox = ProxSetup::Euclidean;
        let z = Vector::from_vec(z);
        let eval = linear_eval(z.clone(), Vector::from_vec(g));
        let problem = Subproblem::new(&prox, &set, &z, alpha, &eval);
        let cert = solve_subproblem(&problem, &SubproblemPolicy::Perturbed, target).unwrap();
        let xt = &cert.solution;
        let dt = cert.certified_delta_tilde;
        prop_assert!(dt <= target + 1e-12);
        let x = Vector::from_vec(probe);
        let lhs = alpha * eval.psi_at(&x) + prox.bregman_divergence(&x, &z).unwrap();
        let rhs = alpha * eval.psi_at(xt) + prox.bregman_divergence(xt, &z).unwrap() + prox.bregman_divergence(&x, xt).unwrap() - dt;
        prop_assert!(lhs >= rhs - 1e-12 * (1.0 + lhs.abs()), "{lhs} < {rhs}");
    }

    #[test]
    fn entropy_solution_is_certified(
        g in vec_in(4, -3.0, 3.0),
        raw_z in vec_in(4, 0.0, 1.0),
        alpha in 0.01f64..10.0,
    ) {
        let set = FeasibleSet::simplex(4, 1.0).unwrap();
        let z = simplex_point(&raw_z);
        let g = Vector::from_vec(g);
        let cert = solve_simplex_entropy(alpha, &g, &z, &set).unwrap();
        prop_assert!(cert.certified_delta_tilde <= 1e-10);
        prop_assert!((cert.solution.sum() - 1.0).abs() <= 1e-12);
        let min = support_min_oracle(&set, &cert.witness) - cert.witness.dot(&cert.solution);
        prop_assert!(min >= -cert.certified_delta_tilde);
    }

    #[test]
    fn bisection_matches_closed_form(
        g in vec_in(5, -3.0, 3.0),
        z in vec_in(5, -2.0, 2.0),
        alpha in 0.01f64..5.0,
        l1 in prop_oneof![Just(0.0), 0.01f64..2.0],
    ) {
        let set = FeasibleSet::cube(5, 1.0).unwrap();
        let g = Vector::from_vec(g);
        let z = set.project(&Vector::from_vec(z));
        let exact = solve_euclidean_closed_form(alpha, &g, &z, &set, (l1 > 0.0).then_some(l1)).unwrap();

        let vs: Vec<ScaledSquare> = z.iter().map(|&c| ScaledSquare { weight: 1.0, center: c }).collect();
        let lin: Vec<LinearScalar> = g.iter().map(|&s| LinearScalar { slope: s }).collect();
        let abs = ScaledAbs(l1);
        let sums: Vec<dlmodel::subproblem::ScalarSum> =
            lin.iter().map(|f| dlmodel::subproblem::ScalarSum(vec![f as &dyn ScalarConvex, &abs])).collect();
        let psi: Vec<&dyn ScalarConvex> = sums.iter().map(|s| s as &dyn ScalarConvex).collect();
        let v: Vec<&dyn ScalarConvex> = vs.iter().map(|s| s as &dyn ScalarConvex).collect();
        let bounds = vec![(-1.0, 1.0); 5];
        let bis = solve_separable_bisection(alpha, &psi, &v, &bounds, 1e-12).unwrap();
        prop_assert!((&bis.solution - &exact.solution).amax() <= 1e-8);
        let min = support_min_oracle(&set, &bis.witness) - bis.witness.dot(&bis.solution);
        prop_assert!(min >= -bis.certified_delta_tilde);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn random_quadratic_models_sandwich_exactly(seed in 0u64..10_000, n in 1usize..12) {
        let case = QuadraticCase::random(n, seed);
        let report = verify_sandwich(&case.model(), &case.objective(), case.l, 100, seed).unwrap();
        prop_assert!(report.passed, "{report:?}");
        prop_assert_eq!(report.delta, 0.0);
    }
}
