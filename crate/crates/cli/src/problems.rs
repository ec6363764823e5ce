//! The shipped problem families and their reference optima.

use std::sync::Arc;

use dlmodel::functions::{ConvexFunction, HolderPower, L1Norm, LeastSquares, Quadratic};
use dlmodel::models::{
    bregman_radius_sq, frank_wolfe_deltatilde, CompositeModel, HolderModel, InexactGradientModel, JointObjective,
    MinMinModel, MoreauModel, SaddleModel, SaddleRegularizer, SmoothModel,
};
use dlmodel::subproblem::project_simplex;
use dlmodel::{
    DeltaSchedule, DeltaTildeSchedule, FeasibleSet, MethodConfig, Model, ObjectiveSpec, ProxSetup, SubproblemPolicy,
    Vector,
};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{BenchmarkConfig, ProblemSpec, ProxChoice, RegularizerChoice};
use crate::error::{config, HarnessResult};
use crate::reference::{lasso_coordinate_descent, projected_accelerated};

const REFERENCE_TOL: f64 = 1e-13;
const REFERENCE_ITERS: usize = 1_000_000;

/// A problem instance ready to be run by either method.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub model: Arc<dyn Model>,
    pub objective: ObjectiveSpec,
    pub set: FeasibleSet,
    pub prox: ProxSetup,
    pub x0: Vector,
    /// The model's declared constant in the prox norm; `None` when it
    /// depends on the requested accuracy.
    pub l_true: Option<f64>,
    /// `R` with `R^2 = V(x_*, x_0)`.
    pub r: f64,
    pub delta: DeltaSchedule,
    pub delta_tilde: DeltaTildeSchedule,
    pub policy: SubproblemPolicy,
}

impl Problem {
    pub fn f_star(&self) -> f64 {
        self.objective.optimal_value().expect("shipped problems know their optimum")
    }

    /// Method settings for `iterations` steps from `x0`.
    pub fn method_config(&self, iterations: usize, l0: f64) -> MethodConfig {
        MethodConfig::new(self.x0.clone(), self.set.clone(), iterations, l0)
            .with_prox(self.prox.clone())
            .with_delta(self.delta)
            .with_delta_tilde(self.delta_tilde)
            .with_policy(self.policy.clone())
            .with_record_points(false)
    }

    /// The configured `L0`, else the model constant, else 1.
    pub fn default_l0(&self) -> f64 {
        self.l_true.unwrap_or(1.0)
    }
}

fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
}

fn top_eigenvalue(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m).eigenvalues.max().max(0.0)
}

/// A random positive definite quadratic `x^T A x / 2 - b^T x` with
/// `A = M^T M / n + 0.01 I`.
pub fn random_quadratic(rng: &mut ChaCha8Rng, n: usize) -> Quadratic {
    let m = uniform(rng, n, n);
    let a = m.transpose() * &m / n as f64 + DMatrix::identity(n, n) * 0.01;
    let a = (&a + a.transpose()) * 0.5;
    let b = uniform_vec(rng, n);
    Quadratic::new(a, b).expect("symmetric by construction")
}

fn radius(prox: &ProxSetup, x_star: &Vector, x0: &Vector) -> HarnessResult<f64> {
    Ok(prox.bregman_divergence(x_star, x0)?.max(0.0).sqrt())
}

/// Builds the configured problem. Random data is drawn from `cfg.seed`.
pub fn build_problem(cfg: &BenchmarkConfig) -> HarnessResult<Problem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if cfg.delta > 0.0 {
        let ok = matches!(&cfg.problem, ProblemSpec::Quadratic(q) if q.box_half_width.is_some());
        if !ok {
            return config("delta injection needs a quadratic problem with box_half_width");
        }
    }
    let mut problem = match &cfg.problem {
        ProblemSpec::Quadratic(p) => {
            let q = random_quadratic(&mut rng, p.dim);
            let mut x0 = uniform_vec(&mut rng, p.dim);
            let l = q.lipschitz();
            let f: Arc<dyn ConvexFunction> = Arc::new(q.clone());
            let (set, model, x_star): (FeasibleSet, Arc<dyn Model>, Vector) = match p.box_half_width {
                None => {
                    let x_star = q.minimizer().expect("positive definite by construction");
                    (FeasibleSet::unconstrained(p.dim), Arc::new(SmoothModel::quadratic(q.clone())), x_star)
                }
                Some(w) => {
                    let set = FeasibleSet::cube(p.dim, w)?;
                    x0 = set.project(&x0);
                    let x_star = projected_accelerated(
                        |x| q.subgradient(x),
                        |x| q.value(x),
                        |x| set.project(x),
                        &x0,
                        l,
                        REFERENCE_TOL,
                        REFERENCE_ITERS,
                    );
                    let model: Arc<dyn Model> = if cfg.delta > 0.0 {
                        let dir = uniform_vec(&mut rng, p.dim);
                        Arc::new(InexactGradientModel::new(f.clone(), l, set.clone(), dir)?)
                    } else {
                        Arc::new(SmoothModel::quadratic(q.clone()).on(set.clone())?)
                    };
                    (set, model, x_star)
                }
            };
            let f_star = f.value(&x_star);
            let prox = ProxSetup::Euclidean;
            Problem {
                name: cfg.name.clone(),
                model,
                objective: ObjectiveSpec::new(set.clone()).with_function(f).with_optimum(x_star.clone(), f_star),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: Some(l),
                delta: DeltaSchedule::Zero,
                delta_tilde: DeltaTildeSchedule::Zero,
                policy: SubproblemPolicy::Auto,
            }
        }
        ProblemSpec::Lasso(p) => {
            let a = uniform(&mut rng, p.rows, p.dim) / (p.rows as f64).sqrt();
            let truth = Vector::from_fn(p.dim, |i, _| if i % 3 == 0 { rng.random_range(-2.0..2.0) } else { 0.0 });
            let noise = uniform_vec(&mut rng, p.rows) * 0.05;
            let b = &a * truth + noise;
            let ls = LeastSquares::new(a.clone(), b.clone())?;
            let l = ls.lipschitz();
            let h = Arc::new(L1Norm { weight: p.lambda });
            let model = CompositeModel::new(Arc::new(ls.clone()), h.clone(), p.dim, l)?;
            let x_star = lasso_coordinate_descent(&a, &b, p.lambda, 1e-15, REFERENCE_ITERS);
            let value = move |x: &Vector| ls.value(x) + h.value(x);
            let f_star = value(&x_star);
            let x0 = Vector::zeros(p.dim);
            let set = FeasibleSet::unconstrained(p.dim);
            let prox = ProxSetup::Euclidean;
            Problem {
                name: cfg.name.clone(),
                model: Arc::new(model),
                objective: ObjectiveSpec::new(set.clone()).with_value(value).with_optimum(x_star.clone(), f_star),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: Some(l),
                delta: DeltaSchedule::Zero,
                delta_tilde: DeltaTildeSchedule::Zero,
                policy: SubproblemPolicy::Auto,
            }
        }
        ProblemSpec::Holder(p) => {
            let f = Arc::new(HolderPower::new(p.nu)?);
            let model = HolderModel::new(f.clone(), p.dim, p.nu, p.l_nu)?;
            let set = FeasibleSet::unconstrained(p.dim);
            let x0 = Vector::from_element(p.dim, p.x0);
            let x_star = Vector::zeros(p.dim);
            let prox = ProxSetup::Euclidean;
            Problem {
                name: cfg.name.clone(),
                model: Arc::new(model),
                objective: ObjectiveSpec::new(set.clone()).with_function(f).with_optimum(x_star.clone(), 0.0),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: None,
                delta: DeltaSchedule::Universal { epsilon: p.epsilon },
                delta_tilde: DeltaTildeSchedule::Zero,
                policy: SubproblemPolicy::Auto,
            }
        }
        ProblemSpec::SimplexQuadratic(p) => {
            let q = random_quadratic(&mut rng, p.dim);
            let set = FeasibleSet::simplex(p.dim, 1.0)?;
            let x0 = set.center_point();
            let l2 = q.lipschitz();
            let x_star = projected_accelerated(
                |x| q.subgradient(x),
                |x| q.value(x),
                |x| project_simplex(x, 1.0),
                &x0,
                l2,
                REFERENCE_TOL,
                REFERENCE_ITERS,
            );
            let f_star = q.value(&x_star);
            let (prox, l) = match p.prox {
                ProxChoice::Euclidean => (ProxSetup::Euclidean, l2),
                // Constant in the l1 norm: x^T A x <= max |A_ij| |x|_1^2.
                ProxChoice::Entropy => (ProxSetup::Entropy, q.a.amax()),
            };
            let (delta_tilde, policy) = if p.conditional_gradient {
                let r_q_sq = bregman_radius_sq(&prox, &set)?;
                (DeltaTildeSchedule::Constant(frank_wolfe_deltatilde(r_q_sq)?), SubproblemPolicy::FrankWolfe)
            } else {
                (DeltaTildeSchedule::Zero, SubproblemPolicy::Auto)
            };
            Problem {
                name: cfg.name.clone(),
                model: Arc::new(SmoothModel::quadratic(q.clone()).on(set.clone())?),
                objective: ObjectiveSpec::new(set.clone())
                    .with_function(Arc::new(q))
                    .with_optimum(x_star.clone(), f_star),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: Some(l),
                delta: DeltaSchedule::Zero,
                delta_tilde,
                policy,
            }
        }
        ProblemSpec::Saddle(p) => {
            let a = uniform(&mut rng, p.n, p.m);
            let b = uniform_vec(&mut rng, p.n);
            let reg = match p.regularizer {
                RegularizerChoice::Euclidean => SaddleRegularizer::Euclidean,
                RegularizerChoice::Entropy => SaddleRegularizer::Entropy,
            };
            let set = FeasibleSet::cube(p.n, p.box_half_width)?;
            let model = SaddleModel::new(a.clone(), b.clone(), p.mu, reg, p.inner_delta)?.on(set.clone())?;
            let x0 = set.center_point();
            let x_star = projected_accelerated(
                |x| &b - &a * model.maximizer(x),
                |x| model.value(x),
                |x| set.project(x),
                &x0,
                model.l(),
                REFERENCE_TOL,
                REFERENCE_ITERS,
            );
            let f_star = model.value(&x_star);
            let l = model.declared().1;
            let exact = model.clone();
            let prox = ProxSetup::Euclidean;
            Problem {
                name: cfg.name.clone(),
                model: Arc::new(model),
                objective: ObjectiveSpec::new(set.clone())
                    .with_value(move |x| exact.value(x))
                    .with_optimum(x_star.clone(), f_star),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: Some(l),
                delta: DeltaSchedule::Zero,
                delta_tilde: DeltaTildeSchedule::Zero,
                policy: SubproblemPolicy::Auto,
            }
        }
        ProblemSpec::MinMin(p) => {
            let obj = CoupledDistance::random(&mut rng, p.inner_dim, p.outer_dim, p.mu);
            let l = obj.joint_lipschitz();
            let obj = Arc::new(obj);
            let inner = FeasibleSet::cube(p.inner_dim, 1.0)?;
            let model = MinMinModel::new(obj.clone(), inner, l, p.inner_delta)?;
            let set = FeasibleSet::unconstrained(p.outer_dim);
            let x0 = Vector::zeros(p.outer_dim);
            let reference = obj.clone();
            let x_star = projected_accelerated(
                |x| reference.outer_gradient(x),
                |x| reference.outer_value(x),
                |x| x.clone(),
                &x0,
                reference.outer_lipschitz(),
                REFERENCE_TOL,
                REFERENCE_ITERS,
            );
            let f_star = obj.outer_value(&x_star);
            let declared = model.declared().1;
            let prox = ProxSetup::Euclidean;
            Problem {
                name: cfg.name.clone(),
                model: Arc::new(model),
                objective: ObjectiveSpec::new(set.clone())
                    .with_value(move |x| obj.outer_value(x))
                    .with_optimum(x_star.clone(), f_star),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: Some(declared),
                delta: DeltaSchedule::Zero,
                delta_tilde: DeltaTildeSchedule::Zero,
                policy: SubproblemPolicy::Auto,
            }
        }
        ProblemSpec::Moreau(p) => {
            let model = MoreauModel::new(p.dim, p.lambda, p.l, p.inner_delta)?;
            let set = FeasibleSet::unconstrained(p.dim);
            let x0 = Vector::from_element(p.dim, p.x0);
            let x_star = Vector::zeros(p.dim);
            let exact = model.clone();
            let prox = ProxSetup::Euclidean;
            Problem {
                name: cfg.name.clone(),
                model: Arc::new(model),
                objective: ObjectiveSpec::new(set.clone())
                    .with_value(move |x| exact.value(x))
                    .with_optimum(x_star.clone(), 0.0),
                r: radius(&prox, &x_star, &x0)?,
                set,
                prox,
                x0,
                l_true: Some(p.l),
                delta: DeltaSchedule::Zero,
                delta_tilde: DeltaTildeSchedule::Zero,
                policy: SubproblemPolicy::Auto,
            }
        }
    };
    if cfg.delta > 0.0 {
        problem.delta = DeltaSchedule::Constant(cfg.delta);
    }
    if cfg.delta_tilde > 0.0 {
        if !problem.set.is_bounded() {
            return config("delta_tilde injection needs a bounded feasible set");
        }
        if problem.policy != SubproblemPolicy::Auto {
            return config("delta_tilde injection conflicts with conditional_gradient");
        }
        problem.delta_tilde = DeltaTildeSchedule::Constant(cfg.delta_tilde);
        problem.policy = SubproblemPolicy::Perturbed;
    }
    Ok(problem)
}

/// `F(y, x) = |y - B x|^2 / 2 + mu |x|^2 / 2 + <c, x>`, jointly convex with
/// Lipschitz gradient. Over `y` in the cube `[-1, 1]^m` its minimum is
/// `dist(B x, cube)^2 / 2 + mu |x|^2 / 2 + <c, x>`.
#[derive(Debug, Clone)]
pub struct CoupledDistance {
    pub b: DMatrix<f64>,
    pub c: Vector,
    pub mu: f64,
}

impl CoupledDistance {
    pub fn random(rng: &mut ChaCha8Rng, inner_dim: usize, outer_dim: usize, mu: f64) -> Self {
        Self { b: uniform(rng, inner_dim, outer_dim) * 2.0, c: uniform_vec(rng, outer_dim), mu }
    }

    /// Largest eigenvalue of the joint Hessian `[[I, -B], [-B^T, B^T B + mu I]]`.
    pub fn joint_lipschitz(&self) -> f64 {
        let (m, n) = self.b.shape();
        let mut h = DMatrix::zeros(m + n, m + n);
        h.view_mut((0, 0), (m, m)).fill_with_identity();
        h.view_mut((0, m), (m, n)).copy_from(&(-&self.b));
        h.view_mut((m, 0), (n, m)).copy_from(&(-self.b.transpose()));
        let btb = self.b.transpose() * &self.b + DMatrix::identity(n, n) * self.mu;
        h.view_mut((m, m), (n, n)).copy_from(&btb);
        top_eigenvalue(h)
    }

    fn clip(&self, x: &Vector) -> Vector {
        (&self.b * x).map(|v| v.clamp(-1.0, 1.0))
    }

    /// `min_y F(y, x)` in closed form.
    pub fn outer_value(&self, x: &Vector) -> f64 {
        let bx = &self.b * x;
        0.5 * (&bx - self.clip(x)).norm_squared() + 0.5 * self.mu * x.norm_squared() + self.c.dot(x)
    }

    pub fn outer_gradient(&self, x: &Vector) -> Vector {
        self.b.transpose() * (&self.b * x - self.clip(x)) + x * self.mu + &self.c
    }

    pub fn outer_lipschitz(&self) -> f64 {
        top_eigenvalue(self.b.transpose() * &self.b) + self.mu
    }
}

impl JointObjective for CoupledDistance {
    fn inner_dim(&self) -> usize {
        self.b.nrows()
    }

    fn outer_dim(&self) -> usize {
        self.b.ncols()
    }

    fn value(&self, y: &Vector, x: &Vector) -> f64 {
        0.5 * (y - &self.b * x).norm_squared() + 0.5 * self.mu * x.norm_squared() + self.c.dot(x)
    }

    fn grad_y(&self, y: &Vector, x: &Vector) -> Vector {
        y - &self.b * x
    }

    fn grad_x(&self, y: &Vector, x: &Vector) -> Vector {
        self.b.transpose() * (&self.b * x - y) + x * self.mu + &self.c
    }
}
