//! Benchmark configuration files.
//!
//! A configuration is a TOML document with a `[problem]` table selecting
//! one of the shipped problem families by `kind`, and an optional `[run]`
//! table with method settings. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{config, HarnessError, HarnessResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Gd,
    Fgm,
    Both,
}

impl MethodChoice {
    pub fn tags(self) -> Vec<dlmodel::MethodTag> {
        use dlmodel::MethodTag::*;
        match self {
            MethodChoice::Gd => vec![Gradient],
            MethodChoice::Fgm => vec![FastGradient],
            MethodChoice::Both => vec![Gradient, FastGradient],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProxChoice {
    Euclidean,
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegularizerChoice {
    Euclidean,
    Entropy,
}

fn one() -> f64 {
    1.0
}

fn one_dim() -> usize {
    1
}

fn euclidean() -> ProxChoice {
    ProxChoice::Euclidean
}

fn euclidean_reg() -> RegularizerChoice {
    RegularizerChoice::Euclidean
}

/// Random positive definite quadratic, optionally on a box.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadraticSpec {
    pub dim: usize,
    /// Half-width of the feasible cube; unconstrained when absent.
    pub box_half_width: Option<f64>,
}

/// `|A x - b|^2 / 2 + lambda |x|_1` with random data.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LassoSpec {
    pub dim: usize,
    pub rows: usize,
    pub lambda: f64,
}

/// `sum |x_i|^(1 + nu) / (1 + nu)` under the universal schedule.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HolderSpec {
    #[serde(default = "one_dim")]
    pub dim: usize,
    pub nu: f64,
    /// Holder constant of the gradient.
    pub l_nu: f64,
    pub epsilon: f64,
    /// Value of every coordinate of the starting point.
    #[serde(default = "one")]
    pub x0: f64,
}

/// Random positive definite quadratic on the unit simplex.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexQuadraticSpec {
    pub dim: usize,
    #[serde(default = "euclidean")]
    pub prox: ProxChoice,
    /// Replace the Bregman step by linear minimization.
    #[serde(default)]
    pub conditional_gradient: bool,
}

/// `max_y <x, b - A y> - phi(y)` over a box of `x`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaddleSpec {
    pub n: usize,
    pub m: usize,
    pub mu: f64,
    #[serde(default = "euclidean_reg")]
    pub regularizer: RegularizerChoice,
    pub inner_delta: f64,
    #[serde(default = "one")]
    pub box_half_width: f64,
}

/// `min_{y in [-1, 1]^m} |y - B x|^2 / 2 + mu |x|^2 / 2 + <c, x>`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinMinSpec {
    pub outer_dim: usize,
    pub inner_dim: usize,
    pub mu: f64,
    pub inner_delta: f64,
}

/// Moreau envelope of `lambda |.|_1` with parameter `l`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoreauSpec {
    pub dim: usize,
    pub lambda: f64,
    pub l: f64,
    pub inner_delta: f64,
    #[serde(default = "one")]
    pub x0: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemSpec {
    Quadratic(QuadraticSpec),
    Lasso(LassoSpec),
    Holder(HolderSpec),
    SimplexQuadratic(SimplexQuadraticSpec),
    Saddle(SaddleSpec),
    MinMin(MinMinSpec),
    Moreau(MoreauSpec),
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunTable {
    pub method: Option<MethodChoice>,
    pub iters: Option<usize>,
    pub l0: Option<f64>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub delta_tilde: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    name: Option<String>,
    problem: ProblemSpec,
    #[serde(default)]
    run: RunTable,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub method: Option<MethodChoice>,
    pub iters: Option<usize>,
    pub l0: Option<f64>,
    pub seed: Option<u64>,
    pub delta: Option<f64>,
    pub delta_tilde: Option<f64>,
    pub out: Option<PathBuf>,
}

/// A validated benchmark configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub name: String,
    pub problem: ProblemSpec,
    pub method: MethodChoice,
    pub iters: usize,
    /// Initial trial constant; the problem's `L` when absent.
    pub l0: Option<f64>,
    /// Seed for the random problem data.
    pub seed: u64,
    /// Constant model inexactness `delta` to inject.
    pub delta: f64,
    /// Constant subproblem inexactness `delta~` to inject.
    pub delta_tilde: f64,
    pub out: PathBuf,
}

impl BenchmarkConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> HarnessResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("problem");
        Self::parse(&text, stem, overrides)
    }

    /// Parses a configuration document; `default_name` names the run when
    /// the document has no `name`.
    pub fn parse(text: &str, default_name: &str, overrides: &Overrides) -> HarnessResult<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        let run = file.run;
        let cfg = Self {
            name: file.name.unwrap_or_else(|| default_name.to_string()),
            problem: file.problem,
            method: overrides.method.or(run.method).unwrap_or(MethodChoice::Both),
            iters: overrides.iters.or(run.iters).unwrap_or(100),
            l0: overrides.l0.or(run.l0),
            seed: overrides.seed.or(run.seed).unwrap_or(0),
            delta: overrides.delta.or(run.delta).unwrap_or(0.0),
            delta_tilde: overrides.delta_tilde.or(run.delta_tilde).unwrap_or(0.0),
            out: overrides.out.clone().or(run.out).unwrap_or_else(|| PathBuf::from("out")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> HarnessResult<()> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c)) {
            return config(format!("name {:?} must be nonempty and use only [A-Za-z0-9._-]", self.name));
        }
        if let Some(l0) = self.l0 {
            if !(l0.is_finite() && l0 > 0.0) {
                return config(format!("l0 = {l0} must be positive"));
            }
        }
        if !(self.delta.is_finite() && self.delta >= 0.0) {
            return config(format!("delta = {} must be nonnegative", self.delta));
        }
        if !(self.delta_tilde.is_finite() && self.delta_tilde >= 0.0) {
            return config(format!("delta_tilde = {} must be nonnegative", self.delta_tilde));
        }
        let positive = |what: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                config(format!("{what} = {v} must be positive"))
            }
        };
        let nonzero = |what: &str, v: usize| if v > 0 { Ok(()) } else { config(format!("{what} must be at least 1")) };
        match &self.problem {
            ProblemSpec::Quadratic(p) => {
                nonzero("dim", p.dim)?;
                if let Some(w) = p.box_half_width {
                    positive("box_half_width", w)?;
                }
            }
            ProblemSpec::Lasso(p) => {
                nonzero("dim", p.dim)?;
                nonzero("rows", p.rows)?;
                if !(p.lambda.is_finite() && p.lambda >= 0.0) {
                    return config(format!("lambda = {} must be nonnegative", p.lambda));
                }
            }
            ProblemSpec::Holder(p) => {
                nonzero("dim", p.dim)?;
                if !(0.0..=1.0).contains(&p.nu) {
                    return config(format!("nu = {} must lie in [0, 1]", p.nu));
                }
                positive("l_nu", p.l_nu)?;
                positive("epsilon", p.epsilon)?;
                if !p.x0.is_finite() {
                    return config("x0 must be finite");
                }
            }
            ProblemSpec::SimplexQuadratic(p) => {
                if p.dim < 2 {
                    return config("simplex dim must be at least 2");
                }
                if p.conditional_gradient && p.prox != ProxChoice::Euclidean {
                    return config("conditional_gradient uses the euclidean prox");
                }
            }
            ProblemSpec::Saddle(p) => {
                nonzero("n", p.n)?;
                nonzero("m", p.m)?;
                positive("mu", p.mu)?;
                positive("inner_delta", p.inner_delta)?;
                positive("box_half_width", p.box_half_width)?;
            }
            ProblemSpec::MinMin(p) => {
                nonzero("outer_dim", p.outer_dim)?;
                nonzero("inner_dim", p.inner_dim)?;
                positive("mu", p.mu)?;
                positive("inner_delta", p.inner_delta)?;
            }
            ProblemSpec::Moreau(p) => {
                nonzero("dim", p.dim)?;
                positive("l", p.l)?;
                positive("inner_delta", p.inner_delta)?;
                if !(p.lambda.is_finite() && p.lambda >= 0.0) {
                    return config(format!("lambda = {} must be nonnegative", p.lambda));
                }
                if !p.x0.is_finite() {
                    return config("x0 must be finite");
                }
            }
        }
        Ok(())
    }
}
