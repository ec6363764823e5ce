//! Gradient and fast gradient methods driven by inexact (delta, L)-models.
//!
//! A model supplies, at each point `y`, a value `F_d(y)` and a convex
//! function `psi(., y)` that sandwich the objective up to `L/2 |x - y|^2 + delta`.
//! The methods adapt `L` by backtracking and solve their Bregman
//! subproblems inexactly, with certificates for the achieved accuracy.

pub mod error;
pub mod fgm;
pub mod functions;
pub mod gd;
pub mod geometry;
pub mod method;
pub mod models;
pub mod oracle;
pub mod subproblem;
pub mod tolerances;
pub mod trace;

/// A point of R^n.
pub type Vector = nalgebra::DVector<f64>;

pub use error::{Error, Result};
pub use fgm::{alpha_largest_root, check_sequence_growth, fgm_bound, fgm_run};
pub use gd::{gd_bound, gd_run};
pub use geometry::{NormSpec, ProxSetup};
pub use method::{DeltaSchedule, DeltaTildeSchedule, MethodConfig};
pub use oracle::{verify_sandwich, Model, ModelEvaluation, ObjectiveSpec, Psi};
pub use subproblem::{FeasibleSet, SubproblemCertificate, SubproblemPolicy};
pub use trace::{MethodTag, RunTrace, TraceRow};
