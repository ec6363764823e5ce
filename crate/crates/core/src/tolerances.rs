//! Numerical tolerances used across the crate, collected in one place.

/// Slack for the 1-strong-convexity probe of a prox-function.
pub const STRONG_CONVEXITY: f64 = 1e-10;

/// Lower-side slack of the model sandwich check.
pub const SANDWICH_LOWER: f64 = 1e-9;

/// Upper-side slack of the model sandwich check (added on top of delta).
pub const SANDWICH_UPPER: f64 = 1e-9;

/// Closed-form subproblem certificates must not exceed this value.
pub const CLOSED_FORM_CERTIFICATE: f64 = 1e-12;

/// Target used by iterative subproblem solvers when the schedule asks for
/// an exact solve.
pub const ITERATIVE_FLOOR: f64 = 1e-10;

/// Floor applied to simplex coordinates before taking logarithms.
pub const ENTROPY_FLOOR: f64 = 1e-16;

/// Feasibility slack for membership tests.
pub const MEMBERSHIP: f64 = 1e-9;

/// Relative rounding allowance for the backtracking exit test, in units of
/// machine epsilon times the magnitude of the compared terms.
pub const EXIT_TEST_ULPS: f64 = 8.0;

/// Maximum number of doublings of L within one backtracking loop.
pub const BACKTRACK_CAP: u32 = 60;
