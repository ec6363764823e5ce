//! Benchmark harness for the gradient and fast gradient methods: problem
//! configurations, reference optima, bound certification, CSV tables and
//! SVG plots.

pub mod bench;
pub mod certify;
pub mod config;
pub mod csv;
pub mod error;
pub mod plot;
pub mod problems;
pub mod reference;

pub use bench::{run_benchmark, BenchmarkOutcome, MethodRun};
pub use certify::{certify_run, Check, CertificationReport};
pub use config::{BenchmarkConfig, MethodChoice, Overrides, ProblemSpec};
pub use csv::{emit_csv, parse_csv, trace_to_csv};
pub use error::{HarnessError, HarnessResult};
pub use plot::{emit_plot, render_svg, Series};
pub use problems::{build_problem, Problem};
