use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dlmodel_cli::config::{BenchmarkConfig, MethodChoice, Overrides};
use dlmodel_cli::plot::outcome_series;
use dlmodel_cli::{emit_csv, emit_plot, run_benchmark, HarnessError, HarnessResult};

/// Benchmarks the gradient and fast gradient methods on (delta, L)-models.
#[derive(Parser)]
#[command(name = "dlmodel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the methods and write one CSV table per method.
    Run(Common),
    /// Run the methods and exit with status 4 if any bound check fails.
    Certify(Common),
    /// Run the methods and write an SVG of gaps against bounds.
    Plot(Common),
}

#[derive(Args)]
struct Common {
    /// Problem configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_enum)]
    method: Option<MethodChoice>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    l0: Option<f64>,
    /// Constant model inexactness to inject.
    #[arg(long)]
    delta: Option<f64>,
    /// Constant subproblem inexactness to inject.
    #[arg(long)]
    delta_tilde: Option<f64>,
    /// Seed for the random problem data.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> HarnessResult<BenchmarkConfig> {
        let overrides = Overrides {
            method: self.method,
            iters: self.iters,
            l0: self.l0,
            seed: self.seed,
            delta: self.delta,
            delta_tilde: self.delta_tilde,
            out: self.out.clone(),
        };
        BenchmarkConfig::load(&self.config, &overrides)
    }
}

fn execute(cli: Cli) -> HarnessResult<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let outcome = run_benchmark(&cfg)?;
            print!("{}", outcome.summary());
            for path in emit_csv(&outcome.traces(), &cfg.out, &cfg.name)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Certify(args) => {
            let cfg = args.load()?;
            let outcome = run_benchmark(&cfg)?;
            print!("{}", outcome.summary());
            if outcome.passed() {
                Ok(())
            } else {
                Err(HarnessError::Certification(format!("{}: at least one check failed", cfg.name)))
            }
        }
        Command::Plot(args) => {
            let cfg = args.load()?;
            let outcome = run_benchmark(&cfg)?;
            let (series, warnings) = outcome_series(&outcome);
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let path = cfg.out.join(format!("{}.svg", cfg.name));
            emit_plot(&cfg.name, &series, &path)?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
