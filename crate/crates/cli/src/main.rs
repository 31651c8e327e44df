use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ratarnoldi_cli::config::{
    LambdaChoice, LambdaPolicy, MaxIter, MethodName, ProblemSpec, Regularization, OUTPUT_ENV,
};
use ratarnoldi_cli::scenario::export_problem;
use ratarnoldi_cli::{
    build_problem, reproduce_table, run_scenario, sweep_lambda, CliError, Overrides, ScenarioConfig,
};

#[derive(Parser)]
#[command(
    name = "ratarnoldi",
    version,
    about = "Shift-and-invert Arnoldi experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        shift: ShiftArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Re-run one of the comparison tables (1, 2 or 3).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one problem for a list of shifts.
    Sweep {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "ra")]
        method: MethodName,
        /// Comma-separated shifts, e.g. 1e-4,1e-6,1e-8
        #[arg(long, value_delimiter = ',', required = true)]
        lambdas: Vec<f64>,
        #[arg(long, default_value = "second-difference")]
        regularization: Regularization,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Export a generated problem as Matrix Market files.
    Gen {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        export: PathBuf,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct ShiftArgs {
    /// Shift for every shifted method.
    #[arg(long)]
    lambda: Option<f64>,
    /// star | heuristic-point | heuristic-range-low | heuristic-range-high
    #[arg(long)]
    lambda_policy: Option<LambdaPolicy>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long)]
    noise_delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Positive integer or N (the problem dimension).
    #[arg(long)]
    max_iter: Option<MaxIter>,
    /// Output directory; defaults to $RATARNOLDI_OUT, then ./results.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProblemArgs {
    /// shaw | baart | gravity | foxgood | franke
    problem: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 15)]
    grid: usize,
    #[arg(long, default_value_t = 1.0)]
    shape: f64,
}

impl ProblemArgs {
    fn spec(&self) -> Result<ProblemSpec, CliError> {
        let mut text = format!(
            "problem.kind = {:?}\nproblem.grid = {}\nproblem.shape = {:?}\n",
            self.problem, self.grid, self.shape
        );
        if let Some(n) = self.n {
            text.push_str(&format!("problem.n = {n}\n"));
        }
        text.push_str("methods = [\"cg\"]\n");
        Ok(ScenarioConfig::from_toml_str(&text, std::path::Path::new("."))?.problem)
    }
}

fn default_out(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(ratarnoldi_cli::config::DEFAULT_OUTPUT_DIR))
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run {
            config,
            shift,
            common,
        } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            cfg.apply(&Overrides {
                lambda: match (shift.lambda, shift.lambda_policy) {
                    (Some(v), _) if !(v > 0.0 && v.is_finite()) => {
                        return Err(CliError::usage(
                            "--lambda",
                            format!("must be positive, got {v}"),
                        ))
                    }
                    (Some(v), _) => Some(LambdaChoice::Value(v)),
                    (None, p) => p.map(LambdaChoice::Policy),
                },
                noise_delta: common.noise_delta,
                seed: common.seed,
                max_iter: common.max_iter,
                output_dir: common.out,
            })?;
            let outcome = run_scenario(&cfg)?;
            for m in &outcome.summary.methods {
                match &m.error {
                    None => println!(
                        "{:<8} λ={:<10} err_min={:<12} res={:<12} nit={:<4} {:>8.1} ms",
                        m.method,
                        m.lambda_used.map_or("-".into(), |l| format!("{l:.3e}")),
                        m.err_min.map_or("-".into(), |e| format!("{e:.3e}")),
                        m.res_at_min.map_or("-".into(), |e| format!("{e:.3e}")),
                        m.nit.map_or("-".into(), |n| n.to_string()),
                        m.wall_time_ms
                    ),
                    Some(e) => println!("{:<8} failed: {e}", m.method),
                }
            }
            println!("wrote {}", outcome.output_dir.display());
            match outcome.summary.failures() {
                0 => Ok(()),
                k => Err(CliError::PartialFailure(k)),
            }
        }
        Command::Table { id, out } => {
            let (path, rows) = reproduce_table(id, &default_out(out))?;
            for r in &rows {
                println!(
                    "{:<13} {:<3} {:<7} {:<9} published {:<9.2e} measured {:<11} {}",
                    r.problem,
                    r.test.map_or(String::new(), |t| format!("#{t}")),
                    r.method,
                    r.lambda.map_or(String::new(), |l| format!("{l:.0e}")),
                    r.published_err,
                    r.measured_err.map_or("-".into(), |e| format!("{e:.2e}")),
                    r.status
                );
            }
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Sweep {
            problem,
            method,
            lambdas,
            regularization,
            common,
        } => {
            let spec = problem.spec()?;
            let noise = common
                .noise_delta
                .map(|d| ratarnoldi::NoiseSpec::new(d, common.seed.unwrap_or(0)))
                .transpose()
                .map_err(|e| CliError::usage("--noise-delta", e.to_string()))?;
            let prepared = build_problem(&spec, noise)?;
            let max_iter = common
                .max_iter
                .unwrap_or_default()
                .resolve(prepared.dimension());
            let outcome = sweep_lambda(
                &prepared,
                method,
                &lambdas,
                max_iter,
                regularization,
                &default_out(common.out),
            )?;
            for p in &outcome.points {
                match &p.error {
                    None => println!(
                        "λ={:<10.3e} err_min={:<12} nit={}",
                        p.lambda,
                        p.err_min.map_or("-".into(), |e| format!("{e:.3e}")),
                        p.nit.map_or("-".into(), |n| n.to_string())
                    ),
                    Some(e) => println!("λ={:<10.3e} failed: {e}", p.lambda),
                }
            }
            println!("wrote {}", outcome.curve_csv.display());
            match outcome.points.iter().filter(|p| p.error.is_some()).count() {
                0 => Ok(()),
                k => Err(CliError::PartialFailure(k)),
            }
        }
        Command::Gen { problem, export } => {
            let prepared = build_problem(&problem.spec()?, None)?;
            for path in export_problem(&prepared.problem, &export)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
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
            ExitCode::from(e.exit_code())
        }
    }
}
