//! Experiment runner for the `ratarnoldi` solvers: scenario files, table
//! reproduction, λ sweeps and problem export.

pub mod config;
pub mod error;
pub mod output;
pub mod scenario;
pub mod sweep;
pub mod table;

pub use config::{LambdaChoice, LambdaPolicy, MethodName, MethodSpec, Overrides, ScenarioConfig};
pub use error::{CliError, Result};
pub use scenario::{build_problem, run_scenario, ScenarioOutcome, ScenarioSummary};
pub use sweep::{sweep_lambda, SweepOutcome, SweepPoint};
pub use table::{reproduce_table, TableRow};
