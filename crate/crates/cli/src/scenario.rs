//! Running configured scenarios and writing their outputs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use ratarnoldi::analysis::{condition_estimate, lambda_heuristic, lambda_star, spd_spectrum};
use ratarnoldi::baselines::{cg_solve, cgls_solve, gmres_solve};
use ratarnoldi::linalg::{DenseMatrix, DenseVector};
use ratarnoldi::problems::{
    add_noise, generate_franke_rbf, generate_fredholm, load_matrix_market, NoiseSpec,
};
use ratarnoldi::solvers::{ra_solve, rat_solve, riley_solve, second_difference_matrix};
use ratarnoldi::{SolveOptions, SolveReport, TestProblem};
use serde::Serialize;

use crate::config::{
    LambdaChoice, LambdaPolicy, MethodName, MethodSpec, ProblemSpec, Regularization, ScenarioConfig,
};
use crate::error::{CliError, Result};
use crate::output::{write_history_csv, write_json};

/// A generated problem together with the right-hand side the solvers see.
#[derive(Debug, Clone)]
pub struct PreparedProblem {
    pub problem: TestProblem,
    pub b_obs: DenseVector,
    pub noise: Option<NoiseSpec>,
}

impl PreparedProblem {
    pub fn dimension(&self) -> usize {
        self.problem.dimension()
    }
}

pub fn build_problem(spec: &ProblemSpec, noise: Option<NoiseSpec>) -> Result<PreparedProblem> {
    let problem = match spec {
        ProblemSpec::Fredholm { kind, n } => generate_fredholm(*kind, *n)?,
        ProblemSpec::Franke { grid, shape } => generate_franke_rbf(*grid, *shape)?,
        ProblemSpec::MatrixMarket { matrix, rhs } => load_matrix_market(matrix, rhs.as_deref())
            .map_err(|e| CliError::usage("problem.matrix", e.to_string()))?,
    };
    let b_obs = match &noise {
        Some(spec) => add_noise(&problem.b, spec),
        None => problem.b.clone(),
    };
    Ok(PreparedProblem {
        problem,
        b_obs,
        noise,
    })
}

/// Turns a shift or policy into a number using the spectral estimates of `A`.
pub fn resolve_lambda(choice: LambdaChoice, a: &DenseMatrix) -> ratarnoldi::Result<f64> {
    let policy = match choice {
        LambdaChoice::Value(v) => return Ok(v),
        LambdaChoice::Policy(p) => p,
    };
    let value = match policy {
        LambdaPolicy::Star => lambda_star(&spd_spectrum(a)?),
        other => {
            let h = lambda_heuristic(condition_estimate(a)?);
            match other {
                LambdaPolicy::HeuristicPoint => h.point,
                LambdaPolicy::HeuristicRangeLow => h.stable_range.0,
                _ => h.stable_range.1,
            }
        }
    };
    log::info!("lambda policy {} resolved to {value:e}", policy.as_str());
    Ok(value)
}

pub fn regularization_matrix(reg: Regularization, n: usize) -> ratarnoldi::Result<DenseMatrix> {
    match reg {
        Regularization::SecondDifference => second_difference_matrix(n),
        Regularization::Identity => Ok(DenseMatrix::identity(n)),
    }
}

/// Runs one method with an already resolved shift.
pub fn solve_with(
    name: MethodName,
    lambda: Option<f64>,
    p: &PreparedProblem,
    reg: Regularization,
    max_iter: usize,
) -> ratarnoldi::Result<SolveReport> {
    let a = &p.problem.a;
    let b = &p.b_obs;
    let xt = p.problem.x_true.as_deref();
    let opts = SolveOptions::with_max_iter(max_iter);
    let lam = || lambda.expect("shifted methods carry a resolved lambda");
    match name {
        MethodName::Ra => ra_solve(a, b, lam(), &opts, xt),
        MethodName::Riley => riley_solve(a, b, lam(), &opts, xt),
        MethodName::Rat => {
            let h = regularization_matrix(reg, p.dimension())?;
            rat_solve(a, b, &h, lam(), &opts, xt)
        }
        MethodName::Cg => cg_solve(a, b, &opts, xt),
        MethodName::Gmres => gmres_solve(a, b, &opts, xt),
        MethodName::Cgls => cgls_solve(a, b, &opts, xt),
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MethodSummary {
    pub method: String,
    pub lambda_spec: Option<String>,
    pub lambda_used: Option<f64>,
    pub err_min: Option<f64>,
    pub res_at_min: Option<f64>,
    pub nit: Option<usize>,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub stopped_reason: Option<String>,
    pub csv: Option<String>,
    pub error: Option<String>,
}

impl MethodSummary {
    fn failed(spec: &MethodSpec, lambda_used: Option<f64>, error: String) -> Self {
        MethodSummary {
            method: spec.name.as_str().to_string(),
            lambda_spec: spec.lambda.map(|l| l.to_string()),
            lambda_used,
            err_min: None,
            res_at_min: None,
            nit: None,
            iterations: 0,
            wall_time_ms: 0.0,
            stopped_reason: None,
            csv: None,
            error: Some(error),
        }
    }

    pub fn from_report(
        spec: &MethodSpec,
        lambda_used: Option<f64>,
        rep: &SolveReport,
        wall_time_ms: f64,
        csv: Option<String>,
    ) -> Self {
        MethodSummary {
            method: spec.name.as_str().to_string(),
            lambda_spec: spec.lambda.map(|l| l.to_string()),
            lambda_used,
            err_min: rep.min_error(),
            res_at_min: rep.residual_at_best(),
            nit: rep.best().map(|r| r.m),
            iterations: rep.history.len(),
            wall_time_ms,
            stopped_reason: Some(rep.stopped_reason.as_str().to_string()),
            csv,
            error: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NoiseSummary {
    pub delta: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScenarioSummary {
    pub problem: String,
    pub dimension: usize,
    pub noise: Option<NoiseSummary>,
    pub seed: u64,
    pub max_iter: usize,
    pub methods: Vec<MethodSummary>,
}

impl ScenarioSummary {
    pub fn failures(&self) -> usize {
        self.methods.iter().filter(|m| m.error.is_some()).count()
    }
}

#[derive(Debug)]
pub struct ScenarioOutcome {
    pub output_dir: PathBuf,
    pub summary: ScenarioSummary,
}

/// Runs every method of `cfg` in order, writing `<label>.csv` per method and
/// `summary.json` into the output directory. A failing method is recorded in
/// the summary and does not stop the others.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    let prepared = build_problem(&cfg.problem, cfg.noise)?;
    for (i, m) in cfg.methods.iter().enumerate() {
        if m.lambda == Some(LambdaChoice::Policy(LambdaPolicy::Star))
            && !prepared.problem.a.is_symmetric()
        {
            return Err(CliError::usage(
                format!("methods[{i}]"),
                "lambda policy \"star\" requires a symmetric positive definite problem",
            ));
        }
    }
    let dir = cfg.resolved_output_dir();
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let max_iter = cfg.max_iter.resolve(prepared.dimension());

    let mut methods = Vec::with_capacity(cfg.methods.len());
    for spec in &cfg.methods {
        let lambda = match spec
            .lambda
            .map(|c| resolve_lambda(c, &prepared.problem.a))
            .transpose()
        {
            Ok(l) => l,
            Err(e) => {
                log::warn!("{spec}: {e}");
                methods.push(MethodSummary::failed(spec, None, e.to_string()));
                continue;
            }
        };
        let start = Instant::now();
        let outcome = solve_with(spec.name, lambda, &prepared, cfg.regularization, max_iter);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match outcome {
            Ok(rep) => {
                let file = format!("{}.csv", spec.label());
                write_history_csv(&dir.join(&file), &rep)?;
                log::debug!(
                    "{spec}: err_min {:?} nit {:?} ({})",
                    rep.min_error(),
                    rep.best().map(|r| r.m),
                    rep.stopped_reason
                );
                methods.push(MethodSummary::from_report(
                    spec,
                    lambda,
                    &rep,
                    ms,
                    Some(file),
                ));
            }
            Err(e) => {
                log::warn!("{spec}: {e}");
                methods.push(MethodSummary::failed(spec, lambda, e.to_string()));
            }
        }
    }

    let summary = ScenarioSummary {
        problem: cfg.problem.label(),
        dimension: prepared.dimension(),
        noise: cfg.noise.map(|n| NoiseSummary {
            delta: n.delta,
            seed: n.seed,
        }),
        seed: cfg.seed,
        max_iter,
        methods,
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(ScenarioOutcome {
        output_dir: dir,
        summary,
    })
}

/// Writes `A.mtx`, `b.mtx` and, when known, `x_true.mtx` into `dir`.
pub fn export_problem(p: &TestProblem, dir: &Path) -> Result<Vec<PathBuf>> {
    use ratarnoldi::problems::{write_matrix_market, write_vector_market};
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = vec![dir.join("A.mtx"), dir.join("b.mtx")];
    write_matrix_market(&written[0], &p.a)?;
    write_vector_market(&written[1], &p.b)?;
    if let Some(x) = &p.x_true {
        let path = dir.join("x_true.mtx");
        write_vector_market(&path, x)?;
        written.push(path);
    }
    Ok(written)
}
