//! Scenario configuration.
//!
//! A scenario file is TOML restricted to flat `dotted.key = value` lines:
//!
//! ```text
//! problem.kind = "shaw"        # shaw | baart | gravity | foxgood | franke | mtx
//! problem.n = 64               # Fredholm order
//! problem.grid = 15            # franke: points per side
//! problem.shape = 1.0          # franke: RBF shape parameter
//! problem.matrix = "A.mtx"     # mtx: matrix file
//! problem.rhs = "b.mtx"        # mtx: optional right-hand side (default A·1)
//! noise.delta = 1e-3
//! noise.seed = 7               # defaults to `seed`
//! methods = ["ra@1e-9", "riley@1e-10", "rat@star", "cg"]
//! regularization = "second-difference"   # or "identity"; used by rat
//! max_iter = "N"               # or an integer
//! seed = 1
//! output_dir = "out/shaw"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ratarnoldi::problems::{FredholmKind, NoiseSpec};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const OUTPUT_ENV: &str = "RATARNOLDI_OUT";
pub const DEFAULT_OUTPUT_DIR: &str = "results";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodName {
    Ra,
    Riley,
    Rat,
    Cg,
    Gmres,
    Cgls,
}

impl MethodName {
    pub fn as_str(self) -> &'static str {
        match self {
            MethodName::Ra => "ra",
            MethodName::Riley => "riley",
            MethodName::Rat => "rat",
            MethodName::Cg => "cg",
            MethodName::Gmres => "gmres",
            MethodName::Cgls => "cgls",
        }
    }

    pub fn takes_lambda(self) -> bool {
        matches!(self, MethodName::Ra | MethodName::Riley | MethodName::Rat)
    }
}

impl FromStr for MethodName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "ra" => MethodName::Ra,
            "riley" => MethodName::Riley,
            "rat" => MethodName::Rat,
            "cg" => MethodName::Cg,
            "gmres" => MethodName::Gmres,
            "cgls" => MethodName::Cgls,
            other => return Err(format!("unknown method {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaPolicy {
    Star,
    HeuristicPoint,
    HeuristicRangeLow,
    HeuristicRangeHigh,
}

impl LambdaPolicy {
    pub fn as_str(self) -> &'static str {
        match self {
            LambdaPolicy::Star => "star",
            LambdaPolicy::HeuristicPoint => "heuristic-point",
            LambdaPolicy::HeuristicRangeLow => "heuristic-range-low",
            LambdaPolicy::HeuristicRangeHigh => "heuristic-range-high",
        }
    }
}

impl FromStr for LambdaPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.trim() {
            "star" => LambdaPolicy::Star,
            "heuristic-point" => LambdaPolicy::HeuristicPoint,
            "heuristic-range-low" => LambdaPolicy::HeuristicRangeLow,
            "heuristic-range-high" => LambdaPolicy::HeuristicRangeHigh,
            other => return Err(format!("unknown lambda policy {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaChoice {
    Value(f64),
    Policy(LambdaPolicy),
}

impl fmt::Display for LambdaChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaChoice::Value(v) => write!(f, "{v:e}"),
            LambdaChoice::Policy(p) => f.write_str(p.as_str()),
        }
    }
}

impl FromStr for LambdaChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if let Ok(v) = s.trim().parse::<f64>() {
            if v > 0.0 && v.is_finite() {
                return Ok(LambdaChoice::Value(v));
            }
            return Err(format!("lambda must be positive and finite, got {v}"));
        }
        s.parse().map(LambdaChoice::Policy)
    }
}

/// One entry of `methods`: `name` or `name@lambda`.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub name: MethodName,
    pub lambda: Option<LambdaChoice>,
}

impl MethodSpec {
    /// File-system friendly label, e.g. `ra_1e-9` or `cg`.
    pub fn label(&self) -> String {
        match self.lambda {
            Some(l) => format!("{}_{l}", self.name.as_str()),
            None => self.name.as_str().to_string(),
        }
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lambda {
            Some(l) => write!(f, "{}@{l}", self.name.as_str()),
            None => f.write_str(self.name.as_str()),
        }
    }
}

impl FromStr for MethodSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (name, lambda) = match s.split_once('@') {
            Some((n, l)) => (n, Some(l)),
            None => (s, None),
        };
        let name: MethodName = name.parse()?;
        let lambda = lambda.map(str::parse::<LambdaChoice>).transpose()?;
        match (name.takes_lambda(), lambda) {
            (true, None) => Err(format!(
                "method {} needs a shift: {}@<lambda|policy>",
                name.as_str(),
                name.as_str()
            )),
            (false, Some(_)) => Err(format!("method {} takes no shift", name.as_str())),
            (_, lambda) => Ok(MethodSpec { name, lambda }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaxIter {
    /// Stop at the problem dimension.
    #[default]
    Dimension,
    Count(usize),
}

impl MaxIter {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            MaxIter::Dimension => n,
            MaxIter::Count(k) => k,
        }
    }
}

impl FromStr for MaxIter {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("n") {
            return Ok(MaxIter::Dimension);
        }
        match s.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!(
                "max_iter must be a positive integer or \"N\", got {s:?}"
            )),
            Ok(k) => Ok(MaxIter::Count(k)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Regularization {
    #[default]
    SecondDifference,
    Identity,
}

impl FromStr for Regularization {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "second-difference" => Ok(Regularization::SecondDifference),
            "identity" => Ok(Regularization::Identity),
            other => Err(format!("unknown regularization {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Fredholm {
        kind: FredholmKind,
        n: usize,
    },
    Franke {
        grid: usize,
        shape: f64,
    },
    MatrixMarket {
        matrix: PathBuf,
        rhs: Option<PathBuf>,
    },
}

impl ProblemSpec {
    pub fn label(&self) -> String {
        match self {
            ProblemSpec::Fredholm { kind, n } => format!("{kind}({n})"),
            ProblemSpec::Franke { grid, shape } => format!("franke({grid}x{grid}, shape {shape})"),
            ProblemSpec::MatrixMarket { matrix, .. } => matrix.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub problem: ProblemSpec,
    pub noise: Option<NoiseSpec>,
    pub methods: Vec<MethodSpec>,
    pub regularization: Regularization,
    pub max_iter: MaxIter,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

/// Command-line overrides; each applies on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub lambda: Option<LambdaChoice>,
    pub noise_delta: Option<f64>,
    pub seed: Option<u64>,
    pub max_iter: Option<MaxIter>,
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: RawProblem,
    noise: Option<RawNoise>,
    methods: Vec<String>,
    regularization: Option<String>,
    max_iter: Option<toml::Value>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    kind: String,
    n: Option<usize>,
    grid: Option<usize>,
    shape: Option<f64>,
    matrix: Option<PathBuf>,
    rhs: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    delta: f64,
    seed: Option<u64>,
}

fn require<T>(value: Option<T>, field: &str) -> Result<T> {
    value.ok_or_else(|| CliError::usage(field, "missing"))
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let field = e.span().map_or_else(
                || "config".to_string(),
                |s| format!("config[{}..{}]", s.start, s.end),
            );
            CliError::usage(field, e.message().to_string())
        })?;
        let seed = raw.seed.unwrap_or(0);
        let problem = parse_problem(raw.problem, base_dir)?;
        let noise = raw
            .noise
            .map(|n| {
                NoiseSpec::new(n.delta, n.seed.unwrap_or(seed))
                    .map_err(|e| CliError::usage("noise.delta", e.to_string()))
            })
            .transpose()?;
        if raw.methods.is_empty() {
            return Err(CliError::usage(
                "methods",
                "at least one method is required",
            ));
        }
        let methods = raw
            .methods
            .iter()
            .enumerate()
            .map(|(i, m)| {
                m.parse()
                    .map_err(|e| CliError::usage(format!("methods[{i}]"), e))
            })
            .collect::<Result<Vec<MethodSpec>>>()?;
        let regularization = raw
            .regularization
            .map(|r| r.parse().map_err(|e| CliError::usage("regularization", e)))
            .transpose()?
            .unwrap_or_default();
        let max_iter = match raw.max_iter {
            None => MaxIter::Dimension,
            Some(toml::Value::Integer(k)) if k > 0 => MaxIter::Count(k as usize),
            Some(toml::Value::String(s)) => {
                s.parse().map_err(|e| CliError::usage("max_iter", e))?
            }
            Some(other) => {
                return Err(CliError::usage(
                    "max_iter",
                    format!("expected positive integer or \"N\", got {other}"),
                ))
            }
        };
        let cfg = ScenarioConfig {
            problem,
            noise,
            methods,
            regularization,
            max_iter,
            seed,
            output_dir: raw.output_dir.map(|p| base_dir.join(p)),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(lambda) = o.lambda {
            for m in self.methods.iter_mut().filter(|m| m.name.takes_lambda()) {
                m.lambda = Some(lambda);
            }
        }
        if let Some(seed) = o.seed {
            self.seed = seed;
            if let Some(noise) = &mut self.noise {
                noise.seed = seed;
            }
        }
        if let Some(delta) = o.noise_delta {
            self.noise = Some(
                NoiseSpec::new(delta, self.seed)
                    .map_err(|e| CliError::usage("noise.delta", e.to_string()))?,
            );
        }
        if let Some(m) = o.max_iter {
            self.max_iter = m;
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = Some(dir.clone());
        }
        self.validate()
    }

    fn validate(&self) -> Result<()> {
        let mut labels: Vec<String> = Vec::new();
        for (i, m) in self.methods.iter().enumerate() {
            let label = m.label();
            if labels.contains(&label) {
                return Err(CliError::usage(
                    format!("methods[{i}]"),
                    format!("duplicate method {m}"),
                ));
            }
            labels.push(label);
        }
        Ok(())
    }

    /// Output directory: config or flag, then the environment, then `results`.
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }
}

fn parse_problem(raw: RawProblem, base_dir: &Path) -> Result<ProblemSpec> {
    match raw.kind.to_ascii_lowercase().as_str() {
        "franke" => {
            let grid = raw.grid.unwrap_or(15);
            let shape = raw.shape.unwrap_or(1.0);
            if grid < 2 {
                return Err(CliError::usage("problem.grid", "must be at least 2"));
            }
            if !(shape > 0.0) {
                return Err(CliError::usage("problem.shape", "must be positive"));
            }
            Ok(ProblemSpec::Franke { grid, shape })
        }
        "mtx" => Ok(ProblemSpec::MatrixMarket {
            matrix: base_dir.join(require(raw.matrix, "problem.matrix")?),
            rhs: raw.rhs.map(|p| base_dir.join(p)),
        }),
        other => {
            let kind: FredholmKind = other.parse().map_err(|_| {
                CliError::usage("problem.kind", format!("unknown problem {other:?}"))
            })?;
            let n = require(raw.n, "problem.n")?;
            if n < 8 || (kind == FredholmKind::Shaw && n % 2 == 1) {
                return Err(CliError::usage(
                    "problem.n",
                    format!("invalid order {n} for {kind}"),
                ));
            }
            Ok(ProblemSpec::Fredholm { kind, n })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig> {
        ScenarioConfig::from_toml_str(text, Path::new("/base"))
    }

    #[test]
    fn full_config() {
        let cfg = parse(
            r#"
            problem.kind = "shaw"
            problem.n = 64
            noise.delta = 1e-3
            methods = ["ra@1e-9", "riley@star", "cg"]
            max_iter = 30
            seed = 5
            output_dir = "out"
            "#,
        )
        .unwrap();
        assert_eq!(
            cfg.problem,
            ProblemSpec::Fredholm {
                kind: FredholmKind::Shaw,
                n: 64
            }
        );
        assert_eq!(cfg.noise.unwrap().seed, 5);
        assert_eq!(cfg.methods[0].lambda, Some(LambdaChoice::Value(1e-9)));
        assert_eq!(
            cfg.methods[1].lambda,
            Some(LambdaChoice::Policy(LambdaPolicy::Star))
        );
        assert_eq!(cfg.methods[2].lambda, None);
        assert_eq!(cfg.max_iter, MaxIter::Count(30));
        assert_eq!(cfg.output_dir, Some(PathBuf::from("/base/out")));
    }

    #[test]
    fn defaults() {
        let cfg =
            parse("problem.kind = \"franke\"\nmethods = [\"ra@1e-11\"]\nmax_iter = \"N\"").unwrap();
        assert_eq!(
            cfg.problem,
            ProblemSpec::Franke {
                grid: 15,
                shape: 1.0
            }
        );
        assert_eq!(cfg.max_iter, MaxIter::Dimension);
        assert!(cfg.noise.is_none());
        assert_eq!(cfg.regularization, Regularization::SecondDifference);
    }

    #[test]
    fn usage_errors_name_the_field() {
        let cases = [
            (
                "problem.kind = \"shaw\"\nproblem.n = 64\nmethods = [\"lsqr\"]",
                "methods[0]",
            ),
            (
                "problem.kind = \"shaw\"\nproblem.n = 64\nmethods = [\"ra\"]",
                "methods[0]",
            ),
            (
                "problem.kind = \"shaw\"\nproblem.n = 64\nmethods = [\"cg@1\"]",
                "methods[0]",
            ),
            ("problem.kind = \"shaw\"\nmethods = [\"cg\"]", "problem.n"),
            (
                "problem.kind = \"shaw\"\nproblem.n = 63\nmethods = [\"cg\"]",
                "problem.n",
            ),
            (
                "problem.kind = \"wave\"\nmethods = [\"cg\"]",
                "problem.kind",
            ),
            (
                "problem.kind = \"shaw\"\nproblem.n = 64\nmethods = [\"cg\"]\nmax_iter = 0",
                "max_iter",
            ),
            (
                "problem.kind = \"shaw\"\nproblem.n = 64\nmethods = [\"cg\", \"cg\"]",
                "methods[1]",
            ),
            (
                "problem.kind = \"shaw\"\nproblem.n = 64\nmethods = []",
                "methods",
            ),
        ];
        for (text, field) in cases {
            match parse(text) {
                Err(CliError::Usage { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn overrides_apply() {
        let mut cfg = parse(
            "problem.kind = \"baart\"\nproblem.n = 40\nmethods = [\"ra@1e-8\", \"gmres\"]\nseed = 1",
        )
        .unwrap();
        cfg.apply(&Overrides {
            lambda: Some(LambdaChoice::Policy(LambdaPolicy::HeuristicPoint)),
            noise_delta: Some(1e-2),
            seed: Some(9),
            max_iter: Some(MaxIter::Count(3)),
            output_dir: Some(PathBuf::from("x")),
        })
        .unwrap();
        assert_eq!(cfg.methods[0].to_string(), "ra@heuristic-point");
        assert_eq!(cfg.methods[1].lambda, None);
        assert_eq!(cfg.noise.unwrap().seed, 9);
        assert_eq!(cfg.max_iter, MaxIter::Count(3));
    }

    #[test]
    fn method_spec_round_trip() {
        for s in ["ra@1e-9", "riley@star", "rat@heuristic-range-low", "cgls"] {
            assert_eq!(s.parse::<MethodSpec>().unwrap().to_string(), s);
        }
        assert_eq!("ra@1e-9".parse::<MethodSpec>().unwrap().label(), "ra_1e-9");
        assert!("ra@-1".parse::<MethodSpec>().is_err());
    }
}
