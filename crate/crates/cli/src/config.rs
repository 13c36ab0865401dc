//! Flat key-value configuration files with typed fields and array syntax.
//!
//! The format is line-oriented: `key = value`, `#` starts a comment, values
//! are numbers, bare words, `[a, b, c]` arrays, or `[[...], ...]` nested
//! arrays (for full prior covariance matrices). One file may request several
//! problems; they share the instance, horizon, trials, and seed, so curves
//! are comparable trial for trial.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use satbandit::belief::Prior;
use satbandit::env::{BanditInstance, ObjectiveSpec, Problem};
use satbandit::linalg::SymMatrix;
use satbandit::policy::{Heuristic, PolicySpec};
use satbandit::sim::SimulationConfig;
use satbandit::stats::Probability;
use satbandit::Error as CoreError;

/// Configuration-level failures, with the offending field named.
#[derive(Debug)]
pub enum ConfigError {
    Io(String),
    Syntax(String),
    Field { field: String, message: String },
    Core(CoreError),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "io error: {m}"),
            ConfigError::Syntax(m) => write!(f, "config syntax error: {m}"),
            ConfigError::Field { field, message } => {
                write!(f, "config field `{field}`: {message}")
            }
            ConfigError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<CoreError> for ConfigError {
    fn from(e: CoreError) -> Self {
        ConfigError::Core(e)
    }
}

impl ConfigError {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, ConfigError::Core(CoreError::InfeasibleObjective(_)))
    }

    fn field(field: &str, message: impl Into<String>) -> Self {
        ConfigError::Field {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

type ConfigResult<T> = Result<T, ConfigError>;

/// One parsed value: a scalar, a word, or an (optionally nested) array.
#[derive(Debug, Clone, PartialEq)]
enum Value {
    Word(String),
    Array(Vec<Value>),
}

impl Value {
    fn as_f64(&self, field: &str) -> ConfigResult<f64> {
        match self {
            Value::Word(w) => w
                .parse::<f64>()
                .map_err(|_| ConfigError::field(field, format!("expected a number, got `{w}`"))),
            Value::Array(_) => Err(ConfigError::field(field, "expected a number, got an array")),
        }
    }

    fn as_u64(&self, field: &str) -> ConfigResult<u64> {
        match self {
            Value::Word(w) => w
                .parse::<u64>()
                .map_err(|_| ConfigError::field(field, format!("expected an integer, got `{w}`"))),
            Value::Array(_) => Err(ConfigError::field(field, "expected an integer, got an array")),
        }
    }

    fn as_f64_array(&self, field: &str) -> ConfigResult<Vec<f64>> {
        match self {
            Value::Array(items) => items.iter().map(|v| v.as_f64(field)).collect(),
            Value::Word(w) => w
                .parse::<f64>()
                .map(|v| vec![v])
                .map_err(|_| ConfigError::field(field, format!("expected an array, got `{w}`"))),
        }
    }

    fn as_matrix(&self, field: &str) -> ConfigResult<Vec<Vec<f64>>> {
        match self {
            Value::Array(rows) => rows
                .iter()
                .map(|row| match row {
                    Value::Array(_) => row.as_f64_array(field),
                    Value::Word(_) => Err(ConfigError::field(field, "expected nested arrays")),
                })
                .collect(),
            Value::Word(_) => Err(ConfigError::field(field, "expected a matrix")),
        }
    }
}

fn parse_value(raw: &str, field: &str) -> ConfigResult<Value> {
    let raw = raw.trim();
    if !raw.starts_with('[') {
        if raw.is_empty() {
            return Err(ConfigError::field(field, "empty value"));
        }
        return Ok(Value::Word(raw.to_string()));
    }
    let (value, rest) = parse_array(raw, field)?;
    if !rest.trim().is_empty() {
        return Err(ConfigError::field(field, "trailing characters after array"));
    }
    Ok(value)
}

fn parse_array<'a>(raw: &'a str, field: &str) -> ConfigResult<(Value, &'a str)> {
    let mut rest = raw
        .strip_prefix('[')
        .ok_or_else(|| ConfigError::field(field, "expected `[`"))?
        .trim_start();
    let mut items = Vec::new();
    loop {
        if let Some(after) = rest.strip_prefix(']') {
            return Ok((Value::Array(items), after));
        }
        if rest.is_empty() {
            return Err(ConfigError::field(field, "unterminated array"));
        }
        if rest.starts_with('[') {
            let (item, after) = parse_array(rest, field)?;
            items.push(item);
            rest = after.trim_start();
        } else {
            let end = rest
                .find([',', ']'])
                .ok_or_else(|| ConfigError::field(field, "unterminated array"))?;
            let word = rest[..end].trim();
            if word.is_empty() {
                return Err(ConfigError::field(field, "empty array element"));
            }
            items.push(Value::Word(word.to_string()));
            rest = &rest[end..];
        }
        rest = rest.trim_start();
        if let Some(after) = rest.strip_prefix(',') {
            rest = after.trim_start();
        }
    }
}

/// Keys written by the manifest emitter; ignored on re-parse so a manifest
/// is itself a runnable config.
const MANIFEST_KEYS: [&str; 4] = ["version", "command", "timestamp_unix", "output"];

/// The parsed, validated plan: one simulation per requested problem, all
/// sharing instance, horizon, trials, and master seed.
#[derive(Debug, Clone)]
pub struct RunPlan {
    pub stem: String,
    pub entries: Vec<PlanEntry>,
}

#[derive(Debug, Clone)]
pub struct PlanEntry {
    pub problem: Problem,
    pub config: SimulationConfig,
}

impl RunPlan {
    pub fn master_seed(&self) -> u64 {
        self.entries[0].config.master_seed
    }

    pub fn with_overrides(
        mut self,
        seed: Option<u64>,
        trials: Option<u64>,
        horizon: Option<u64>,
    ) -> Self {
        for entry in &mut self.entries {
            if let Some(s) = seed {
                entry.config.master_seed = s;
            }
            if let Some(t) = trials {
                entry.config.trials = t;
            }
            if let Some(h) = horizon {
                entry.config.horizon = h;
            }
        }
        self
    }

    /// Re-checks every entry; `validate` and `run` accept exactly the same
    /// plans.
    pub fn validate(&self) -> ConfigResult<()> {
        for entry in &self.entries {
            entry.config.validate()?;
        }
        Ok(())
    }
}

/// Parses and validates a config file into a run plan.
pub fn parse_config(path: &Path) -> ConfigResult<RunPlan> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "run".to_string());
    parse_config_text(&text, &stem)
}

/// Parses embedded or already-loaded config text.
pub fn parse_config_text(text: &str, stem: &str) -> ConfigResult<RunPlan> {
    let mut keys: BTreeMap<String, Value> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::Syntax(format!("line {}: expected `key = value`", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if MANIFEST_KEYS.contains(&key.as_str()) {
            continue;
        }
        let value = parse_value(value, &key)?;
        if keys.insert(key.clone(), value).is_some() {
            return Err(ConfigError::Syntax(format!(
                "line {}: duplicate key `{key}`",
                lineno + 1
            )));
        }
    }
    build_plan(&keys, stem)
}

const KNOWN_KEYS: [&str; 14] = [
    "problem",
    "problems",
    "means",
    "stds",
    "mean_threshold",
    "delta",
    "happiness_threshold",
    "happiness_prob",
    "horizon",
    "trials",
    "seed",
    "K",
    "heuristic",
    "prior",
];
const PRIOR_KEYS: [&str; 3] = ["prior_mu0", "prior_var0", "prior_cov"];

fn build_plan(keys: &BTreeMap<String, Value>, stem: &str) -> ConfigResult<RunPlan> {
    for key in keys.keys() {
        if !KNOWN_KEYS.contains(&key.as_str()) && !PRIOR_KEYS.contains(&key.as_str()) {
            return Err(ConfigError::Syntax(format!("unknown key `{key}`")));
        }
    }

    let problems: Vec<Problem> = match (keys.get("problem"), keys.get("problems")) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::Syntax(
                "give either `problem` or `problems`, not both".into(),
            ))
        }
        (Some(Value::Word(w)), None) => vec![Problem::parse(w)?],
        (None, Some(value)) => match value {
            Value::Array(items) => items
                .iter()
                .map(|item| match item {
                    Value::Word(w) => Problem::parse(w).map_err(ConfigError::from),
                    Value::Array(_) => {
                        Err(ConfigError::field("problems", "expected problem tags"))
                    }
                })
                .collect::<ConfigResult<_>>()?,
            Value::Word(w) => vec![Problem::parse(w)?],
        },
        (Some(Value::Array(_)), None) => {
            return Err(ConfigError::field("problem", "expected one problem tag"))
        }
        (None, None) => return Err(ConfigError::field("problem", "missing required field")),
    };

    let means = keys
        .get("means")
        .ok_or_else(|| ConfigError::field("means", "missing required field"))?
        .as_f64_array("means")?;
    let stds = keys
        .get("stds")
        .ok_or_else(|| ConfigError::field("stds", "missing required field"))?
        .as_f64_array("stds")?;
    let instance = BanditInstance::new(means, stds)?;
    let arms = instance.arm_count();

    let horizon = keys
        .get("horizon")
        .map(|v| v.as_u64("horizon"))
        .transpose()?
        .unwrap_or(1000);
    let trials = keys
        .get("trials")
        .map(|v| v.as_u64("trials"))
        .transpose()?
        .unwrap_or(100);
    let seed = keys
        .get("seed")
        .map(|v| v.as_u64("seed"))
        .transpose()?
        .unwrap_or(42);
    let k_scale = keys
        .get("K")
        .map(|v| v.as_f64("K"))
        .transpose()?
        .unwrap_or(1.0);

    let mean_threshold = keys
        .get("mean_threshold")
        .map(|v| v.as_f64("mean_threshold"))
        .transpose()?;
    let delta_value = keys
        .get("delta")
        .map(|v| v.as_f64("delta"))
        .transpose()?
        .unwrap_or(0.0);
    let delta = Probability::new(delta_value)
        .map_err(|_| ConfigError::field("delta", "must lie in [0, 1]"))?;
    let happiness_threshold = keys
        .get("happiness_threshold")
        .map(|v| v.as_f64("happiness_threshold"))
        .transpose()?;
    let happiness_prob = keys
        .get("happiness_prob")
        .map(|v| v.as_f64("happiness_prob"))
        .transpose()?
        .map(Probability::new)
        .transpose()
        .map_err(|_| ConfigError::field("happiness_prob", "must lie in [0, 1]"))?;

    let heuristic = parse_heuristic(keys.get("heuristic"))?;
    let prior = parse_prior(keys, arms)?;

    let mut entries = Vec::with_capacity(problems.len());
    for problem in problems {
        let objective = build_objective(
            problem,
            mean_threshold,
            delta,
            happiness_threshold,
            happiness_prob,
        )?;
        let policy = PolicySpec::new(objective, k_scale, heuristic, prior.clone())?;
        let config = SimulationConfig {
            instance: instance.clone(),
            policy,
            horizon,
            trials,
            master_seed: seed,
        };
        config.validate()?;
        entries.push(PlanEntry { problem, config });
    }
    Ok(RunPlan {
        stem: stem.to_string(),
        entries,
    })
}

fn build_objective(
    problem: Problem,
    mean_threshold: Option<f64>,
    delta: Probability,
    happiness_threshold: Option<f64>,
    happiness_prob: Option<Probability>,
) -> ConfigResult<ObjectiveSpec> {
    // Only the sufficing problems consume delta; a shared config may set
    // delta = 0.05 next to a certainty problem without conflict.
    let effective_delta = if problem.is_sufficing() {
        if delta.value() == 0.0 {
            return Err(ConfigError::field(
                "delta",
                format!("{problem} requires delta in (0, 1]"),
            ));
        }
        delta
    } else {
        Probability::ZERO
    };
    let objective = ObjectiveSpec::new(
        problem,
        mean_threshold,
        effective_delta,
        happiness_threshold,
        happiness_prob,
    )?;
    Ok(objective)
}

fn parse_heuristic(value: Option<&Value>) -> ConfigResult<Heuristic> {
    let word = match value {
        None => return Ok(Heuristic::GaussianKnownVariance),
        Some(Value::Word(w)) => w.as_str(),
        Some(Value::Array(_)) => {
            return Err(ConfigError::field("heuristic", "expected a name"))
        }
    };
    match word {
        "gaussian_known_variance" | "gaussian" => Ok(Heuristic::GaussianKnownVariance),
        "ucb1_normal" => Ok(Heuristic::Ucb1Normal),
        "ucb1_bounded" | "ucb1" => Ok(Heuristic::Ucb1Bounded),
        other => {
            if let Some(zeta) = other.strip_prefix("sub_gaussian:") {
                let zeta = zeta.parse::<f64>().map_err(|_| {
                    ConfigError::field("heuristic", format!("bad sub_gaussian scale `{zeta}`"))
                })?;
                Ok(Heuristic::SubGaussian { zeta })
            } else {
                Err(ConfigError::field(
                    "heuristic",
                    format!("unknown heuristic `{other}`"),
                ))
            }
        }
    }
}

fn parse_prior(keys: &BTreeMap<String, Value>, arms: usize) -> ConfigResult<Prior> {
    let kind = match keys.get("prior") {
        None => "uninformative".to_string(),
        Some(Value::Word(w)) => w.clone(),
        Some(Value::Array(_)) => {
            return Err(ConfigError::field("prior", "expected a prior kind"))
        }
    };
    match kind.as_str() {
        "uninformative" => Ok(Prior::uninformative(arms)),
        "uncorrelated" => {
            let mu0 = keys
                .get("prior_mu0")
                .ok_or_else(|| ConfigError::field("prior_mu0", "required for uncorrelated prior"))?
                .as_f64_array("prior_mu0")?;
            let var0 = keys
                .get("prior_var0")
                .ok_or_else(|| ConfigError::field("prior_var0", "required for uncorrelated prior"))?
                .as_f64_array("prior_var0")?;
            let var0 = if var0.len() == 1 {
                vec![var0[0]; mu0.len()]
            } else {
                var0
            };
            Ok(Prior::uncorrelated(mu0, var0)?)
        }
        "informative" => {
            let mu0 = keys
                .get("prior_mu0")
                .ok_or_else(|| ConfigError::field("prior_mu0", "required for informative prior"))?
                .as_f64_array("prior_mu0")?;
            let rows = keys
                .get("prior_cov")
                .ok_or_else(|| ConfigError::field("prior_cov", "required for informative prior"))?
                .as_matrix("prior_cov")?;
            let cov = SymMatrix::from_rows(&rows)?;
            Ok(Prior::informative(mu0, cov)?)
        }
        other => Err(ConfigError::field(
            "prior",
            format!("unknown prior kind `{other}`"),
        )),
    }
}
