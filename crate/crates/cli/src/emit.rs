//! Result serialization: per-step curve tables, per-arm summaries, bound
//! tables, and the run manifest. All numeric fields use 12 significant
//! digits so emitted files are byte-stable across runs and worker counts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use satbandit::env::{thresholded_regret, BanditInstance};
use satbandit::metrics::{
    effective_threshold, upper_bound_pulls, BoundFamily, BoundKind,
};
use satbandit::sim::{AggregateResult, SimulationConfig};

use crate::config::{ConfigError, RunPlan};

pub const CURVE_HEADER: &str =
    "t,mean_cum_regret,se_regret,mean_cum_reward,mean_cum_happiness,mean_cum_switches,bound";
pub const ARMS_HEADER: &str = "arm,mean_pulls,delta,delta_M,bound_pulls";
pub const BOUNDS_HEADER: &str = "t,bound_upper,bound_lower";

/// Renders a float with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.11e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), ConfigError> {
    std::fs::write(path, contents)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))
}

/// The instance regret is accounted on: standardized for robust objectives.
pub fn accounting_instance(config: &SimulationConfig) -> BanditInstance {
    let objective = &config.policy.objective;
    if objective.problem().is_robust() {
        config
            .instance
            .standardized(objective.happiness_threshold().expect("validated"))
    } else {
        config.instance.clone()
    }
}

/// Writes the per-step mean-curve table. The bound column carries the
/// matching upper-bound curve, or stays empty where no bound applies.
pub fn write_curves(
    path: &Path,
    result: &AggregateResult,
) -> Result<(), ConfigError> {
    let upper = result
        .bounds
        .iter()
        .find(|b| b.kind == BoundKind::Upper)
        .map(|b| &b.values);
    let mut out = String::with_capacity(result.horizon as usize * 96);
    out.push_str(CURVE_HEADER);
    out.push('\n');
    for i in 0..result.horizon as usize {
        let bound = upper
            .and_then(|values| values.get(i))
            .map(|&(_, v)| sig12(v))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i + 1,
            sig12(result.mean_cum_regret[i]),
            sig12(result.se_cum_regret[i]),
            sig12(result.mean_cum_reward[i]),
            sig12(result.mean_cum_happiness[i]),
            sig12(result.mean_cum_switches[i]),
            bound
        );
    }
    write_file(path, &out)
}

/// Writes the per-arm summary: mean pulls, the classical gap, the
/// thresholded gap, and the pull-count bound for charged arms.
pub fn write_arms(
    path: &Path,
    config: &SimulationConfig,
    result: &AggregateResult,
) -> Result<(), ConfigError> {
    let objective = &config.policy.objective;
    let instance = accounting_instance(config);
    let family = BoundFamily::for_problem(objective.problem());
    let threshold = effective_threshold(&instance, objective)?;
    let mut out = String::new();
    out.push_str(ARMS_HEADER);
    out.push('\n');
    for arm in 0..instance.arm_count() {
        let delta = instance.gap(arm);
        let delta_m = thresholded_regret(&instance, threshold, arm)?;
        let bound = upper_bound_pulls(family, &instance, objective, arm, config.horizon)?
            .map(sig12)
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            arm,
            sig12(result.mean_pulls[arm]),
            sig12(delta),
            sig12(delta_m),
            bound
        );
    }
    write_file(path, &out)
}

/// Writes bound curves only (no simulation columns).
pub fn write_bounds(
    path: &Path,
    config: &SimulationConfig,
) -> Result<(), ConfigError> {
    let objective = &config.policy.objective;
    let instance = accounting_instance(config);
    let upper = satbandit::metrics::upper_bound_curve(&instance, objective, config.horizon)?;
    let lower = satbandit::metrics::lower_bound_curve(&instance, objective, config.horizon)?;
    let mut out = String::new();
    out.push_str(BOUNDS_HEADER);
    out.push('\n');
    for t in 1..=config.horizon {
        let up = upper
            .values
            .get((t - 1) as usize)
            .map(|&(_, v)| sig12(v))
            .unwrap_or_default();
        let low = lower
            .as_ref()
            .and_then(|c| c.values.iter().find(|&&(ct, _)| ct == t))
            .map(|&(_, v)| sig12(v))
            .unwrap_or_default();
        let _ = writeln!(out, "{t},{up},{low}");
    }
    write_file(path, &out)
}

/// Writes the manifest: artifact version, command, seed, timestamp, the
/// config echo, and the emitted files. The echo uses the same key-value
/// format the parser reads, so re-running from the manifest reproduces the
/// curve files byte for byte.
pub fn write_manifest(
    path: &Path,
    plan: &RunPlan,
    command: &str,
    outputs: &[PathBuf],
) -> Result<(), ConfigError> {
    let first = &plan.entries[0].config;
    let objective = &first.policy.objective;
    let timestamp = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut out = String::new();
    let _ = writeln!(out, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "command = {command}");
    let _ = writeln!(out, "timestamp_unix = {timestamp}");
    let problems: Vec<&str> = plan.entries.iter().map(|e| e.problem.tag()).collect();
    let _ = writeln!(out, "problems = [{}]", problems.join(", "));
    let _ = writeln!(out, "means = [{}]", join_floats(first.instance.means()));
    let _ = writeln!(out, "stds = [{}]", join_floats(first.instance.stds()));
    if let Some(m) = plan
        .entries
        .iter()
        .find_map(|e| e.config.policy.objective.mean_threshold())
    {
        let _ = writeln!(out, "mean_threshold = {m}");
    }
    if let Some(d) = plan
        .entries
        .iter()
        .map(|e| e.config.policy.objective.sufficiency().value())
        .find(|&d| d > 0.0)
    {
        let _ = writeln!(out, "delta = {d}");
    }
    if let Some(m) = objective.happiness_threshold() {
        let _ = writeln!(out, "happiness_threshold = {m}");
    }
    if let Some(p) = plan
        .entries
        .iter()
        .find_map(|e| e.config.policy.objective.happiness_prob_threshold())
    {
        let _ = writeln!(out, "happiness_prob = {}", p.value());
    }
    let _ = writeln!(out, "horizon = {}", first.horizon);
    let _ = writeln!(out, "trials = {}", first.trials);
    let _ = writeln!(out, "seed = {}", first.master_seed);
    let _ = writeln!(out, "K = {}", first.policy.k_scale);
    let _ = writeln!(out, "heuristic = {}", heuristic_tag(&first.policy));
    let _ = writeln!(out, "prior = {}", prior_tag(&first.policy));
    for output in outputs {
        let _ = writeln!(out, "output = {}", output.display());
    }
    write_file(path, &out)
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn heuristic_tag(policy: &satbandit::policy::PolicySpec) -> String {
    match policy.heuristic {
        satbandit::policy::Heuristic::GaussianKnownVariance => {
            "gaussian_known_variance".to_string()
        }
        satbandit::policy::Heuristic::Ucb1Normal => "ucb1_normal".to_string(),
        satbandit::policy::Heuristic::SubGaussian { zeta } => format!("sub_gaussian:{zeta}"),
        satbandit::policy::Heuristic::Ucb1Bounded => "ucb1_bounded".to_string(),
    }
}

fn prior_tag(policy: &satbandit::policy::PolicySpec) -> String {
    match policy.prior.kind() {
        satbandit::belief::PriorKind::Uninformative => "uninformative".to_string(),
        satbandit::belief::PriorKind::Uncorrelated => "uncorrelated".to_string(),
        satbandit::belief::PriorKind::Informative => "informative".to_string(),
    }
}

/// Objective echoed in the manifest is the first entry's; kept here so the
/// manifest write stays in one place.
pub fn entry_label(stem: &str, problem: satbandit::env::Problem) -> String {
    format!("{stem}_{}", problem.tag().to_ascii_lowercase())
}
