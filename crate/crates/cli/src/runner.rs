//! Orchestration: runs a plan's simulations (optionally on a sized worker
//! pool), emits result files, and writes the manifest.

use std::path::{Path, PathBuf};

use satbandit::sim::run_monte_carlo;

use crate::config::{ConfigError, RunPlan};
use crate::emit::{entry_label, write_arms, write_bounds, write_curves, write_manifest};

fn ensure_out_dir(out_dir: &Path) -> Result<(), ConfigError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", out_dir.display())))
}

fn with_pool<T>(
    jobs: Option<usize>,
    body: impl FnOnce() -> Result<T, ConfigError> + Send,
) -> Result<T, ConfigError>
where
    T: Send,
{
    match jobs {
        None => body(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| ConfigError::Io(format!("worker pool: {e}")))?
            .install(body),
    }
}

/// Executes every entry of the plan and emits curves, per-arm summaries,
/// and the manifest. Returns the emitted file paths (manifest last).
pub fn run_plan(
    plan: &RunPlan,
    jobs: Option<usize>,
    out_dir: &Path,
    command: &str,
) -> Result<Vec<PathBuf>, ConfigError> {
    ensure_out_dir(out_dir)?;
    let mut outputs = Vec::new();
    for entry in &plan.entries {
        let label = entry_label(&plan.stem, entry.problem);
        let result = with_pool(jobs, || Ok(run_monte_carlo(&entry.config)?))?;
        let curves_path = out_dir.join(format!("{label}_curves.csv"));
        write_curves(&curves_path, &result)?;
        let arms_path = out_dir.join(format!("{label}_arms.csv"));
        write_arms(&arms_path, &entry.config, &result)?;
        println!(
            "{label}: regret {:.3} at T={}, mean stop time {:.1}",
            result.mean_cum_regret.last().copied().unwrap_or(0.0),
            entry.config.horizon,
            result.mean_stopping_time,
        );
        outputs.push(curves_path);
        outputs.push(arms_path);
    }
    let manifest_path = out_dir.join("manifest.txt");
    write_manifest(&manifest_path, plan, command, &outputs)?;
    outputs.push(manifest_path);
    Ok(outputs)
}

/// Emits bound curves only, with no simulation.
pub fn bounds_plan(
    plan: &RunPlan,
    out_dir: &Path,
    command: &str,
) -> Result<Vec<PathBuf>, ConfigError> {
    ensure_out_dir(out_dir)?;
    let mut outputs = Vec::new();
    for entry in &plan.entries {
        let label = entry_label(&plan.stem, entry.problem);
        let path = out_dir.join(format!("{label}_bounds.csv"));
        write_bounds(&path, &entry.config)?;
        outputs.push(path);
    }
    let manifest_path = out_dir.join("manifest.txt");
    write_manifest(&manifest_path, plan, command, &outputs)?;
    outputs.push(manifest_path);
    Ok(outputs)
}
