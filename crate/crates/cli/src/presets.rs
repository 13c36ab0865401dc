//! Built-in experiment presets, shipped as embedded config text. Each one
//! reproduces the data behind one reference figure: the four-armed Gaussian
//! instance with means [1, 2, 3, 4], run for 1000 steps and averaged over
//! 100 seeded trials.

use crate::config::{parse_config_text, ConfigError, RunPlan};

/// Standard (P1) and satisfaction (P2) objectives: logarithmic regret
/// against the logarithmic bound curves.
pub const FIG1: &str = "\
# fig1: certainty objectives, mean-reward thresholding
problems = [P1, P2]
means = [1, 2, 3, 4]
stds = [1, 1, 1, 1]
mean_threshold = 2.5
horizon = 1000
trials = 100
seed = 42
K = 1
heuristic = gaussian_known_variance
prior = uninformative
";

/// Sufficing (P3) and satisficing (P4) objectives: finite regret under the
/// constant bound values.
pub const FIG2: &str = "\
# fig2: sufficing objectives, mean-reward thresholding
problems = [P3, P4]
means = [1, 2, 3, 4]
stds = [1, 1, 1, 1]
mean_threshold = 2.5
delta = 0.05
horizon = 1000
trials = 100
seed = 42
K = 1
heuristic = gaussian_known_variance
prior = uninformative
";

/// Reward and switching comparison between the standard (P1) and sufficing
/// (P3) objectives on shared seeds.
pub const FIG3: &str = "\
# fig3: exploration cost of certainty vs sufficing
problems = [P1, P3]
means = [1, 2, 3, 4]
stds = [1, 1, 1, 1]
delta = 0.05
horizon = 1000
trials = 100
seed = 42
K = 1
heuristic = gaussian_known_variance
prior = uninformative
";

/// Robust objective (P5) on the skewed instance: the optimal arm is the one
/// with the best standardized mean, not the best raw mean.
pub const FIG4: &str = "\
# fig4: robust objective, instantaneous-reward thresholding
problems = [P5]
means = [1, 2, 3, 4]
stds = [1, 1, 1, 3]
happiness_threshold = 2
horizon = 1000
trials = 100
seed = 42
K = 1
heuristic = gaussian_known_variance
prior = uninformative
";

/// Happiness and switching comparison between the standard (P1), robust
/// (P5), and robust sufficing (P7) objectives on shared seeds.
pub const FIG5: &str = "\
# fig5: happiness rates and exploration costs
problems = [P1, P5, P7]
means = [1, 2, 3, 4]
stds = [1, 1, 1, 3]
happiness_threshold = 2
delta = 0.05
horizon = 1000
trials = 100
seed = 42
K = 1
heuristic = gaussian_known_variance
prior = uninformative
";

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig2", "fig3", "fig4", "fig5"];

pub fn preset_text(name: &str) -> Option<&'static str> {
    match name {
        "fig1" => Some(FIG1),
        "fig2" => Some(FIG2),
        "fig3" => Some(FIG3),
        "fig4" => Some(FIG4),
        "fig5" => Some(FIG5),
        _ => None,
    }
}

/// Parses a preset into a run plan.
pub fn preset_plan(name: &str) -> Result<RunPlan, ConfigError> {
    let text = preset_text(name).ok_or_else(|| {
        ConfigError::Syntax(format!(
            "unknown preset `{name}` (expected one of {})",
            PRESET_NAMES.join(", ")
        ))
    })?;
    parse_config_text(text, name)
}
