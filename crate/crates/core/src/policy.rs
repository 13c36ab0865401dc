//! Decision rules: the deterministic upper-credible-limit policy and its
//! satisfaction, sufficing, and satisficing variants, the robust wrappers
//! that run them on standardized rewards, and the alternative heuristics for
//! unknown-variance, sub-Gaussian, and bounded-support rewards.
//!
//! Every selection is a pure function of (belief state, time, spec); ties
//! break to the lowest arm index so that runs are reproducible.

use crate::belief::{transform_prior_standardized, BeliefState, Prior};
use crate::env::{BanditInstance, ObjectiveSpec, Problem};
use crate::error::{Error, Result};
use crate::stats::{quantile, std_normal_quantile, Probability};

/// Which exploration heuristic supplies the per-arm values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Heuristic {
    /// Bayesian upper credible limit for Gaussian rewards with known variance.
    GaussianKnownVariance,
    /// Frequentist rule for Gaussian rewards with unknown variance.
    Ucb1Normal,
    /// Light-tailed rewards with moment-generating-function scale `zeta`.
    SubGaussian { zeta: f64 },
    /// Rewards supported on [0, 1].
    Ucb1Bounded,
}

impl Heuristic {
    fn validate(&self, objective: &ObjectiveSpec) -> Result<()> {
        match self {
            Heuristic::SubGaussian { zeta } => {
                if *zeta <= 0.0 || !zeta.is_finite() {
                    return Err(Error::invalid("sub-Gaussian scale must be positive"));
                }
                if objective.problem().is_sufficing() {
                    return Err(Error::invalid(
                        "the sub-Gaussian heuristic has no sufficing form; use it with delta = 0",
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// A fully-specified decision rule.
#[derive(Debug, Clone)]
pub struct PolicySpec {
    pub objective: ObjectiveSpec,
    /// Credibility schedule scale: the per-step level is 1/(K t).
    pub k_scale: f64,
    pub heuristic: Heuristic,
    pub prior: Prior,
}

impl PolicySpec {
    pub fn new(
        objective: ObjectiveSpec,
        k_scale: f64,
        heuristic: Heuristic,
        prior: Prior,
    ) -> Result<Self> {
        if k_scale <= 0.0 || !k_scale.is_finite() {
            return Err(Error::invalid(format!(
                "credibility scale K must be positive, got {k_scale}"
            )));
        }
        heuristic.validate(&objective)?;
        Ok(PolicySpec {
            objective,
            k_scale,
            heuristic,
            prior,
        })
    }

    /// The default configuration: K = 1, known-variance heuristic, flat prior.
    pub fn default_for(objective: ObjectiveSpec, arms: usize) -> Self {
        PolicySpec {
            objective,
            k_scale: 1.0,
            heuristic: Heuristic::GaussianKnownVariance,
            prior: Prior::uninformative(arms),
        }
    }
}

/// The outcome of one selection.
#[derive(Debug, Clone)]
pub struct Decision {
    pub arm: usize,
    pub q_values: Vec<f64>,
    pub eligible_set: Option<Vec<usize>>,
    /// True when an initialization/forced-play rule chose the arm.
    pub forced: bool,
}

/// Upper credible limit Q = mu + sigma * quantile(1 - 1/(K t)).
///
/// An arm with infinite posterior spread maps to +inf, which forces one pull
/// of every arm before the schedule takes over.
pub fn ucl_q(mean: f64, std: f64, t: u64, k_scale: f64) -> f64 {
    debug_assert!(t >= 1);
    if std.is_infinite() {
        return f64::INFINITY;
    }
    if std == 0.0 {
        return mean;
    }
    let alpha = (1.0 / (k_scale * t as f64)).min(1.0);
    mean + std * quantile(1.0 - alpha)
}

/// Time-independent credible limit Q = mu + sigma * quantile(1 - delta/divisor).
pub fn sufficing_q(mean: f64, std: f64, delta: Probability, divisor: u32) -> Result<f64> {
    let d = delta.value();
    if d <= 0.0 {
        return Err(Error::invalid("sufficing level delta must be in (0, 1]"));
    }
    debug_assert!(divisor == 2 || divisor == 3);
    if std.is_infinite() {
        return Ok(f64::INFINITY);
    }
    if std == 0.0 {
        return Ok(mean);
    }
    Ok(mean + std * quantile(1.0 - d / divisor as f64))
}

/// Unknown-variance value: empirical mean plus a spread estimated from the
/// squared-reward sum. `log_term` is ln t for the certainty objectives and
/// ln(k_tilde / delta) for the sufficing ones.
fn ucb1_normal_value(state: &BeliefState, arm: usize, scale: f64, log_term: f64) -> f64 {
    let n = state.pulls(arm) as f64;
    let mean = state.empirical_mean(arm);
    let q = state.squared_reward_sum(arm);
    let var_num = (q - n * mean * mean).max(0.0);
    mean + (scale * var_num / (n - 1.0) * log_term / n).sqrt()
}

/// Heuristic value for the unknown-variance rule, plus its forced-play rule:
/// any arm with fewer than ceil(8 ln t) pulls (or fewer than 2, below which
/// the variance estimate is undefined) is played first.
pub fn ucb1_normal_q(state: &BeliefState, arm: usize, t: u64) -> f64 {
    ucb1_normal_value(state, arm, 16.0, (t as f64).ln())
}

/// Sufficing form of the unknown-variance rule with k_tilde in {2, 3}.
pub fn ucb1_normal_sufficing_q(
    state: &BeliefState,
    arm: usize,
    delta: Probability,
    k_tilde: u32,
) -> Result<f64> {
    let d = delta.value();
    if d <= 0.0 {
        return Err(Error::invalid("sufficing level delta must be in (0, 1]"));
    }
    Ok(ucb1_normal_value(state, arm, 4.0, (k_tilde as f64 / d).ln()))
}

/// Light-tailed value: empirical mean + sqrt(8 zeta ln t / n).
pub fn sub_gaussian_q(state: &BeliefState, arm: usize, t: u64, zeta: f64) -> f64 {
    let n = state.pulls(arm) as f64;
    state.empirical_mean(arm) + (8.0 * zeta * (t as f64).ln() / n).sqrt()
}

/// Bounded-support value: empirical mean + sqrt(2 ln t / n).
pub fn ucb1_q(state: &BeliefState, arm: usize, t: u64) -> f64 {
    let n = state.pulls(arm) as f64;
    state.empirical_mean(arm) + (2.0 * (t as f64).ln() / n).sqrt()
}

/// Sufficing form of the bounded-support value with k_tilde in {2, 3}.
pub fn ucb1_sufficing_q(
    state: &BeliefState,
    arm: usize,
    delta: Probability,
    k_tilde: u32,
) -> Result<f64> {
    let d = delta.value();
    if d <= 0.0 {
        return Err(Error::invalid("sufficing level delta must be in (0, 1]"));
    }
    let n = state.pulls(arm) as f64;
    Ok(state.empirical_mean(arm) + ((k_tilde as f64 / d).ln() / (2.0 * n)).sqrt())
}

/// The divisor/k_tilde the sufficing heuristics use: 2 when maximizing, 3
/// when selecting against a known threshold.
fn sufficing_divisor(problem: Problem) -> u32 {
    if problem.uses_known_threshold() {
        3
    } else {
        2
    }
}

/// Computes the per-arm heuristic values, or short-circuits with a forced
/// arm when an initialization rule applies.
fn heuristic_values(state: &BeliefState, t: u64, spec: &PolicySpec) -> Result<ForcedOrValues> {
    let n = state.arms();
    let problem = spec.objective.problem();
    match spec.heuristic {
        Heuristic::GaussianKnownVariance => {
            let mut q = Vec::with_capacity(n);
            for arm in 0..n {
                let (mean, std) = state.marginal(arm);
                let value = if problem.is_sufficing() {
                    sufficing_q(
                        mean,
                        std,
                        spec.objective.sufficiency(),
                        sufficing_divisor(problem),
                    )?
                } else {
                    ucl_q(mean, std, t, spec.k_scale)
                };
                q.push(value);
            }
            Ok(ForcedOrValues::Values(q))
        }
        Heuristic::Ucb1Normal => {
            let threshold = ((8.0 * (t as f64).ln()).ceil() as u64).max(2);
            if let Some(arm) = (0..n).find(|&i| state.pulls(i) < threshold) {
                return Ok(ForcedOrValues::Forced(arm));
            }
            let mut q = Vec::with_capacity(n);
            for arm in 0..n {
                let value = if problem.is_sufficing() {
                    ucb1_normal_sufficing_q(
                        state,
                        arm,
                        spec.objective.sufficiency(),
                        sufficing_divisor(problem),
                    )?
                } else {
                    ucb1_normal_q(state, arm, t)
                };
                q.push(value);
            }
            Ok(ForcedOrValues::Values(q))
        }
        Heuristic::SubGaussian { zeta } => {
            if let Some(arm) = (0..n).find(|&i| state.pulls(i) == 0) {
                return Ok(ForcedOrValues::Forced(arm));
            }
            Ok(ForcedOrValues::Values(
                (0..n).map(|arm| sub_gaussian_q(state, arm, t, zeta)).collect(),
            ))
        }
        Heuristic::Ucb1Bounded => {
            if let Some(arm) = (0..n).find(|&i| state.pulls(i) == 0) {
                return Ok(ForcedOrValues::Forced(arm));
            }
            let mut q = Vec::with_capacity(n);
            for arm in 0..n {
                let value = if problem.is_sufficing() {
                    ucb1_sufficing_q(
                        state,
                        arm,
                        spec.objective.sufficiency(),
                        sufficing_divisor(problem),
                    )?
                } else {
                    ucb1_q(state, arm, t)
                };
                q.push(value);
            }
            Ok(ForcedOrValues::Values(q))
        }
    }
}

enum ForcedOrValues {
    Forced(usize),
    Values(Vec<f64>),
}

fn argmax_lowest_index(q: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in q.iter().enumerate().skip(1) {
        if v > q[best] {
            best = i;
        }
    }
    best
}

fn forced_decision(arm: usize, arms: usize) -> Decision {
    let mut q_values = vec![f64::NAN; arms];
    q_values[arm] = f64::INFINITY;
    Decision {
        arm,
        q_values,
        eligible_set: None,
        forced: true,
    }
}

fn maximize(state: &BeliefState, t: u64, spec: &PolicySpec) -> Result<Decision> {
    match heuristic_values(state, t, spec)? {
        ForcedOrValues::Forced(arm) => Ok(forced_decision(arm, state.arms())),
        ForcedOrValues::Values(q) => {
            let arm = argmax_lowest_index(&q);
            let forced = q[arm] == f64::INFINITY;
            Ok(Decision {
                arm,
                q_values: q,
                eligible_set: None,
                forced,
            })
        }
    }
}

fn eligible_select(
    state: &BeliefState,
    t: u64,
    spec: &PolicySpec,
    mean_threshold: f64,
) -> Result<Decision> {
    match heuristic_values(state, t, spec)? {
        ForcedOrValues::Forced(arm) => Ok(forced_decision(arm, state.arms())),
        ForcedOrValues::Values(q) => {
            let eligible: Vec<usize> = (0..q.len()).filter(|&i| q[i] >= mean_threshold).collect();
            let arm = if let Some(&first) = eligible.first() {
                eligible
                    .iter()
                    .copied()
                    .fold(first, |best, i| if q[i] > q[best] { i } else { best })
            } else {
                argmax_lowest_index(&q)
            };
            let forced = q[arm] == f64::INFINITY;
            Ok(Decision {
                arm,
                q_values: q,
                eligible_set: Some(eligible),
                forced,
            })
        }
    }
}

/// Standard maximizing selection: argmax of the time-indexed credible limit.
pub fn select_ucl(state: &BeliefState, t: u64, spec: &PolicySpec) -> Result<Decision> {
    maximize(state, t, spec)
}

/// Satisfaction selection: the arm with maximal value inside the eligible
/// set, falling back to the overall maximum when the set is empty.
pub fn select_satisfaction(state: &BeliefState, t: u64, spec: &PolicySpec) -> Result<Decision> {
    let threshold = spec
        .objective
        .mean_threshold()
        .ok_or_else(|| Error::invalid("satisfaction selection requires `mean_threshold`"))?;
    eligible_select(state, t, spec, threshold)
}

/// Sufficing selection: argmax of the time-independent credible limit.
pub fn select_delta_sufficing(state: &BeliefState, t: u64, spec: &PolicySpec) -> Result<Decision> {
    maximize(state, t, spec)
}

/// Satisficing selection: eligible-set logic over the time-independent limit.
pub fn select_m_delta_satisficing(
    state: &BeliefState,
    t: u64,
    spec: &PolicySpec,
) -> Result<Decision> {
    let threshold = spec
        .objective
        .mean_threshold()
        .ok_or_else(|| Error::invalid("satisficing selection requires `mean_threshold`"))?;
    eligible_select(state, t, spec, threshold)
}

/// Dispatches to the selection rule the spec's objective calls for. Robust
/// objectives must be wrapped first; see [`wrap_robust`].
pub fn select(state: &BeliefState, t: u64, spec: &PolicySpec) -> Result<Decision> {
    match spec.objective.problem() {
        Problem::Standard => select_ucl(state, t, spec),
        Problem::Satisfaction => select_satisfaction(state, t, spec),
        Problem::Sufficing => select_delta_sufficing(state, t, spec),
        Problem::Satisficing => select_m_delta_satisficing(state, t, spec),
        robust => Err(Error::invalid(format!(
            "{robust} must be wrapped onto the standardized scale before selection"
        ))),
    }
}

/// A robust policy reduced to its mean-reward analog on standardized rewards.
#[derive(Debug, Clone)]
pub struct WrappedRobust {
    /// The equivalent mean-reward policy; its prior lives on the
    /// standardized scale and its threshold (if any) is quantile(pi).
    pub inner: PolicySpec,
    /// Reward-space happiness threshold used by the preprocessor.
    pub happiness_threshold: f64,
}

impl WrappedRobust {
    /// Standardizes one observed reward before it reaches the inference
    /// update. The standardized observation has unit sampling noise.
    pub fn preprocess(&self, reward: f64, sigma_s: f64) -> f64 {
        (reward - self.happiness_threshold) / sigma_s
    }
}

/// Reduces a robust objective (thresholding instantaneous rewards) to its
/// mean-reward analog on the standardized scale: the prior transforms, the
/// sampling noise becomes 1, and a happiness-probability threshold becomes
/// the mean threshold quantile(pi).
///
/// The instance is consulted only to reject infeasible thresholds up front;
/// the returned policy never reads it.
pub fn wrap_robust(spec: &PolicySpec, instance: &BanditInstance) -> Result<WrappedRobust> {
    let problem = spec.objective.problem();
    if !problem.is_robust() {
        return Err(Error::invalid(format!(
            "{problem} does not threshold instantaneous rewards"
        )));
    }
    let happiness_threshold = spec
        .objective
        .happiness_threshold()
        .ok_or_else(|| Error::invalid("robust objective requires `happiness_threshold`"))?;

    let mean_threshold = match problem {
        Problem::RobustSatisfaction | Problem::RobustSatisficing => {
            let pi = spec
                .objective
                .happiness_prob_threshold()
                .ok_or_else(|| Error::invalid("robust satisfaction requires `happiness_prob`"))?;
            let x = std_normal_quantile(pi);
            let std_instance = instance.standardized(happiness_threshold);
            if std_instance.best_mean() < x {
                return Err(Error::infeasible(format!(
                    "no arm reaches happiness probability {}",
                    pi.value()
                )));
            }
            Some(x)
        }
        _ => None,
    };

    let objective = ObjectiveSpec::new(
        problem.mean_reward_analog(),
        mean_threshold,
        spec.objective.sufficiency(),
        Some(happiness_threshold),
        spec.objective.happiness_prob_threshold(),
    )?;
    let prior = transform_prior_standardized(&spec.prior, instance.stds(), happiness_threshold)?;
    Ok(WrappedRobust {
        inner: PolicySpec {
            objective,
            k_scale: spec.k_scale,
            heuristic: spec.heuristic,
            prior,
        },
        happiness_threshold,
    })
}
