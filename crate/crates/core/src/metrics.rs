//! Omniscient regret accounting for all eight objectives and the matching
//! theoretical bound curves, evaluable per horizon for overlay against the
//! empirical curves.
//!
//! For robust objectives every function here expects the standardized
//! instance (unit stds, means equal to the standardized mean rewards); the
//! Gaussian standardization equivalence transfers both the regret
//! definition and the bounds.

use crate::env::{satisfying_set, thresholded_regret, BanditInstance, ObjectiveSpec, Problem};
use crate::error::{Error, Result};
use crate::stats::{quantile, std_normal_quantile, Probability};

/// One step of a trial, as the omniscient ledger sees it.
#[derive(Debug, Clone)]
pub struct StepRecord {
    /// Decision time, starting at 1.
    pub t: u64,
    pub arm: usize,
    /// Raw observed reward (never standardized).
    pub reward: f64,
    /// Expected satisficing regret charged for the step.
    pub regret: f64,
    /// Regret charged unconditionally (no confidence gate); identical to
    /// `regret` whenever delta = 0.
    pub regret_omniscient: f64,
    /// Whether the raw reward reached the happiness threshold.
    pub happy: bool,
    /// Whether the arm differs from the previous step's arm.
    pub switched: bool,
    /// The agent's confidence of satisfaction at decision time.
    pub confidence: Probability,
}

/// Cumulative (prefix-sum) curves over one trial.
#[derive(Debug, Clone, Default)]
pub struct CumulativeCurves {
    pub regret: Vec<f64>,
    pub reward: Vec<f64>,
    pub happiness: Vec<f64>,
    pub switches: Vec<f64>,
}

/// A theoretical bound evaluated per horizon.
#[derive(Debug, Clone)]
pub struct BoundCurve {
    pub label: String,
    pub kind: BoundKind,
    /// (horizon, value) pairs in increasing horizon order.
    pub values: Vec<(u64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

/// Which performance guarantee applies to an objective: the logarithmic
/// guarantees of the certainty objectives or the horizon-independent ones of
/// the sufficing objectives, each in a maximizing and a known-threshold form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundFamily {
    /// Maximizing with certainty: pulls grow logarithmically.
    Standard,
    /// Known threshold with certainty: pulls grow logarithmically.
    Satisfaction,
    /// Maximizing with tolerance delta: finite pulls.
    Sufficing,
    /// Known threshold with tolerance delta: finite pulls.
    Satisficing,
}

impl BoundFamily {
    pub fn for_problem(problem: Problem) -> BoundFamily {
        match problem.mean_reward_analog() {
            Problem::Standard => BoundFamily::Standard,
            Problem::Satisfaction => BoundFamily::Satisfaction,
            Problem::Sufficing => BoundFamily::Sufficing,
            Problem::Satisficing => BoundFamily::Satisficing,
            _ => unreachable!("mean_reward_analog returns a mean-reward problem"),
        }
    }

    fn check_matches(self, objective: &ObjectiveSpec) -> Result<()> {
        if BoundFamily::for_problem(objective.problem()) != self {
            return Err(Error::invalid(format!(
                "bound family {self:?} does not match objective {}",
                objective.problem()
            )));
        }
        Ok(())
    }

    /// Upper bounds of the sufficing families do not depend on the horizon.
    pub fn constant_in_horizon(self) -> bool {
        matches!(self, BoundFamily::Sufficing | BoundFamily::Satisficing)
    }
}

/// The threshold the regret definition compares means against: the best mean
/// for the maximizing objectives, the configured threshold otherwise. Robust
/// objectives resolve against the standardized instance, with the mean
/// threshold quantile(pi).
pub fn effective_threshold(instance: &BanditInstance, objective: &ObjectiveSpec) -> Result<f64> {
    match objective.problem() {
        Problem::Standard | Problem::Sufficing | Problem::Robust | Problem::RobustSufficing => {
            Ok(instance.best_mean())
        }
        Problem::Satisfaction | Problem::Satisficing => objective
            .mean_threshold()
            .ok_or_else(|| Error::invalid("objective requires `mean_threshold`")),
        Problem::RobustSatisfaction | Problem::RobustSatisficing => {
            let pi = objective
                .happiness_prob_threshold()
                .ok_or_else(|| Error::invalid("objective requires `happiness_prob`"))?;
            Ok(std_normal_quantile(pi))
        }
    }
}

/// Expected satisficing regret of one step: the thresholded gap when the
/// agent's confidence of satisfaction is at most 1 - delta, zero otherwise.
pub fn satisficing_regret_step(
    instance: &BanditInstance,
    objective: &ObjectiveSpec,
    arm: usize,
    confidence: Probability,
) -> Result<f64> {
    let threshold = effective_threshold(instance, objective)?;
    let gap = thresholded_regret(instance, threshold, arm)?;
    if confidence.value() <= 1.0 - objective.sufficiency().value() {
        Ok(gap)
    } else {
        Ok(0.0)
    }
}

/// Prefix sums of the per-step fields. Records must arrive in increasing t.
pub fn accumulate(records: &[StepRecord]) -> Result<CumulativeCurves> {
    let mut curves = CumulativeCurves::default();
    let (mut regret, mut reward, mut happy, mut switches) = (0.0, 0.0, 0.0, 0.0);
    let mut last_t = 0;
    for record in records {
        if record.t <= last_t {
            return Err(Error::invalid(format!(
                "records out of order: t={} after t={last_t}",
                record.t
            )));
        }
        last_t = record.t;
        regret += record.regret;
        reward += record.reward;
        happy += record.happy as u8 as f64;
        switches += record.switched as u8 as f64;
        curves.regret.push(regret);
        curves.reward.push(reward);
        curves.happiness.push(happy);
        curves.switches.push(switches);
    }
    Ok(curves)
}

/// Kullback-Leibler divergence between N(m1, s1^2) and N(m2, s2^2).
pub fn kl_gaussian(m1: f64, s1: f64, m2: f64, s2: f64) -> Result<f64> {
    if s1 <= 0.0 || s2 <= 0.0 {
        return Err(Error::invalid("standard deviations must be positive"));
    }
    let delta = m2 - m1;
    let ratio = (s1 * s1) / (s2 * s2);
    Ok(0.5 * (delta * delta / (s2 * s2) + ratio - 1.0 - ratio.ln()))
}

/// Asymptotic minimum number of pulls of a suboptimal arm by horizon T,
/// leading term only: ln T / KL(arm || best).
pub fn lower_bound_lai_robbins(instance: &BanditInstance, arm: usize, horizon: u64) -> Result<f64> {
    if horizon < 2 {
        return Err(Error::invalid("lower bound needs horizon >= 2"));
    }
    let best = argmax_mean(instance);
    if instance.mean(arm) >= instance.mean(best) {
        return Err(Error::invalid("the optimal arm has no pull lower bound"));
    }
    let kl = kl_gaussian(
        instance.mean(arm),
        instance.std(arm),
        instance.mean(best),
        instance.std(best),
    )?;
    Ok((horizon as f64).ln() / kl)
}

/// Multiple-plays analog: divergence taken against the k-th best arm.
pub fn lower_bound_multiple_plays(
    instance: &BanditInstance,
    arm: usize,
    k: usize,
    horizon: u64,
) -> Result<f64> {
    if horizon < 2 {
        return Err(Error::invalid("lower bound needs horizon >= 2"));
    }
    let mut order: Vec<usize> = (0..instance.arm_count()).collect();
    order.sort_by(|&a, &b| instance.mean(b).partial_cmp(&instance.mean(a)).unwrap());
    if k == 0 || k > instance.arm_count() {
        return Err(Error::invalid("k must be in 1..=arm count"));
    }
    let kth = order[k - 1];
    if instance.mean(arm) >= instance.mean(kth) {
        return Err(Error::invalid("arm is among the k best"));
    }
    let kl = kl_gaussian(
        instance.mean(arm),
        instance.std(arm),
        instance.mean(kth),
        instance.std(kth),
    )?;
    Ok((horizon as f64).ln() / kl)
}

/// Worst-case sample-complexity floor for identifying the k best arms to
/// accuracy epsilon with confidence 1 - delta.
pub fn lower_bound_pac(arms: usize, k: usize, epsilon: f64, delta: f64) -> Result<f64> {
    if epsilon <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if delta <= 0.0 || delta >= 1.0 {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    Ok((arms as f64) / (18375.0 * epsilon * epsilon) * (k as f64 / (8.0 * delta)).ln())
}

/// Order-level sample-complexity floor for single best-arm identification.
pub fn lower_bound_explore1(epsilon: f64, delta: f64) -> Result<f64> {
    if epsilon <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    if delta <= 0.0 || delta >= 1.0 {
        return Err(Error::invalid("delta must lie in (0, 1)"));
    }
    Ok((1.0 / delta).ln() / (epsilon * epsilon))
}

fn argmax_mean(instance: &BanditInstance) -> usize {
    let mut best = 0;
    for i in 1..instance.arm_count() {
        if instance.mean(i) > instance.mean(best) {
            best = i;
        }
    }
    best
}

/// Per-arm pull-count upper bound at the given horizon; `None` for arms with
/// no thresholded gap (they are never charged regret).
pub fn upper_bound_pulls(
    family: BoundFamily,
    instance: &BanditInstance,
    objective: &ObjectiveSpec,
    arm: usize,
    horizon: u64,
) -> Result<Option<f64>> {
    family.check_matches(objective)?;
    if horizon < 1 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    let threshold = effective_threshold(instance, objective)?;
    let gap = thresholded_regret(instance, threshold, arm)?;
    if gap == 0.0 {
        return Ok(None);
    }
    let sigma = instance.std(arm);
    let log_t = (horizon as f64).ln();
    let value = match family {
        BoundFamily::Standard => (8.0 * sigma * sigma / (gap * gap) + 2.0) * log_t + 3.0,
        // Stated under unit sampling variance; evaluated on the rescaled gap.
        BoundFamily::Satisfaction => {
            let scaled = gap / sigma;
            (8.0 / (scaled * scaled) + 3.0) * log_t + 4.0
        }
        BoundFamily::Sufficing => {
            let q = quantile(1.0 - objective.sufficiency().value() / 2.0);
            4.0 * sigma * sigma / (gap * gap) * q * q + 1.0
        }
        BoundFamily::Satisficing => {
            let q = quantile(1.0 - objective.sufficiency().value() / 3.0);
            4.0 * sigma * sigma / (gap * gap) * q * q + 1.0
        }
    };
    Ok(Some(value))
}

/// Cumulative-regret upper bound at the given horizon: the sum over arms
/// with positive thresholded gap of gap times the pull-count bound.
pub fn upper_bound_total(
    family: BoundFamily,
    instance: &BanditInstance,
    objective: &ObjectiveSpec,
    horizon: u64,
) -> Result<f64> {
    let threshold = effective_threshold(instance, objective)?;
    let mut total = 0.0;
    for arm in 0..instance.arm_count() {
        if let Some(pulls) = upper_bound_pulls(family, instance, objective, arm, horizon)? {
            total += thresholded_regret(instance, threshold, arm)? * pulls;
        }
    }
    Ok(total)
}

/// The upper-bound curve matching an objective, evaluated at 1..=horizon.
pub fn upper_bound_curve(
    instance: &BanditInstance,
    objective: &ObjectiveSpec,
    horizon: u64,
) -> Result<BoundCurve> {
    let family = BoundFamily::for_problem(objective.problem());
    let mut values = Vec::with_capacity(horizon as usize);
    for t in 1..=horizon {
        values.push((t, upper_bound_total(family, instance, objective, t)?));
    }
    let label = match family {
        BoundFamily::Standard => "standard_ucl_upper",
        BoundFamily::Satisfaction => "satisfaction_ucl_upper",
        BoundFamily::Sufficing => "sufficing_ucl_upper",
        BoundFamily::Satisficing => "satisficing_ucl_upper",
    };
    Ok(BoundCurve {
        label: label.to_string(),
        kind: BoundKind::Upper,
        values,
    })
}

/// The asymptotic lower-bound curve matching an objective (leading terms
/// only). Certainty objectives get the logarithmic information bound summed
/// over charged arms; sufficing objectives get a horizon-independent
/// order-level floor.
pub fn lower_bound_curve(
    instance: &BanditInstance,
    objective: &ObjectiveSpec,
    horizon: u64,
) -> Result<Option<BoundCurve>> {
    let family = BoundFamily::for_problem(objective.problem());
    let threshold = effective_threshold(instance, objective)?;
    let (_, k) = satisfying_set(instance, threshold)?;
    let charged: Vec<usize> = (0..instance.arm_count())
        .filter(|&i| instance.mean(i) < threshold)
        .collect();
    if charged.is_empty() {
        return Ok(None);
    }
    let value_at = |t: u64| -> Result<f64> {
        match family {
            BoundFamily::Standard | BoundFamily::Satisfaction => {
                let mut total = 0.0;
                for &arm in &charged {
                    let gap = threshold - instance.mean(arm);
                    total += gap * lower_bound_multiple_plays(instance, arm, k, t)?;
                }
                Ok(total)
            }
            BoundFamily::Sufficing => {
                let delta = objective.sufficiency().value();
                let mut total = 0.0;
                for &arm in &charged {
                    let gap = threshold - instance.mean(arm);
                    total += gap * lower_bound_explore1(gap, delta)?;
                }
                Ok(total)
            }
            BoundFamily::Satisficing => {
                let delta = objective.sufficiency().value();
                // Gap from the threshold to the worst satisfying arm.
                let eps = instance
                    .means()
                    .iter()
                    .filter(|&&m| m >= threshold)
                    .cloned()
                    .fold(f64::INFINITY, f64::min)
                    - threshold;
                if eps <= 0.0 {
                    return Ok(f64::NAN);
                }
                lower_bound_pac(instance.arm_count(), k, eps, delta)
            }
        }
    };
    let mut values = Vec::with_capacity(horizon as usize);
    for t in 2..=horizon.max(2) {
        let v = value_at(t)?;
        if v.is_nan() {
            return Ok(None);
        }
        values.push((t, v));
    }
    Ok(Some(BoundCurve {
        label: "asymptotic_lower".to_string(),
        kind: BoundKind::Lower,
        values,
    }))
}
