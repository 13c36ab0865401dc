//! Ground-truth bandit instance and the omniscient quantities that regret
//! accounting needs but policies never see.

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::rng::next_std_normal;
use crate::stats::{phi, Probability};

/// The eight objectives: four thresholding the unknown mean reward and four
/// robust ones thresholding the instantaneous reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Problem {
    /// P1: maximize mean reward, seek certainty.
    Standard,
    /// P2: mean reward above a known threshold, seek certainty.
    Satisfaction,
    /// P3: maximize mean reward, settle for confidence 1 - delta.
    Sufficing,
    /// P4: mean reward above a known threshold with confidence 1 - delta.
    Satisficing,
    /// P5: maximize the per-step happiness probability, seek certainty.
    Robust,
    /// P6: happiness probability above a known threshold, seek certainty.
    RobustSatisfaction,
    /// P7: maximize happiness probability with confidence 1 - delta.
    RobustSufficing,
    /// P8: happiness probability above a threshold with confidence 1 - delta.
    RobustSatisficing,
}

impl Problem {
    pub const ALL: [Problem; 8] = [
        Problem::Standard,
        Problem::Satisfaction,
        Problem::Sufficing,
        Problem::Satisficing,
        Problem::Robust,
        Problem::RobustSatisfaction,
        Problem::RobustSufficing,
        Problem::RobustSatisficing,
    ];

    /// True for the objectives defined on the instantaneous reward.
    pub fn is_robust(self) -> bool {
        matches!(
            self,
            Problem::Robust
                | Problem::RobustSatisfaction
                | Problem::RobustSufficing
                | Problem::RobustSatisficing
        )
    }

    /// True for the objectives that tolerate uncertainty (delta > 0).
    pub fn is_sufficing(self) -> bool {
        matches!(
            self,
            Problem::Sufficing
                | Problem::Satisficing
                | Problem::RobustSufficing
                | Problem::RobustSatisficing
        )
    }

    /// True when the policy selects from an eligible set defined by a known
    /// threshold rather than maximizing.
    pub fn uses_known_threshold(self) -> bool {
        matches!(
            self,
            Problem::Satisfaction
                | Problem::Satisficing
                | Problem::RobustSatisfaction
                | Problem::RobustSatisficing
        )
    }

    /// The mean-reward objective a robust objective reduces to once rewards
    /// are standardized; identity for P1-P4.
    pub fn mean_reward_analog(self) -> Problem {
        match self {
            Problem::Robust => Problem::Standard,
            Problem::RobustSatisfaction => Problem::Satisfaction,
            Problem::RobustSufficing => Problem::Sufficing,
            Problem::RobustSatisficing => Problem::Satisficing,
            other => other,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Problem::Standard => "P1",
            Problem::Satisfaction => "P2",
            Problem::Sufficing => "P3",
            Problem::Satisficing => "P4",
            Problem::Robust => "P5",
            Problem::RobustSatisfaction => "P6",
            Problem::RobustSufficing => "P7",
            Problem::RobustSatisficing => "P8",
        }
    }

    pub fn parse(s: &str) -> Result<Problem> {
        let lowered = s.trim().to_ascii_lowercase();
        let problem = match lowered.as_str() {
            "p1" | "standard" => Problem::Standard,
            "p2" | "satisfaction" => Problem::Satisfaction,
            "p3" | "sufficing" => Problem::Sufficing,
            "p4" | "satisficing" => Problem::Satisficing,
            "p5" | "robust" => Problem::Robust,
            "p6" | "robust_satisfaction" => Problem::RobustSatisfaction,
            "p7" | "robust_sufficing" => Problem::RobustSufficing,
            "p8" | "robust_satisficing" => Problem::RobustSatisficing,
            _ => return Err(Error::invalid(format!("unknown problem `{s}`"))),
        };
        Ok(problem)
    }
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Ground-truth arm distributions: each arm pays N(mean, std^2).
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    stds: Vec<f64>,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, stds: Vec<f64>) -> Result<Self> {
        if means.len() != stds.len() {
            return Err(Error::invalid(format!(
                "means ({}) and stds ({}) must have equal length",
                means.len(),
                stds.len()
            )));
        }
        if means.len() < 2 {
            return Err(Error::invalid("instance needs at least 2 arms"));
        }
        if means.iter().any(|m| !m.is_finite()) {
            return Err(Error::invalid("means must be finite"));
        }
        if stds.iter().any(|s| !s.is_finite() || *s <= 0.0) {
            return Err(Error::invalid("stds must be positive and finite"));
        }
        Ok(BanditInstance { means, stds })
    }

    pub fn arm_count(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn stds(&self) -> &[f64] {
        &self.stds
    }

    pub fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    pub fn std(&self, arm: usize) -> f64 {
        self.stds[arm]
    }

    pub fn best_mean(&self) -> f64 {
        self.means.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Gap to the best arm, the classical per-pull regret.
    pub fn gap(&self, arm: usize) -> f64 {
        self.best_mean() - self.means[arm]
    }

    fn check_arm(&self, arm: usize) -> Result<()> {
        if arm >= self.arm_count() {
            return Err(Error::invalid(format!(
                "arm {arm} out of range for {} arms",
                self.arm_count()
            )));
        }
        Ok(())
    }

    /// The equivalent instance on the standardized scale: means become
    /// (m_i - happiness_threshold) / std_i and every std becomes 1.
    pub fn standardized(&self, happiness_threshold: f64) -> BanditInstance {
        let means = self
            .means
            .iter()
            .zip(&self.stds)
            .map(|(&m, &s)| standardized_mean(m, s, happiness_threshold).expect("stds positive"))
            .collect();
        BanditInstance {
            means,
            stds: vec![1.0; self.arm_count()],
        }
    }
}

/// An objective: which problem, plus its thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    problem: Problem,
    mean_threshold: Option<f64>,
    sufficiency: Probability,
    happiness_threshold: Option<f64>,
    happiness_prob_threshold: Option<Probability>,
}

impl ObjectiveSpec {
    pub fn new(
        problem: Problem,
        mean_threshold: Option<f64>,
        sufficiency: Probability,
        happiness_threshold: Option<f64>,
        happiness_prob_threshold: Option<Probability>,
    ) -> Result<Self> {
        let delta = sufficiency.value();
        if problem.is_sufficing() {
            if delta <= 0.0 {
                return Err(Error::invalid(format!(
                    "{problem} requires delta in (0, 1], got {delta}"
                )));
            }
        } else if delta != 0.0 {
            return Err(Error::invalid(format!(
                "{problem} requires delta = 0, got {delta}"
            )));
        }
        match problem {
            Problem::Satisfaction | Problem::Satisficing if mean_threshold.is_none() => {
                return Err(Error::invalid(format!(
                    "{problem} requires field `mean_threshold`"
                )));
            }
            Problem::RobustSatisfaction | Problem::RobustSatisficing
                if happiness_prob_threshold.is_none() =>
            {
                return Err(Error::invalid(format!(
                    "{problem} requires field `happiness_prob`"
                )));
            }
            _ => {}
        }
        if problem.is_robust() && happiness_threshold.is_none() {
            return Err(Error::invalid(format!(
                "{problem} requires field `happiness_threshold`"
            )));
        }
        if let Some(m) = mean_threshold {
            if !m.is_finite() {
                return Err(Error::invalid("mean_threshold must be finite"));
            }
        }
        if let Some(m) = happiness_threshold {
            if !m.is_finite() {
                return Err(Error::invalid("happiness_threshold must be finite"));
            }
        }
        Ok(ObjectiveSpec {
            problem,
            mean_threshold,
            sufficiency,
            happiness_threshold,
            happiness_prob_threshold,
        })
    }

    pub fn standard() -> Self {
        ObjectiveSpec::new(Problem::Standard, None, Probability::ZERO, None, None).unwrap()
    }

    pub fn satisfaction(mean_threshold: f64) -> Result<Self> {
        ObjectiveSpec::new(
            Problem::Satisfaction,
            Some(mean_threshold),
            Probability::ZERO,
            None,
            None,
        )
    }

    pub fn sufficing(delta: Probability) -> Result<Self> {
        ObjectiveSpec::new(Problem::Sufficing, None, delta, None, None)
    }

    pub fn satisficing(mean_threshold: f64, delta: Probability) -> Result<Self> {
        ObjectiveSpec::new(
            Problem::Satisficing,
            Some(mean_threshold),
            delta,
            None,
            None,
        )
    }

    pub fn robust(happiness_threshold: f64) -> Result<Self> {
        ObjectiveSpec::new(
            Problem::Robust,
            None,
            Probability::ZERO,
            Some(happiness_threshold),
            None,
        )
    }

    pub fn robust_satisfaction(happiness_threshold: f64, pi: Probability) -> Result<Self> {
        ObjectiveSpec::new(
            Problem::RobustSatisfaction,
            None,
            Probability::ZERO,
            Some(happiness_threshold),
            Some(pi),
        )
    }

    pub fn robust_sufficing(happiness_threshold: f64, delta: Probability) -> Result<Self> {
        ObjectiveSpec::new(
            Problem::RobustSufficing,
            None,
            delta,
            Some(happiness_threshold),
            None,
        )
    }

    pub fn robust_satisficing(
        happiness_threshold: f64,
        pi: Probability,
        delta: Probability,
    ) -> Result<Self> {
        ObjectiveSpec::new(
            Problem::RobustSatisficing,
            None,
            delta,
            Some(happiness_threshold),
            Some(pi),
        )
    }

    /// Adds a happiness threshold used only for the happiness metric; the
    /// mean-reward policies never read it.
    pub fn with_happiness_metric(mut self, happiness_threshold: f64) -> Self {
        self.happiness_threshold = Some(happiness_threshold);
        self
    }

    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn mean_threshold(&self) -> Option<f64> {
        self.mean_threshold
    }

    pub fn sufficiency(&self) -> Probability {
        self.sufficiency
    }

    pub fn happiness_threshold(&self) -> Option<f64> {
        self.happiness_threshold
    }

    pub fn happiness_prob_threshold(&self) -> Option<Probability> {
        self.happiness_prob_threshold
    }
}

/// Draws one reward r = m_arm + std_arm * z from the trial stream.
pub fn sample_reward(
    instance: &BanditInstance,
    arm: usize,
    rng: &mut impl RngCore,
) -> Result<f64> {
    instance.check_arm(arm)?;
    Ok(reward_from_z(instance, arm, next_std_normal(rng)))
}

/// The affine reward map for a frozen standard-normal realization.
pub fn reward_from_z(instance: &BanditInstance, arm: usize, z: f64) -> f64 {
    instance.means[arm] + instance.stds[arm] * z
}

/// Happiness indicator: reward at or above the threshold.
pub fn happiness(reward: f64, happiness_threshold: f64) -> bool {
    reward >= happiness_threshold
}

/// Probability that one draw from N(m, sigma^2) reaches the threshold.
pub fn happiness_probability(m: f64, sigma: f64, threshold: f64) -> Result<Probability> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok(Probability::from_math(phi((m - threshold) / sigma)))
}

/// Mean of the standardized reward: (m - threshold) / sigma.
pub fn standardized_mean(m: f64, sigma: f64, threshold: f64) -> Result<f64> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok((m - threshold) / sigma)
}

/// Standardizes one observed reward: (r - threshold) / sigma.
pub fn standardize_reward(r: f64, sigma: f64, threshold: f64) -> Result<f64> {
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::invalid(format!("sigma must be positive, got {sigma}")));
    }
    Ok((r - threshold) / sigma)
}

/// Per-pull regret relative to a mean threshold: max(threshold - m_arm, 0).
pub fn thresholded_regret(
    instance: &BanditInstance,
    mean_threshold: f64,
    arm: usize,
) -> Result<f64> {
    instance.check_arm(arm)?;
    Ok((mean_threshold - instance.means[arm]).max(0.0))
}

/// Arms whose mean meets the threshold (ties included), plus the count k.
pub fn satisfying_set(instance: &BanditInstance, mean_threshold: f64) -> Result<(Vec<usize>, usize)> {
    if mean_threshold > instance.best_mean() {
        return Err(Error::infeasible(format!(
            "mean threshold {mean_threshold} exceeds the best mean {}",
            instance.best_mean()
        )));
    }
    let set: Vec<usize> = (0..instance.arm_count())
        .filter(|&i| instance.means[i] >= mean_threshold)
        .collect();
    let k = set.len();
    Ok((set, k))
}
