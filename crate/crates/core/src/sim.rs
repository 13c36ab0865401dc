//! Seeded trial execution and Monte Carlo aggregation.
//!
//! Each trial owns a random stream derived from (master seed, trial index)
//! and consumes exactly one standard-normal draw per step, so results are
//! bit-exact across runs and across any parallel schedule. Aggregation
//! reduces the collected trials in index order, which keeps the floating
//! point sums schedule-independent too.

use rayon::prelude::*;

use crate::belief::BeliefState;
use crate::env::{happiness, sample_reward, standardize_reward, thresholded_regret, BanditInstance};
use crate::error::{Error, Result};
use crate::metrics::{
    accumulate, effective_threshold, lower_bound_curve, satisficing_regret_step,
    upper_bound_curve, BoundCurve, StepRecord,
};
use crate::policy::{select, wrap_robust, PolicySpec};
use crate::rng::trial_rng;

/// Everything one Monte Carlo run needs.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub instance: BanditInstance,
    pub policy: PolicySpec,
    pub horizon: u64,
    pub trials: u64,
    pub master_seed: u64,
}

impl SimulationConfig {
    /// Validates invariants and objective feasibility without running.
    pub fn validate(&self) -> Result<()> {
        let arms = self.instance.arm_count();
        if self.policy.prior.arms() != arms {
            return Err(Error::invalid(format!(
                "prior covers {} arms but the instance has {arms}",
                self.policy.prior.arms()
            )));
        }
        if self.horizon < arms as u64 {
            return Err(Error::invalid(format!(
                "horizon {} is shorter than the {arms}-arm initialization",
                self.horizon
            )));
        }
        if self.trials < 1 {
            return Err(Error::invalid("at least one trial is required"));
        }
        let plan = TrialPlan::prepare(self)?;
        // A known mean threshold must be reachable by some arm.
        let threshold = effective_threshold(&plan.accounting_instance, &self.policy.objective)?;
        if threshold > plan.accounting_instance.best_mean() {
            return Err(Error::infeasible(format!(
                "mean threshold {threshold} exceeds the best mean {}",
                plan.accounting_instance.best_mean()
            )));
        }
        Ok(())
    }
}

/// The run-time shape of one policy: the engine-side spec (wrapped onto the
/// standardized scale for robust objectives) plus the omniscient instance
/// regret is accounted on.
struct TrialPlan {
    engine_spec: PolicySpec,
    engine_stds: Vec<f64>,
    accounting_instance: BanditInstance,
    accounting_threshold: f64,
    happiness_threshold: Option<f64>,
    robust: bool,
}

impl TrialPlan {
    fn prepare(config: &SimulationConfig) -> Result<TrialPlan> {
        let instance = &config.instance;
        if config.policy.objective.problem().is_robust() {
            let wrapped = wrap_robust(&config.policy, instance)?;
            let accounting_instance = instance.standardized(wrapped.happiness_threshold);
            let accounting_threshold =
                effective_threshold(&accounting_instance, &config.policy.objective)?;
            Ok(TrialPlan {
                engine_stds: vec![1.0; instance.arm_count()],
                accounting_instance,
                accounting_threshold,
                happiness_threshold: Some(wrapped.happiness_threshold),
                engine_spec: wrapped.inner,
                robust: true,
            })
        } else {
            let accounting_threshold = effective_threshold(instance, &config.policy.objective)?;
            Ok(TrialPlan {
                engine_spec: config.policy.clone(),
                engine_stds: instance.stds().to_vec(),
                accounting_instance: instance.clone(),
                accounting_threshold,
                happiness_threshold: config.policy.objective.happiness_threshold(),
                robust: false,
            })
        }
    }
}

/// One executed trial.
#[derive(Debug, Clone)]
pub struct TrialResult {
    pub records: Vec<StepRecord>,
    pub pulls: Vec<u64>,
}

impl TrialResult {
    /// The arm sequence, in step order.
    pub fn arms(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.arm).collect()
    }

    /// Last step that was charged regret; 0 when none was.
    pub fn stopping_time(&self) -> u64 {
        self.records
            .iter()
            .rev()
            .find(|r| r.regret > 0.0)
            .map(|r| r.t)
            .unwrap_or(0)
    }
}

/// Runs one seeded trial: select, sample, standardize when robust, update,
/// record. Deterministic given (master_seed, trial index).
pub fn run_trial(config: &SimulationConfig, trial: u64) -> Result<TrialResult> {
    let plan = TrialPlan::prepare(config)?;
    let instance = &config.instance;
    let objective = &config.policy.objective;
    let mut rng = trial_rng(config.master_seed, trial);
    let mut belief = BeliefState::init(&plan.engine_spec.prior, &plan.engine_stds)?;
    let mut records = Vec::with_capacity(config.horizon as usize);
    let mut pulls = vec![0u64; instance.arm_count()];
    let mut previous_arm: Option<usize> = None;

    for t in 1..=config.horizon {
        let decision = select(&belief, t, &plan.engine_spec)?;
        let arm = decision.arm;
        // Confidence of satisfaction at decision time, before the reward.
        let confidence = belief.satisfaction_confidence(arm, plan.accounting_threshold);
        let reward = sample_reward(instance, arm, &mut rng)?;
        let engine_reward = if plan.robust {
            standardize_reward(
                reward,
                instance.std(arm),
                plan.happiness_threshold.expect("robust plan has threshold"),
            )?
        } else {
            reward
        };
        belief.update(arm, engine_reward, plan.engine_stds[arm])?;

        let regret =
            satisficing_regret_step(&plan.accounting_instance, objective, arm, confidence)?;
        let regret_omniscient =
            thresholded_regret(&plan.accounting_instance, plan.accounting_threshold, arm)?;
        let happy = plan
            .happiness_threshold
            .map(|m| happiness(reward, m))
            .unwrap_or(false);
        let switched = previous_arm.is_some_and(|p| p != arm);
        records.push(StepRecord {
            t,
            arm,
            reward,
            regret,
            regret_omniscient,
            happy,
            switched,
            confidence,
        });
        pulls[arm] += 1;
        previous_arm = Some(arm);
    }
    Ok(TrialResult { records, pulls })
}

/// Mean curves and overlays over all trials of one configuration.
#[derive(Debug, Clone)]
pub struct AggregateResult {
    pub horizon: u64,
    pub trials: u64,
    pub mean_cum_regret: Vec<f64>,
    pub se_cum_regret: Vec<f64>,
    pub mean_cum_regret_omniscient: Vec<f64>,
    pub mean_cum_reward: Vec<f64>,
    pub mean_cum_happiness: Vec<f64>,
    pub mean_cum_switches: Vec<f64>,
    pub mean_pulls: Vec<f64>,
    /// Mean over trials of the last regret-charged step.
    pub mean_stopping_time: f64,
    pub bounds: Vec<BoundCurve>,
}

impl AggregateResult {
    pub fn upper_bound(&self) -> Option<&BoundCurve> {
        self.bounds
            .iter()
            .find(|b| b.kind == crate::metrics::BoundKind::Upper)
    }
}

/// Runs all trials of the configuration on the current rayon pool and
/// aggregates them. The result is identical for any worker count.
pub fn run_monte_carlo(config: &SimulationConfig) -> Result<AggregateResult> {
    config.validate()?;
    let results: Vec<TrialResult> = (0..config.trials)
        .into_par_iter()
        .map(|trial| run_trial(config, trial))
        .collect::<Result<Vec<_>>>()?;
    aggregate(config, &results)
}

/// Serial variant, used by tests to confirm schedule independence.
pub fn run_monte_carlo_serial(config: &SimulationConfig) -> Result<AggregateResult> {
    config.validate()?;
    let results: Vec<TrialResult> = (0..config.trials)
        .map(|trial| run_trial(config, trial))
        .collect::<Result<Vec<_>>>()?;
    aggregate(config, &results)
}

fn aggregate(config: &SimulationConfig, results: &[TrialResult]) -> Result<AggregateResult> {
    let t_len = config.horizon as usize;
    let trials = results.len();
    let n = trials as f64;
    let mut cum_regret_per_trial: Vec<Vec<f64>> = Vec::with_capacity(trials);
    let mut mean_cum_regret = vec![0.0; t_len];
    let mut mean_cum_regret_omniscient = vec![0.0; t_len];
    let mut mean_cum_reward = vec![0.0; t_len];
    let mut mean_cum_happiness = vec![0.0; t_len];
    let mut mean_cum_switches = vec![0.0; t_len];
    let mut mean_pulls = vec![0.0; config.instance.arm_count()];
    let mut stop_sum = 0.0;

    for result in results {
        let curves = accumulate(&result.records)?;
        let mut omni = 0.0;
        for (i, record) in result.records.iter().enumerate() {
            omni += record.regret_omniscient;
            mean_cum_regret[i] += curves.regret[i];
            mean_cum_regret_omniscient[i] += omni;
            mean_cum_reward[i] += curves.reward[i];
            mean_cum_happiness[i] += curves.happiness[i];
            mean_cum_switches[i] += curves.switches[i];
        }
        for (slot, &p) in mean_pulls.iter_mut().zip(&result.pulls) {
            *slot += p as f64;
        }
        stop_sum += result.stopping_time() as f64;
        cum_regret_per_trial.push(curves.regret);
    }
    for series in [
        &mut mean_cum_regret,
        &mut mean_cum_regret_omniscient,
        &mut mean_cum_reward,
        &mut mean_cum_happiness,
        &mut mean_cum_switches,
    ] {
        for v in series.iter_mut() {
            *v /= n;
        }
    }
    for v in mean_pulls.iter_mut() {
        *v /= n;
    }

    let mut se_cum_regret = vec![0.0; t_len];
    if trials > 1 {
        for (i, se) in se_cum_regret.iter_mut().enumerate() {
            let mean = mean_cum_regret[i];
            let ss: f64 = cum_regret_per_trial
                .iter()
                .map(|c| (c[i] - mean) * (c[i] - mean))
                .sum();
            *se = (ss / (n - 1.0)).sqrt() / n.sqrt();
        }
    }

    let plan = TrialPlan::prepare(config)?;
    let mut bounds = vec![upper_bound_curve(
        &plan.accounting_instance,
        &config.policy.objective,
        config.horizon,
    )?];
    if let Some(lower) = lower_bound_curve(
        &plan.accounting_instance,
        &config.policy.objective,
        config.horizon,
    )? {
        bounds.push(lower);
    }

    Ok(AggregateResult {
        horizon: config.horizon,
        trials: trials as u64,
        mean_cum_regret,
        se_cum_regret,
        mean_cum_regret_omniscient,
        mean_cum_reward,
        mean_cum_happiness,
        mean_cum_switches,
        mean_pulls,
        mean_stopping_time: stop_sum / n,
        bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{ObjectiveSpec, Problem};
    use crate::stats::Probability;

    fn fig_instance() -> BanditInstance {
        BanditInstance::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0; 4]).unwrap()
    }

    fn config(objective: ObjectiveSpec, horizon: u64, trials: u64) -> SimulationConfig {
        let instance = fig_instance();
        let policy = PolicySpec::default_for(objective, instance.arm_count());
        SimulationConfig {
            instance,
            policy,
            horizon,
            trials,
            master_seed: 42,
        }
    }

    #[test]
    fn forced_round_robin_opens_every_trial() {
        let cfg = config(ObjectiveSpec::standard(), 4, 1);
        let result = run_trial(&cfg, 0).unwrap();
        assert_eq!(result.arms(), vec![0, 1, 2, 3]);
        assert!(result.records.iter().all(|r| r.regret >= 0.0));
    }

    #[test]
    fn trials_are_deterministic() {
        let cfg = config(ObjectiveSpec::standard(), 200, 1);
        let a = run_trial(&cfg, 7).unwrap();
        let b = run_trial(&cfg, 7).unwrap();
        assert_eq!(a.arms(), b.arms());
        let rewards_a: Vec<f64> = a.records.iter().map(|r| r.reward).collect();
        let rewards_b: Vec<f64> = b.records.iter().map(|r| r.reward).collect();
        assert_eq!(rewards_a, rewards_b);
    }

    #[test]
    fn single_trial_aggregate_equals_trial() {
        let cfg = config(ObjectiveSpec::standard(), 50, 1);
        let aggregate = run_monte_carlo(&cfg).unwrap();
        let trial = run_trial(&cfg, 0).unwrap();
        let curves = accumulate(&trial.records).unwrap();
        assert_eq!(aggregate.mean_cum_regret, curves.regret);
        assert_eq!(aggregate.mean_cum_reward, curves.reward);
        assert!(aggregate.se_cum_regret.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn parallel_and_serial_agree_bitwise() {
        let cfg = config(ObjectiveSpec::sufficing(Probability::new(0.05).unwrap()).unwrap(), 80, 12);
        let par = run_monte_carlo(&cfg).unwrap();
        let ser = run_monte_carlo_serial(&cfg).unwrap();
        assert_eq!(par.mean_cum_regret, ser.mean_cum_regret);
        assert_eq!(par.se_cum_regret, ser.se_cum_regret);
        assert_eq!(par.mean_pulls, ser.mean_pulls);
    }

    #[test]
    fn pulls_sum_to_horizon() {
        let cfg = config(ObjectiveSpec::standard(), 120, 5);
        let result = run_monte_carlo(&cfg).unwrap();
        let total: f64 = result.mean_pulls.iter().sum();
        assert!((total - 120.0).abs() < 1e-9);
        for w in result.mean_cum_regret.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn ucl_settles_on_best_arm() {
        let cfg = config(ObjectiveSpec::standard(), 1000, 1);
        let result = run_trial(&cfg, 0).unwrap();
        let late_best = result.records[900..]
            .iter()
            .filter(|r| r.arm == 3)
            .count();
        assert!(late_best > 90, "best arm chosen {late_best}/100 late steps");
    }

    #[test]
    fn horizon_shorter_than_arm_count_rejected() {
        let cfg = config(ObjectiveSpec::standard(), 3, 1);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn infeasible_threshold_rejected_before_running() {
        let mut cfg = config(ObjectiveSpec::satisfaction(4.5).unwrap(), 100, 1);
        assert!(matches!(
            cfg.validate(),
            Err(Error::InfeasibleObjective(_))
        ));
        assert!(matches!(
            run_monte_carlo(&cfg),
            Err(Error::InfeasibleObjective(_))
        ));
        cfg.policy.objective = ObjectiveSpec::satisfaction(2.5).unwrap();
        assert!(cfg.validate().is_ok());
    }

    #[test]
    fn robust_plan_realigns_accounting() {
        let instance =
            BanditInstance::new(vec![1.0, 2.0, 3.0, 4.0], vec![1.0, 1.0, 1.0, 3.0]).unwrap();
        let policy =
            PolicySpec::default_for(ObjectiveSpec::robust(2.0).unwrap(), instance.arm_count());
        let cfg = SimulationConfig {
            instance,
            policy,
            horizon: 100,
            trials: 1,
            master_seed: 1,
        };
        let result = run_trial(&cfg, 0).unwrap();
        assert_eq!(result.records.len(), 100);
        // Regret on the standardized scale never exceeds the worst gap (2).
        assert!(result.records.iter().all(|r| r.regret <= 2.0 + 1e-12));
        assert_eq!(
            cfg.policy.objective.problem(),
            Problem::Robust
        );
    }

    #[test]
    fn stopping_time_is_last_charged_step() {
        let cfg = config(
            ObjectiveSpec::sufficing(Probability::new(0.05).unwrap()).unwrap(),
            400,
            1,
        );
        let result = run_trial(&cfg, 0).unwrap();
        let stop = result.stopping_time();
        assert!(stop >= 1);
        assert!(result.records[stop as usize..]
            .iter()
            .all(|r| r.regret == 0.0));
    }
}
