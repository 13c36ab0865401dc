//! Agent-side conjugate Gaussian inference over the vector of mean rewards.
//!
//! The posterior is tracked in information form (precision matrix plus the
//! accumulated information vector), so each observation is a rank-one update
//! that only touches one diagonal entry. Posterior means and marginal
//! variances are recovered by a symmetric solve; for uncorrelated priors the
//! precision stays diagonal and the solve degenerates to scalar division.

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::stats::{phi, Probability};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PriorKind {
    /// Positive-definite precision, possibly with correlated arms.
    Informative,
    /// Diagonal precision with finite per-arm variances.
    Uncorrelated,
    /// Zero precision: the flat-prior limit of infinite variance.
    Uninformative,
}

/// Gaussian prior over the mean rewards, stored in precision form.
#[derive(Debug, Clone, PartialEq)]
pub struct Prior {
    mu0: Vec<f64>,
    precision0: SymMatrix,
    kind: PriorKind,
}

impl Prior {
    pub fn uninformative(arms: usize) -> Self {
        Prior {
            mu0: vec![0.0; arms],
            precision0: SymMatrix::zeros(arms),
            kind: PriorKind::Uninformative,
        }
    }

    pub fn uncorrelated(mu0: Vec<f64>, var0: Vec<f64>) -> Result<Self> {
        if mu0.len() != var0.len() {
            return Err(Error::invalid("prior mean and variance lengths differ"));
        }
        if var0.iter().any(|v| *v <= 0.0 || !v.is_finite()) {
            return Err(Error::invalid("prior variances must be positive and finite"));
        }
        let diag: Vec<f64> = var0.iter().map(|v| 1.0 / v).collect();
        Ok(Prior {
            mu0,
            precision0: SymMatrix::diagonal(&diag),
            kind: PriorKind::Uncorrelated,
        })
    }

    /// Builds from a full covariance matrix, which must be positive-definite.
    #[allow(clippy::needless_range_loop)]
    pub fn informative(mu0: Vec<f64>, covariance: SymMatrix) -> Result<Self> {
        if mu0.len() != covariance.dim() {
            return Err(Error::invalid("prior mean and covariance dimensions differ"));
        }
        let chol = covariance
            .cholesky()
            .map_err(|_| Error::invalid("prior covariance must be positive-definite"))?;
        let n = covariance.dim();
        let mut precision = SymMatrix::zeros(n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let col = chol.solve(&e);
            // Columns of a symmetric inverse are symmetric up to rounding;
            // set_sym keeps the stored matrix exactly symmetric.
            for i in j..n {
                precision.set_sym(i, j, col[i]);
            }
            e[j] = 0.0;
        }
        Ok(Prior {
            mu0,
            precision0: precision,
            kind: PriorKind::Informative,
        })
    }

    pub fn from_precision(mu0: Vec<f64>, precision0: SymMatrix, kind: PriorKind) -> Result<Self> {
        if mu0.len() != precision0.dim() {
            return Err(Error::invalid("prior mean and precision dimensions differ"));
        }
        if kind == PriorKind::Uninformative && !precision0.is_zero() {
            return Err(Error::invalid("uninformative prior requires zero precision"));
        }
        Ok(Prior {
            mu0,
            precision0,
            kind,
        })
    }

    pub fn arms(&self) -> usize {
        self.mu0.len()
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    pub fn mu0(&self) -> &[f64] {
        &self.mu0
    }

    pub fn precision0(&self) -> &SymMatrix {
        &self.precision0
    }
}

/// Transforms a prior on mean rewards into a prior on standardized mean
/// rewards: means shift and scale per arm, and the covariance picks up
/// 1/(std_i * std_j), i.e. the precision picks up std_i * std_j.
pub fn transform_prior_standardized(prior: &Prior, stds: &[f64], threshold: f64) -> Result<Prior> {
    if stds.len() != prior.arms() {
        return Err(Error::invalid("stds length does not match prior"));
    }
    if stds.iter().any(|s| *s <= 0.0) {
        return Err(Error::invalid("stds must be positive"));
    }
    let mu0 = prior
        .mu0
        .iter()
        .zip(stds)
        .map(|(&m, &s)| (m - threshold) / s)
        .collect();
    let precision0 = prior.precision0.congruence_diag(stds);
    Ok(Prior {
        mu0,
        precision0,
        kind: prior.kind,
    })
}

/// Posterior over the mean rewards plus the per-arm tallies the frequentist
/// heuristics need.
#[derive(Debug, Clone)]
pub struct BeliefState {
    mu: Vec<f64>,
    var: Vec<f64>,
    precision: SymMatrix,
    q_accum: Vec<f64>,
    pulls: Vec<u64>,
    reward_sum: Vec<f64>,
    sq_accum: Vec<f64>,
    kind: PriorKind,
}

impl BeliefState {
    /// Initializes the posterior at the prior.
    pub fn init(prior: &Prior, instance_stds: &[f64]) -> Result<Self> {
        let n = prior.arms();
        if instance_stds.len() != n {
            return Err(Error::invalid(format!(
                "prior covers {n} arms but instance has {}",
                instance_stds.len()
            )));
        }
        let q_accum = prior.precision0.mul_vec(&prior.mu0);
        let mut state = BeliefState {
            mu: vec![f64::NAN; n],
            var: vec![f64::INFINITY; n],
            precision: prior.precision0.clone(),
            q_accum,
            pulls: vec![0; n],
            reward_sum: vec![0.0; n],
            sq_accum: vec![0.0; n],
            kind: prior.kind,
        };
        state.refresh()?;
        // At the prior, a finite-precision arm carries exactly the prior mean.
        if prior.kind != PriorKind::Uninformative {
            for i in 0..n {
                if state.var[i].is_finite() {
                    state.mu[i] = prior.mu0[i];
                }
            }
        }
        Ok(state)
    }

    pub fn arms(&self) -> usize {
        self.pulls.len()
    }

    pub fn pulls(&self, arm: usize) -> u64 {
        self.pulls[arm]
    }

    pub fn pull_counts(&self) -> &[u64] {
        &self.pulls
    }

    pub fn precision(&self) -> &SymMatrix {
        &self.precision
    }

    /// Empirical mean reward of an arm; NaN before the first pull.
    pub fn empirical_mean(&self, arm: usize) -> f64 {
        if self.pulls[arm] == 0 {
            f64::NAN
        } else {
            self.reward_sum[arm] / self.pulls[arm] as f64
        }
    }

    /// Sum of squared rewards observed at an arm.
    pub fn squared_reward_sum(&self, arm: usize) -> f64 {
        self.sq_accum[arm]
    }

    /// Conjugate update for one observation with sampling noise sigma_s.
    pub fn update(&mut self, arm: usize, reward: f64, sigma_s: f64) -> Result<()> {
        if arm >= self.arms() {
            return Err(Error::invalid(format!("arm {arm} out of range")));
        }
        if sigma_s <= 0.0 || !sigma_s.is_finite() {
            return Err(Error::invalid(format!(
                "sampling std must be positive, got {sigma_s}"
            )));
        }
        let w = 1.0 / (sigma_s * sigma_s);
        self.q_accum[arm] += reward * w;
        self.precision.add_to_diag(arm, w);
        self.pulls[arm] += 1;
        self.reward_sum[arm] += reward;
        self.sq_accum[arm] += reward * reward;
        self.refresh()
    }

    /// Recomputes the posterior mean and marginal variances from the
    /// information form.
    fn refresh(&mut self) -> Result<()> {
        let n = self.arms();
        if self.kind == PriorKind::Informative {
            let chol = self.precision.cholesky().map_err(|_| {
                Error::Internal("posterior precision lost positive-definiteness".into())
            })?;
            self.mu = chol.solve(&self.q_accum);
            self.var = chol.inverse_diag();
        } else {
            // Zero or diagonal prior precision: the posterior precision is
            // diagonal, and unsampled flat-prior arms stay undefined.
            for i in 0..n {
                let lam = self.precision.get(i, i);
                if lam > 0.0 {
                    self.mu[i] = self.q_accum[i] / lam;
                    self.var[i] = 1.0 / lam;
                } else {
                    self.mu[i] = f64::NAN;
                    self.var[i] = f64::INFINITY;
                }
            }
        }
        Ok(())
    }

    /// Posterior marginal of one arm as (mean, std). An unsampled arm under
    /// a flat prior reports (NaN, +inf).
    pub fn marginal(&self, arm: usize) -> (f64, f64) {
        (self.mu[arm], self.var[arm].sqrt())
    }

    /// The agent's probability that the arm's mean reward reaches the
    /// threshold, under the current posterior marginal. An arm with no
    /// evidence either way reports 1/2.
    pub fn satisfaction_confidence(&self, arm: usize, mean_threshold: f64) -> Probability {
        let (mu, sd) = self.marginal(arm);
        if !mu.is_finite() || !sd.is_finite() {
            return Probability::HALF;
        }
        if sd == 0.0 {
            return if mu >= mean_threshold {
                Probability::ONE
            } else {
                Probability::ZERO
            };
        }
        Probability::from_math(phi((mu - mean_threshold) / sd))
    }
}
