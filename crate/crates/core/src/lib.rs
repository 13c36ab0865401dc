//! Satisficing multi-armed bandits: eight reward-thresholding objectives,
//! the upper-credible-limit policy family that solves them, omniscient
//! regret accounting with evaluable bound curves, and a seeded Monte Carlo
//! harness that reproduces the reference experiments bit-exactly.
//!
//! The objectives split along three axes: whether satisfaction thresholds
//! the unknown mean reward or the instantaneous reward (robust), whether the
//! agent maximizes or settles for a known threshold, and whether it seeks
//! certainty or tolerates a residual doubt delta. Gaussian rewards make the
//! robust objectives equivalent to the mean-reward ones on a standardized
//! scale, which is how the robust policies are implemented.

pub mod belief;
pub mod env;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod policy;
pub mod rng;
pub mod sim;
pub mod stats;

pub use belief::{transform_prior_standardized, BeliefState, Prior, PriorKind};
pub use env::{BanditInstance, ObjectiveSpec, Problem};
pub use error::{Error, Result};
pub use metrics::{BoundCurve, BoundFamily, BoundKind, StepRecord};
pub use policy::{Decision, Heuristic, PolicySpec, WrappedRobust};
pub use sim::{AggregateResult, SimulationConfig, TrialResult};
pub use stats::Probability;
