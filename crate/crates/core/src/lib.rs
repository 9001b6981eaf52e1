//! Linear stochastic bandits with a learned confidence width.
//!
//! SoftUCB replaces the hand-derived UCB width `β` with one learned by
//! gradient ascent on the expected cumulative reward. The crate contains the
//! ridge-regression state, the soft-elimination policy, the score-function
//! gradient estimators, offline and online training loops, LinUCB / LinTS /
//! ε-greedy baselines, synthetic and dataset-derived environments, and a
//! batch experiment harness.

pub mod env;
pub mod error;
pub mod gradient;
pub mod harness;
pub mod linalg;
pub mod policy;
pub mod rng;
pub mod runners;

pub use error::{Error, Result};
