//! Search for symmetric rules: weight elimination, Levenberg–Marquardt and
//! the time-budgeted restart loop.

pub mod lm;
pub mod lstsq;
pub mod residual;
mod search;

use std::time::Duration;

use crate::error::{Error, Result};

pub use lm::{
    forward_jacobian, levenberg_marquardt, levenberg_marquardt_projected, LmOutcome, LmStep,
    Termination,
};
pub use lstsq::least_squares_weights;
pub use residual::{clamp_params, rule_residual, CandidateParams, RuleResidual};
pub use search::{find_rules, search, seed_orbits, SearchReport};

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Wall time spent on each decomposition.
    pub time_budget: Duration,
    /// Optional cap on the whole search.
    pub total_time: Option<Duration>,
    /// Optional cap on minimizations per decomposition; with a fixed seed
    /// this makes a search reproducible regardless of timing.
    pub max_attempts: Option<usize>,
    /// Stop a decomposition once this many consecutive successful attempts,
    /// taken in attempt order, add no new distinct rule.
    pub saturation: Option<usize>,
    pub success_threshold: f64,
    pub max_iterations: usize,
    pub initial_damping: f64,
    pub damping_growth: f64,
    pub fd_step_scale: f64,
    pub rng_seed: u64,
    pub workers: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_budget: Duration::from_secs(1),
            total_time: None,
            max_attempts: None,
            saturation: Some(64),
            success_threshold: 1e-12,
            max_iterations: 200,
            initial_damping: 1e-3,
            damping_growth: 2.0,
            fd_step_scale: f64::EPSILON.sqrt(),
            rng_seed: 0,
            workers: 1,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if self.time_budget.is_zero() {
            return bad("time budget must be positive");
        }
        if self.max_attempts == Some(0) {
            return bad("attempt cap must be positive");
        }
        if self.saturation == Some(0) {
            return bad("saturation count must be positive");
        }
        if !(self.success_threshold >= 0.0) {
            return bad("success threshold must be non-negative");
        }
        if self.max_iterations == 0 {
            return bad("iteration limit must be positive");
        }
        if !(self.initial_damping > 0.0) {
            return bad("initial damping must be positive");
        }
        if !(self.damping_growth > 1.0) {
            return bad("damping growth must exceed 1");
        }
        if !(self.fd_step_scale > 0.0) {
            return bad("finite-difference step must be positive");
        }
        Ok(())
    }
}
