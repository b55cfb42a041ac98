//! Randomized certification of the closed-form bounds.
//!
//! Every search is split into independent trials. Trial `i` draws from a
//! ChaCha stream keyed by `(seed, i + 1)`, so results do not depend on how
//! trials are scheduled; merging walks the trials in index order. With the
//! `parallel` feature the trials run on rayon's pool, otherwise sequentially,
//! and both produce bit-identical outcomes.

mod feasibility;
mod sampler;
mod search;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Distribution, Error, ExtendedReal, Result};

pub use feasibility::{
    falsify_feasibility, falsify_feasibility_with, penalized_search, PenaltySearch, WITNESS_TOLERANCE,
};
pub use sampler::sample_pair_in_class;
pub use search::{
    search_sup, search_sup_with, search_unconstrained_sup, search_unconstrained_sup_with, SweepPoint, VajdaSweep,
};

/// Sampled `D_f` counted as a breach above this, in nats, when chasing an
/// infinite supremum.
pub const DIVERGENCE_THRESHOLD: f64 = 1e6;
/// Largest `M` reached by [`search_unconstrained_sup`].
pub const SWEEP_MAX_M: f64 = 1e12;
/// Step sizes never decay below this.
pub const STEP_FLOOR: f64 = 1e-12;

/// How independent trials are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Runs on the rayon pool; same as `Sequential` without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Largest number of atoms per sampled pair, in `[2, 12]`.
    pub support_size: usize,
    pub trials: usize,
    pub seed: u64,
    /// Hill-climbing steps per trial after the initial draw.
    pub perturbation_steps: usize,
    /// Initial perturbation scale.
    pub step_scale: f64,
    /// Slack allowed above a bound before a sample counts as a violation.
    pub tolerance: f64,
    /// Evaluate the ternary extremal pair before the random trials.
    pub extremal_seed: bool,
    /// Number of geometric grid points in the `M → ∞` sweep.
    pub sweep_points: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            support_size: 8,
            trials: 10_000,
            seed: 0,
            perturbation_steps: 0,
            step_scale: 0.25,
            tolerance: 1e-10,
            extremal_seed: true,
            sweep_points: 49,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=12).contains(&self.support_size) {
            return Err(Error::InvalidConfig(format!(
                "support size {} not in [2, 12]",
                self.support_size
            )));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "step scale {} must be positive",
                self.step_scale
            )));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance {} must be nonnegative",
                self.tolerance
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub best_value: ExtendedReal,
    pub best_pair: (Distribution, Distribution),
    pub bound: ExtendedReal,
    /// `bound - best_value`; `+∞` when the bound is infinite and the best is not.
    pub gap: f64,
    /// Sampled pairs exceeding `bound + tolerance`.
    pub violations: u64,
    /// Number of pairs evaluated.
    pub evaluated: u64,
}

pub(crate) fn gap(bound: ExtendedReal, best: ExtendedReal) -> f64 {
    match (bound, best) {
        (ExtendedReal::Finite(b), ExtendedReal::Finite(v)) => b - v,
        (ExtendedReal::PosInf, ExtendedReal::PosInf) => 0.0,
        (ExtendedReal::PosInf, _) | (_, ExtendedReal::NegInf) => f64::INFINITY,
        _ => f64::NEG_INFINITY,
    }
}

pub(crate) fn exceeds(value: ExtendedReal, bound: ExtendedReal, tolerance: f64) -> bool {
    match bound {
        ExtendedReal::PosInf => false,
        ExtendedReal::Finite(b) => value > ExtendedReal::Finite(b + tolerance),
        ExtendedReal::NegInf => true,
    }
}

/// RNG for trial `stream` of the search keyed by `seed`.
pub(crate) fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `f(0..count)` and returns results in index order.
pub(crate) fn run_indexed<T, F>(count: usize, execution: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}
