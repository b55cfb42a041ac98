//! Empirical check of [`feasible`]: witnesses must exist exactly when the
//! predicate says so.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::bounds::feasible;
use crate::divergence::{ratio_extremes, total_variation};
use crate::extremal::verify_membership;
use crate::{ClassParams, Distribution, ExtendedReal, Result};

use super::{run_indexed, sample_pair_in_class, trial_rng, Execution, SearchConfig, STEP_FLOOR};

/// A pair whose `(δ, m, M)` are each within this of the target is a witness.
pub const WITNESS_TOLERANCE: f64 = 1e-6;
/// Membership tolerance for constructed witnesses of feasible classes.
const MEMBERSHIP_TOLERANCE: f64 = 1e-9;
const BATCH: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct PenaltySearch {
    /// Smallest largest-component deviation from the target `(δ, m, M)`.
    pub best_deviation: f64,
    pub best_pair: (Distribution, Distribution),
    pub found: bool,
}

/// Deviations `(|δ̂ - δ|, |m̂ - m|, dev(M̂, M))`, where `dev` is `|M̂ - M|` for
/// finite `M` and `1/M̂` for `M = ∞`.
fn deviations(p: &Distribution, q: &Distribution, target: &ClassParams) -> Result<[f64; 3]> {
    let tv = total_variation(p, q)?;
    let (m, big_m) = ratio_extremes(p, q)?;
    let big_m = big_m.to_f64();
    let dev_big_m = match target.big_m() {
        ExtendedReal::Finite(t) => (big_m - t).abs(),
        _ => 1.0 / big_m,
    };
    Ok([(tv - target.delta()).abs(), (m - target.m()).abs(), dev_big_m])
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logits.iter().map(|l| (l - max).exp()).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn pair_from(logits: &[f64], n: usize) -> Result<(Distribution, Distribution)> {
    Ok((
        Distribution::new(softmax(&logits[..n]))?,
        Distribution::new(softmax(&logits[n..]))?,
    ))
}

/// Random-restart hill climb over all `n`-atom pairs with `Q` of full support,
/// minimizing the summed deviation from `target`. Restarts come from
/// `config.trials`, steps from `config.perturbation_steps`.
pub fn penalized_search(target: &ClassParams, config: &SearchConfig, execution: Execution) -> Result<PenaltySearch> {
    config.validate()?;
    let n = config.support_size;
    let restarts = config.trials.max(1);

    let results = run_indexed(
        restarts,
        execution,
        |restart| -> Result<(f64, f64, (Distribution, Distribution))> {
            let mut rng = trial_rng(config.seed, restart as u64 + 1);
            let spread = 1.0 + 3.0 * rng.gen::<f64>();
            let mut logits: Vec<f64> = (0..2 * n)
                .map(|_| spread * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let mut pair = pair_from(&logits, n)?;
            let mut dev = deviations(&pair.0, &pair.1, target)?;
            let mut score: f64 = dev.iter().sum();

            let mut step = config.step_scale;
            let mut steps_left = config.perturbation_steps;
            while steps_left > 0 {
                let mut improved = false;
                for _ in 0..BATCH.min(steps_left) {
                    steps_left -= 1;
                    let mut cand = logits.clone();
                    // move a random subset of coordinates
                    for x in cand.iter_mut() {
                        if rng.gen_bool(0.5) {
                            *x += step * rng.sample::<f64, _>(StandardNormal);
                        }
                    }
                    let cand_pair = pair_from(&cand, n)?;
                    let cand_dev = deviations(&cand_pair.0, &cand_pair.1, target)?;
                    let cand_score: f64 = cand_dev.iter().sum();
                    if cand_score < score {
                        logits = cand;
                        pair = cand_pair;
                        dev = cand_dev;
                        score = cand_score;
                        improved = true;
                    }
                }
                if !improved {
                    step = (step * 0.5).max(STEP_FLOOR);
                }
            }
            let worst = dev.iter().cloned().fold(0.0, f64::max);
            Ok((worst, score, pair))
        },
    );

    let mut best: Option<(f64, f64, (Distribution, Distribution))> = None;
    for r in results {
        let r = r?;
        let better = match &best {
            None => true,
            Some(b) => (r.0, r.1) < (b.0, b.1),
        };
        if better {
            best = Some(r);
        }
    }
    let (best_deviation, _, best_pair) = best.expect("at least one restart");
    Ok(PenaltySearch {
        best_deviation,
        found: best_deviation <= WITNESS_TOLERANCE,
        best_pair,
    })
}

/// Returns `true` when the search agrees with [`feasible`]: a witness exists
/// for a feasible class, and a penalized search finds none within
/// [`WITNESS_TOLERANCE`] for an infeasible one.
pub fn falsify_feasibility(params: &ClassParams, config: &SearchConfig) -> bool {
    falsify_feasibility_with(params, config, Execution::default())
}

pub fn falsify_feasibility_with(params: &ClassParams, config: &SearchConfig, execution: Execution) -> bool {
    if feasible(params) {
        if params.big_m().is_finite() {
            let n = config.support_size.max(3);
            return sample_pair_in_class(params, n, config.seed)
                .and_then(|(p, q)| verify_membership(&p, &q, params, MEMBERSHIP_TOLERANCE, &[]))
                .is_ok_and(|report| report.pass);
        }
        // no finite-support pair has M = ∞; accept an approximate witness
        return penalized_search(params, config, execution).is_ok_and(|s| s.found);
    }
    penalized_search(params, config, execution).is_ok_and(|s| !s.found)
}
