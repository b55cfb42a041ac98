use rand::Rng;

use crate::bounds::{theorem1_bound, vajda_bound};
use crate::divergence::f_divergence;
use crate::extremal::ternary_extremal;
use crate::{ClassParams, Distribution, ExtendedReal, Generator, Result};

use super::sampler::{check_class, sample_with, MemberPlan};
use super::{
    exceeds, gap, run_indexed, trial_rng, Execution, SearchConfig, SearchOutcome, DIVERGENCE_THRESHOLD, STEP_FLOOR,
    SWEEP_MAX_M,
};

/// Candidates tried before a failed batch halves the step.
const BATCH: usize = 4;

struct TrialResult {
    value: ExtendedReal,
    pair: (Distribution, Distribution),
    violations: u64,
    evaluated: u64,
}

fn run_trial(
    gen: &Generator,
    params: &ClassParams,
    bound: ExtendedReal,
    config: &SearchConfig,
    index: usize,
) -> Result<TrialResult> {
    let mut rng = trial_rng(config.seed, index as u64 + 1);
    let n = rng.gen_range(3..=config.support_size.max(3));
    let mut violations = 0;
    let mut evaluated = 1;

    if params.delta() == 0.0 {
        let pair = sample_with(params, n, &mut rng)?;
        let value = f_divergence(gen, &pair.0, &pair.1)?;
        violations += u64::from(exceeds(value, bound, config.tolerance));
        return Ok(TrialResult {
            value,
            pair,
            violations,
            evaluated,
        });
    }

    let mut plan = MemberPlan::random(params, n, &mut rng);
    let mut pair = plan.build(params)?;
    let mut value = f_divergence(gen, &pair.0, &pair.1)?;
    violations += u64::from(exceeds(value, bound, config.tolerance));

    let mut step = config.step_scale;
    let mut steps_left = config.perturbation_steps;
    while steps_left > 0 {
        let mut improved = false;
        for _ in 0..BATCH.min(steps_left) {
            steps_left -= 1;
            let candidate = plan.perturb(params, step, &mut rng);
            let cand_pair = candidate.build(params)?;
            let cand_value = f_divergence(gen, &cand_pair.0, &cand_pair.1)?;
            evaluated += 1;
            violations += u64::from(exceeds(cand_value, bound, config.tolerance));
            if cand_value > value {
                plan = candidate;
                pair = cand_pair;
                value = cand_value;
                improved = true;
            }
        }
        if !improved {
            step = (step * 0.5).max(STEP_FLOOR);
        }
    }
    Ok(TrialResult {
        value,
        pair,
        violations,
        evaluated,
    })
}

/// Searches `A(δ, m, M)` for the largest `D_f` and counts samples above
/// [`theorem1_bound`].
pub fn search_sup(gen: &Generator, params: &ClassParams, config: &SearchConfig) -> Result<SearchOutcome> {
    search_sup_with(gen, params, config, Execution::default())
}

pub fn search_sup_with(
    gen: &Generator,
    params: &ClassParams,
    config: &SearchConfig,
    execution: Execution,
) -> Result<SearchOutcome> {
    config.validate()?;
    check_class(params)?;
    let bound = theorem1_bound(gen, params)?;

    let mut best: Option<TrialResult> = None;
    if config.extremal_seed {
        let pair = ternary_extremal(params)?;
        let value = f_divergence(gen, &pair.p, &pair.q)?;
        best = Some(TrialResult {
            value,
            violations: u64::from(exceeds(value, bound, config.tolerance)),
            pair: (pair.p, pair.q),
            evaluated: 1,
        });
    }

    let results = run_indexed(config.trials, execution, |i| run_trial(gen, params, bound, config, i));

    let mut violations = best.as_ref().map_or(0, |b| b.violations);
    let mut evaluated = best.as_ref().map_or(0, |b| b.evaluated);
    for result in results {
        let result = result?;
        violations += result.violations;
        evaluated += result.evaluated;
        let better = match &best {
            None => true,
            Some(b) => result.value > b.value,
        };
        if better {
            best = Some(result);
        }
    }

    let best = match best {
        Some(b) => b,
        None => {
            // zero trials without the extremal seed: nothing was evaluated
            let pair = ternary_extremal(params)?;
            TrialResult {
                value: ExtendedReal::NegInf,
                pair: (pair.p, pair.q),
                violations: 0,
                evaluated: 0,
            }
        }
    };
    Ok(SearchOutcome {
        best_value: best.value,
        gap: gap(bound, best.value),
        best_pair: best.pair,
        bound,
        violations,
        evaluated,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub big_m: f64,
    /// [`theorem1_bound`] at `(δ, 0, M)`.
    pub bound: ExtendedReal,
    /// `D_f` of the ternary pair at `(δ, 0, M)`.
    pub attained: ExtendedReal,
}

/// Approach to the supremum of `D_f` over all pairs at total variation `δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct VajdaSweep {
    /// `best_value` is the largest attained value along the sweep, `bound` the
    /// limit `δ (f(0) + f'(∞))`.
    pub outcome: SearchOutcome,
    pub trace: Vec<SweepPoint>,
    /// Some attained value exceeded [`DIVERGENCE_THRESHOLD`].
    pub diverged: bool,
}

/// Sweeps `M` geometrically up to [`SWEEP_MAX_M`] with `m = 0`, evaluating the
/// class bound and its attaining pair at each point.
pub fn search_unconstrained_sup(gen: &Generator, delta: f64, config: &SearchConfig) -> Result<VajdaSweep> {
    search_unconstrained_sup_with(gen, delta, config, Execution::default())
}

pub fn search_unconstrained_sup_with(
    gen: &Generator,
    delta: f64,
    config: &SearchConfig,
    execution: Execution,
) -> Result<VajdaSweep> {
    config.validate()?;
    let limit = vajda_bound(gen, delta)?;
    let point = Distribution::point_mass();

    if delta == 0.0 {
        return Ok(VajdaSweep {
            outcome: SearchOutcome {
                best_value: ExtendedReal::ZERO,
                best_pair: (point.clone(), point),
                bound: limit,
                gap: gap(limit, ExtendedReal::ZERO),
                violations: 0,
                evaluated: 1,
            },
            trace: Vec::new(),
            diverged: false,
        });
    }

    let grid = sweep_grid(delta, config.sweep_points.max(2));
    let evaluated = run_indexed(grid.len(), execution, |i| -> Result<_> {
        let params = ClassParams::finite(delta, 0.0, grid[i])?;
        let bound = theorem1_bound(gen, &params)?;
        let pair = ternary_extremal(&params)?;
        let attained = f_divergence(gen, &pair.p, &pair.q)?;
        Ok((
            SweepPoint {
                big_m: grid[i],
                bound,
                attained,
            },
            (pair.p, pair.q),
        ))
    });

    let mut trace = Vec::with_capacity(grid.len());
    let mut best_value = ExtendedReal::NegInf;
    let mut best_pair = (point.clone(), point);
    let mut violations = 0;
    for item in evaluated {
        let (sweep_point, pair) = item?;
        violations += u64::from(exceeds(sweep_point.attained, limit, config.tolerance));
        if sweep_point.attained > best_value {
            best_value = sweep_point.attained;
            best_pair = pair;
        }
        trace.push(sweep_point);
    }
    let diverged = best_value > ExtendedReal::Finite(DIVERGENCE_THRESHOLD);
    Ok(VajdaSweep {
        outcome: SearchOutcome {
            best_value,
            gap: gap(limit, best_value),
            best_pair,
            bound: limit,
            violations,
            evaluated: trace.len() as u64,
        },
        trace,
        diverged,
    })
}

/// Geometric grid from the smallest `M` with `δ <= tv_cap(0, M)` (at least 2)
/// up to [`SWEEP_MAX_M`]. Empty when no finite `M` qualifies.
fn sweep_grid(delta: f64, points: usize) -> Vec<f64> {
    if delta >= 1.0 {
        return Vec::new();
    }
    // tv_cap(0, M) = (M - 1)/M >= δ  <=>  M >= 1/(1 - δ)
    let start = (1.0 / (1.0 - delta)).max(2.0);
    if start > SWEEP_MAX_M {
        return Vec::new();
    }
    let (lo, hi) = (start.ln(), SWEEP_MAX_M.ln());
    let mut grid: Vec<f64> = (0..points)
        .map(|k| (lo + (hi - lo) * k as f64 / (points - 1) as f64).exp())
        .collect();
    grid[0] = start;
    grid[points - 1] = SWEEP_MAX_M;
    // the start may sit a rounding error below the cap boundary
    while let Some(&first) = grid.first() {
        if ClassParams::finite(delta, 0.0, first).is_ok_and(|p| crate::bounds::feasible(&p)) {
            break;
        }
        grid[0] = first * (1.0 + 1e-12);
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{chi2_generator, hellinger_generator, kl_generator, tv_generator};

    fn quick(trials: usize) -> SearchConfig {
        SearchConfig {
            trials,
            seed: 7,
            perturbation_steps: 8,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn kl_sup_is_attained() {
        let params = ClassParams::finite(0.25, 0.5, 2.0).unwrap();
        let out = search_sup(&kl_generator(), &params, &quick(2000)).unwrap();
        assert_eq!(out.violations, 0);
        assert!((out.best_value.to_f64() - 0.25 * std::f64::consts::LN_2).abs() <= 1e-9);
        assert!(out.gap.abs() <= 1e-9);
    }

    #[test]
    fn chi2_sup_is_attained() {
        let params = ClassParams::finite(0.25, 0.5, 2.0).unwrap();
        let out = search_sup(&chi2_generator(), &params, &quick(2000)).unwrap();
        assert_eq!(out.violations, 0);
        assert!((out.best_value.to_f64() - 0.375).abs() <= 1e-9);
    }

    #[test]
    fn degenerate_class() {
        let params = ClassParams::finite(0.0, 1.0, 1.0).unwrap();
        let out = search_sup(&kl_generator(), &params, &quick(100)).unwrap();
        assert_eq!(out.best_value, ExtendedReal::ZERO);
        assert_eq!(out.bound, ExtendedReal::ZERO);
        assert_eq!(out.violations, 0);
    }

    #[test]
    fn unseeded_search_stays_below() {
        let params = ClassParams::finite(0.1, 0.25, 5.0).unwrap();
        let config = SearchConfig {
            extremal_seed: false,
            perturbation_steps: 32,
            ..quick(500)
        };
        let out = search_sup(&hellinger_generator(3.0).unwrap(), &params, &config).unwrap();
        assert_eq!(out.violations, 0);
        assert!(out.gap >= -1e-10);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let params = ClassParams::finite(0.2, 0.1, 10.0).unwrap();
        let config = quick(300);
        let gen = kl_generator();
        let a = search_sup_with(&gen, &params, &config, Execution::Sequential).unwrap();
        let b = search_sup_with(&gen, &params, &config, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.best_value.to_f64().to_bits(), b.best_value.to_f64().to_bits());
    }

    #[test]
    fn vajda_sweep_examples() {
        let config = SearchConfig::default();
        let tv = search_unconstrained_sup(&tv_generator(), 0.3, &config).unwrap();
        for p in &tv.trace {
            assert!((p.bound.to_f64() - 0.3).abs() < 1e-12);
        }
        assert!((tv.outcome.best_value.to_f64() - 0.3).abs() < 1e-12);

        let h = search_unconstrained_sup(&hellinger_generator(0.5).unwrap(), 0.3, &config).unwrap();
        assert!((h.outcome.best_value.to_f64() - 0.6).abs() < 1e-5);
        assert!(h.trace.windows(2).all(|w| w[0].bound <= w[1].bound));

        let kl = search_unconstrained_sup(&kl_generator(), 0.3, &config).unwrap();
        assert_eq!(kl.outcome.bound, ExtendedReal::PosInf);
        assert!(kl.trace.windows(2).all(|w| w[0].bound < w[1].bound));
    }

    #[test]
    fn sweep_grid_starts_feasible() {
        for delta in [0.1, 0.3, 0.5, 0.9, 0.999] {
            let g = sweep_grid(delta, 10);
            assert_eq!(g.len(), 10);
            assert_eq!(*g.last().unwrap(), SWEEP_MAX_M);
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(sweep_grid(1.0, 10).is_empty());
    }
}
