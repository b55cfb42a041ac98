//! Exact sampling inside `A(δ, m, M)`.
//!
//! A member is described by atoms `(q_i, r_i)` with `p_i = q_i r_i`. Atoms with
//! `r < 1` carry total deficit `Σ q_i (1 - r_i) = δ`, atoms with `r > 1` carry
//! the same total excess, and the remaining `Q` mass sits on `r = 1`. One low
//! atom is pinned at `r = m` and one high atom at `r = M`. Starting from the
//! ternary extremal pair, the low and high atoms are split and their ratios
//! moved inward; the extra `Q` mass this needs is taken from the neutral
//! atoms, and the split is throttled so it never exceeds what they hold.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::bounds::feasible;
use crate::{ClassParams, Distribution, Error, Result};

use super::trial_rng;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct MemberPlan {
    /// Unnormalized log-weights splitting the deficit; index 0 is the `r = m` atom.
    low_log_shares: Vec<f64>,
    /// Ratios of the low atoms; `low_ratios[0] == m`, the rest in `(m, 1)`.
    low_ratios: Vec<f64>,
    high_log_shares: Vec<f64>,
    /// `high_ratios[0] == M`, the rest in `(1, M)`.
    high_ratios: Vec<f64>,
    neutral_log_shares: Vec<f64>,
    /// Fraction in `[0, 1]` of the largest admissible move away from the ternary pair.
    spread: f64,
    /// Output position of each atom, `low ++ high ++ neutral` order.
    order: Vec<usize>,
}

fn normalized_exp(logs: &[f64]) -> Vec<f64> {
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / sum).collect()
}

fn interior<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    // open interval; gen_range is half-open at hi
    loop {
        let x = rng.gen_range(lo..hi);
        if x > lo {
            return x;
        }
    }
}

impl MemberPlan {
    pub(crate) fn random<R: Rng>(params: &ClassParams, n: usize, rng: &mut R) -> Self {
        let (m, big_m) = (params.m(), params.big_m().to_f64());
        // at least one atom of each kind
        let free = n - 3;
        let extra_low = rng.gen_range(0..=free);
        let extra_high = rng.gen_range(0..=free - extra_low);
        let neutral = 1 + free - extra_low - extra_high;
        let (k_low, k_high) = (1 + extra_low, 1 + extra_high);

        let normal = |rng: &mut R| -> f64 { rng.sample(StandardNormal) };
        let low_log_shares = (0..k_low).map(|_| normal(rng)).collect();
        let high_log_shares = (0..k_high).map(|_| normal(rng)).collect();
        let neutral_log_shares = (0..neutral).map(|_| normal(rng)).collect();
        let mut low_ratios = vec![m];
        low_ratios.extend((1..k_low).map(|_| interior(rng, m, 1.0)));
        let mut high_ratios = vec![big_m];
        high_ratios.extend((1..k_high).map(|_| interior(rng, 1.0, big_m)));
        let spread = rng.gen::<f64>();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        Self {
            low_log_shares,
            low_ratios,
            high_log_shares,
            high_ratios,
            neutral_log_shares,
            spread,
            order,
        }
    }

    /// A nearby plan; ratios move by `step` in units of their admissible range.
    pub(crate) fn perturb<R: Rng>(&self, params: &ClassParams, step: f64, rng: &mut R) -> Self {
        let (m, big_m) = (params.m(), params.big_m().to_f64());
        let mut next = self.clone();
        let jitter = |x: &mut f64, rng: &mut R| {
            let z: f64 = rng.sample(StandardNormal);
            *x += step * z;
        };
        for l in next
            .low_log_shares
            .iter_mut()
            .chain(next.high_log_shares.iter_mut())
            .chain(next.neutral_log_shares.iter_mut())
        {
            jitter(l, rng);
        }
        for r in next.low_ratios.iter_mut().skip(1) {
            let z: f64 = rng.sample(StandardNormal);
            *r = reflect(*r + step * (1.0 - m) * z, m, 1.0);
        }
        for r in next.high_ratios.iter_mut().skip(1) {
            let z: f64 = rng.sample(StandardNormal);
            *r = reflect(*r + step * (big_m - 1.0) * z, 1.0, big_m);
        }
        let z: f64 = rng.sample(StandardNormal);
        next.spread = (next.spread + step * z).clamp(0.0, 1.0);
        next
    }

    pub(crate) fn build(&self, params: &ClassParams) -> Result<(Distribution, Distribution)> {
        let delta = params.delta();
        let low_shares = normalized_exp(&self.low_log_shares);
        let high_shares = normalized_exp(&self.high_log_shares);
        let neutral_shares = normalized_exp(&self.neutral_log_shares);

        // Q mass needed per unit share of δ on each atom
        let low_cost: Vec<f64> = self.low_ratios.iter().map(|r| 1.0 / (1.0 - r)).collect();
        let high_cost: Vec<f64> = self.high_ratios.iter().map(|r| 1.0 / (r - 1.0)).collect();
        let pinned = low_cost[0] + high_cost[0];
        let split: f64 = dot(&low_shares, &low_cost) + dot(&high_shares, &high_cost);
        let base = delta * pinned;
        let full = delta * split;
        let admissible = if full <= 1.0 {
            1.0
        } else {
            ((1.0 - base) / (full - base)).clamp(0.0, 1.0)
        };
        let s = self.spread * admissible;

        let mut q = Vec::with_capacity(self.order.len());
        let mut p = Vec::with_capacity(self.order.len());
        for (shares, ratios, costs) in [
            (&low_shares, &self.low_ratios, &low_cost),
            (&high_shares, &self.high_ratios, &high_cost),
        ] {
            for (i, ((&w, &r), &c)) in shares.iter().zip(ratios).zip(costs).enumerate() {
                let share = if i == 0 { (1.0 - s) + s * w } else { s * w };
                let qi = delta * share * c;
                q.push(qi);
                p.push(qi * r);
            }
        }
        let used: f64 = q.iter().sum();
        let neutral_mass = (1.0 - used).max(0.0);
        for &w in &neutral_shares {
            q.push(neutral_mass * w);
            p.push(neutral_mass * w);
        }

        let mut qs = vec![0.0; q.len()];
        let mut ps = vec![0.0; p.len()];
        for (src, &dst) in self.order.iter().enumerate() {
            qs[dst] = q[src];
            ps[dst] = p[src];
        }
        Ok((Distribution::new(ps)?, Distribution::new(qs)?))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Folds `x` back into the open interval `(lo, hi)`.
fn reflect(x: f64, lo: f64, hi: f64) -> f64 {
    let width = hi - lo;
    let mut y = (x - lo).rem_euclid(2.0 * width);
    if y > width {
        y = 2.0 * width - y;
    }
    let y = lo + y;
    if y <= lo || y >= hi {
        lo + 0.5 * width
    } else {
        y
    }
}

/// Pair of size `n` with measured `(δ, m, M)` equal to `params` up to rounding.
///
/// The degenerate class `(0, 1, 1)` gives `P = Q`, a random split of unit mass
/// over `n` atoms.
pub fn sample_pair_in_class(params: &ClassParams, n: usize, seed: u64) -> Result<(Distribution, Distribution)> {
    let mut rng = trial_rng(seed, 0);
    sample_with(params, n, &mut rng)
}

pub(crate) fn sample_with<R: Rng>(params: &ClassParams, n: usize, rng: &mut R) -> Result<(Distribution, Distribution)> {
    check_class(params)?;
    if params.delta() == 0.0 {
        if n == 0 {
            return Err(Error::InvalidConfig("support size must be positive".into()));
        }
        let logs: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let w = Distribution::new(normalized_exp(&logs))?;
        return Ok((w.clone(), w));
    }
    if n < 3 {
        return Err(Error::InvalidConfig(format!(
            "in-class sampling needs at least 3 atoms, got {n}"
        )));
    }
    MemberPlan::random(params, n, rng).build(params)
}

pub(crate) fn check_class(params: &ClassParams) -> Result<()> {
    if !params.big_m().is_finite() {
        return Err(Error::UnboundedM);
    }
    if !feasible(params) {
        return Err(Error::Infeasible {
            delta: params.delta(),
            m: params.m(),
            big_m: params.big_m().to_string(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{ratio_extremes, total_variation};
    use crate::grid::default_grid;
    use crate::ExtendedReal;

    fn assert_member(p: &Distribution, q: &Distribution, params: &ClassParams, tol: f64) {
        let tv = total_variation(p, q).unwrap();
        let (m, big_m) = ratio_extremes(p, q).unwrap();
        assert!((tv - params.delta()).abs() <= tol, "tv {tv} vs {params}");
        assert!((m - params.m()).abs() <= tol, "m {m} vs {params}");
        let dev = (big_m.to_f64() - params.big_m().to_f64()).abs();
        assert!(dev <= tol * params.big_m().to_f64(), "M {big_m} vs {params}");
    }

    #[test]
    fn reflect_stays_inside() {
        for x in [-3.7, -0.1, 0.0, 0.5, 1.0, 1.3, 9.9] {
            let y = reflect(x, 0.0, 1.0);
            assert!(y > 0.0 && y < 1.0, "{x} -> {y}");
        }
    }

    #[test]
    fn samples_are_members() {
        let params = ClassParams::finite(0.25, 0.5, 2.0).unwrap();
        for seed in 0..50 {
            let (p, q) = sample_pair_in_class(&params, 3, seed).unwrap();
            assert_member(&p, &q, &params, 1e-9);
        }
        for point in default_grid() {
            for (seed, n) in (0..20u64).zip((3..=8).cycle()) {
                let (p, q) = sample_pair_in_class(&point.params, n, seed).unwrap();
                assert_eq!(p.len(), n);
                assert_member(&p, &q, &point.params, 1e-9);
            }
        }
    }

    #[test]
    fn perturbed_plans_stay_members() {
        let params = ClassParams::finite(0.2, 0.1, 10.0).unwrap();
        let mut rng = trial_rng(3, 0);
        let mut plan = MemberPlan::random(&params, 8, &mut rng);
        for step in [1.0, 0.5, 0.1, 1e-3] {
            plan = plan.perturb(&params, step, &mut rng);
            let (p, q) = plan.build(&params).unwrap();
            assert_member(&p, &q, &params, 1e-9);
        }
    }

    #[test]
    fn degenerate_class_gives_equal_pair() {
        let params = ClassParams::finite(0.0, 1.0, 1.0).unwrap();
        let (p, q) = sample_pair_in_class(&params, 5, 11).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.len(), 5);
    }

    #[test]
    fn errors() {
        let bad = ClassParams::finite(0.5, 0.5, 2.0).unwrap();
        assert!(matches!(
            sample_pair_in_class(&bad, 3, 0),
            Err(Error::Infeasible { .. })
        ));
        let ok = ClassParams::finite(0.25, 0.5, 2.0).unwrap();
        assert!(matches!(sample_pair_in_class(&ok, 2, 0), Err(Error::InvalidConfig(_))));
        let unbounded = ClassParams::new(0.25, 0.0, ExtendedReal::PosInf).unwrap();
        assert_eq!(sample_pair_in_class(&unbounded, 3, 0), Err(Error::UnboundedM));
    }

    #[test]
    fn same_seed_same_pair() {
        let params = ClassParams::finite(0.1, 0.25, 5.0).unwrap();
        assert_eq!(
            sample_pair_in_class(&params, 7, 42).unwrap(),
            sample_pair_in_class(&params, 7, 42).unwrap()
        );
    }
}
