//! Ternary pairs attaining [`theorem1_bound`](crate::bounds::theorem1_bound),
//! and measurement of a pair against claimed class parameters.
//!
//! For `m < 1 < M` and `0 < δ <= tv_cap(m, M)`, with
//! `q = (M-1)/(M-m)`, `p = m q` and `t = δ (M-m)/((M-1)(1-m))`:
//!
//! ```text
//! P = (t p, t (1-p), 1-t)
//! Q = (t q, t (1-q), 1-t)
//! ```
//!
//! The first atom has ratio `m`, the second `M`, the third 1, and
//! `TV(P, Q) = t (q - p) = δ`.

use crate::bounds::{feasible, theorem1_bound};
use crate::divergence::{f_divergence, ratio_extremes, total_variation};
use crate::{ClassParams, Distribution, Error, ExtendedReal, Generator, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalPair {
    pub p: Distribution,
    pub q: Distribution,
    pub params: ClassParams,
    /// `Q` mass of the low-ratio atom within the first two, `(M-1)/(M-m)`.
    pub q_low: f64,
    /// `P` mass of the low-ratio atom within the first two, `m q_low`.
    pub p_low: f64,
    /// Total mass of the first two atoms.
    pub t: f64,
}

/// Builds the attaining pair for a feasible class with `M < ∞`.
///
/// The degenerate class `(0, 1, 1)` yields the one-atom pair `P = Q = (1)`.
/// At `δ = tv_cap(m, M)` the third atom has zero mass and is kept.
pub fn ternary_extremal(params: &ClassParams) -> Result<ExtremalPair> {
    let big_m = params.big_m().finite().ok_or(Error::UnboundedM)?;
    if !feasible(params) {
        return Err(Error::Infeasible {
            delta: params.delta(),
            m: params.m(),
            big_m: params.big_m().to_string(),
        });
    }
    if params.delta() == 0.0 {
        return Ok(ExtremalPair {
            p: Distribution::point_mass(),
            q: Distribution::point_mass(),
            params: *params,
            q_low: 1.0,
            p_low: 1.0,
            t: 0.0,
        });
    }
    let (delta, m) = (params.delta(), params.m());
    let span = big_m - m;
    let q_low = (big_m - 1.0) / span;
    let p_low = m * q_low;
    // 1 - q and 1 - p in cancellation-free form
    let q_high = (1.0 - m) / span;
    let p_high = big_m * (1.0 - m) / span;
    let t = (delta * span / ((big_m - 1.0) * (1.0 - m))).min(1.0);
    let rest = 1.0 - t;
    let p = Distribution::exact(vec![t * p_low, t * p_high, rest])?;
    let q = Distribution::exact(vec![t * q_low, t * q_high, rest])?;
    Ok(ExtremalPair {
        p,
        q,
        params: *params,
        q_low,
        p_low,
        t,
    })
}

/// `D_f` on a pair against the class bound.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorGap {
    pub generator_name: String,
    pub divergence: ExtendedReal,
    /// `None` when the claimed class has no finite-`M` bound or is infeasible.
    pub bound: Option<ExtendedReal>,
    /// `bound - divergence` when both are finite.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub measured_delta: f64,
    pub measured_m: f64,
    pub measured_big_m: ExtendedReal,
    pub claimed: ClassParams,
    pub delta_deviation: f64,
    pub m_deviation: f64,
    pub big_m_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub gaps: Vec<GeneratorGap>,
}

fn extended_deviation(a: ExtendedReal, b: ExtendedReal) -> f64 {
    match (a, b) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => (x - y).abs(),
        (x, y) if x == y => 0.0,
        _ => f64::INFINITY,
    }
}

/// Measures `(δ, m, M)` of `(P, Q)` and compares them with `claimed` at
/// absolute tolerance `tol`. For each generator, also reports `D_f(P‖Q)` and
/// its distance below the class bound.
pub fn verify_membership(
    p: &Distribution,
    q: &Distribution,
    claimed: &ClassParams,
    tol: f64,
    generators: &[Generator],
) -> Result<PairReport> {
    let (measured_m, measured_big_m) = ratio_extremes(p, q)?;
    let measured_delta = total_variation(p, q)?;
    let delta_deviation = (measured_delta - claimed.delta()).abs();
    let m_deviation = (measured_m - claimed.m()).abs();
    let big_m_deviation = extended_deviation(measured_big_m, claimed.big_m());
    let pass = delta_deviation <= tol && m_deviation <= tol && big_m_deviation <= tol;

    let gaps = generators
        .iter()
        .map(|gen| {
            let divergence = f_divergence(gen, p, q)?;
            let bound = theorem1_bound(gen, claimed).ok();
            let gap = match (bound.and_then(ExtendedReal::finite), divergence.finite()) {
                (Some(b), Some(d)) => Some(b - d),
                _ => None,
            };
            Ok(GeneratorGap {
                generator_name: gen.name().to_string(),
                divergence,
                bound,
                gap,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(PairReport {
        measured_delta,
        measured_m,
        measured_big_m,
        claimed: *claimed,
        delta_deviation,
        m_deviation,
        big_m_deviation,
        tolerance: tol,
        pass,
        gaps,
    })
}
