//! Closed-form optimal upper bounds on `D_f(P‖Q)` over the class
//! `A(δ, m, M)` of pairs with total variation `δ`, `ess inf dP/dQ = m` and
//! `ess sup dP/dQ = M`, plus the prior (weaker) bounds they are compared with.
//!
//! | Function | Class | Value |
//! |----------|-------|-------|
//! | [`theorem1_bound`] | `A(δ, m, M)` | `δ (f(m)/(1-m) + f(M)/(M-1))` |
//! | [`corollary1_bound`] | `⋃_δ A(δ, m, M)` | `((M-1) f(m) + (1-m) f(M))/(M-m)` |
//! | [`vajda_bound`] | all pairs at TV `δ` | `δ (f(0) + f'(∞))` |
//! | [`tv_cap`] | largest feasible `δ` | `(M-1)(1-m)/(M-m)` |

use std::fmt;

use crate::generator::{check_alpha, kl_generator};
use crate::{Error, ExtendedReal, Generator, Result};

/// The triple `(δ, m, M)` naming the class `A(δ, m, M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassParams {
    delta: f64,
    m: f64,
    big_m: ExtendedReal,
}

impl ClassParams {
    /// Requires `0 <= δ <= 1` and `0 <= m <= 1 <= M`.
    pub fn new(delta: f64, m: f64, big_m: ExtendedReal) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidParams(format!("delta = {delta} not in [0, 1]")));
        }
        check_extremes(m, big_m)?;
        Ok(Self { delta, m, big_m })
    }

    pub fn finite(delta: f64, m: f64, big_m: f64) -> Result<Self> {
        Self::new(delta, m, ExtendedReal::from_f64(big_m)?)
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn big_m(&self) -> ExtendedReal {
        self.big_m
    }

    /// Same extremes, different `δ`.
    pub fn with_delta(&self, delta: f64) -> Result<Self> {
        Self::new(delta, self.m, self.big_m)
    }

    fn finite_big_m(&self) -> Result<f64> {
        self.big_m.finite().ok_or(Error::UnboundedM)
    }

    fn infeasible(&self) -> Error {
        Error::Infeasible {
            delta: self.delta,
            m: self.m,
            big_m: self.big_m.to_string(),
        }
    }
}

impl fmt::Display for ClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(delta={}, m={}, M={})", self.delta, self.m, self.big_m)
    }
}

fn check_extremes(m: f64, big_m: ExtendedReal) -> Result<()> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::InvalidParams(format!("m = {m} not in [0, 1]")));
    }
    if !(big_m >= ExtendedReal::Finite(1.0)) {
        return Err(Error::InvalidParams(format!("M = {big_m} is below 1")));
    }
    Ok(())
}

/// Which closed form a [`BoundReport`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    Theorem1,
    Corollary1,
    Corollary2,
    KlAb,
    Verdu,
    Renyi,
    Simic,
    SasonChi2,
    SasonRenyi,
}

impl Formula {
    pub fn id(self) -> &'static str {
        match self {
            Formula::Theorem1 => "theorem-1",
            Formula::Corollary1 => "corollary-1",
            Formula::Corollary2 => "corollary-2",
            Formula::KlAb => "kl-ab",
            Formula::Verdu => "verdu",
            Formula::Renyi => "renyi",
            Formula::Simic => "simic",
            Formula::SasonChi2 => "sason-chi2",
            Formula::SasonRenyi => "sason-renyi",
        }
    }

    /// Optimal bounds are nonnegative; prior comparators need not be tight.
    pub fn is_optimal(self) -> bool {
        matches!(
            self,
            Formula::Theorem1
                | Formula::Corollary1
                | Formula::Corollary2
                | Formula::KlAb
                | Formula::Verdu
                | Formula::Renyi
        )
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: ExtendedReal,
    pub params: ClassParams,
    pub generator_name: String,
    pub formula: Formula,
}

impl BoundReport {
    /// Evaluates one of the generic optimal bounds for `gen`.
    ///
    /// `Corollary1` ignores `params.delta()`; `Corollary2` ignores `m` and `M`.
    pub fn evaluate(gen: &Generator, formula: Formula, params: ClassParams) -> Result<Self> {
        let bound = match formula {
            Formula::Theorem1 => theorem1_bound(gen, &params)?,
            Formula::Corollary1 => corollary1_bound(gen, params.m(), params.big_m())?,
            Formula::Corollary2 => vajda_bound(gen, params.delta())?,
            other => {
                return Err(Error::InvalidParams(format!(
                    "{other} is not a generic f-divergence bound"
                )))
            }
        };
        Ok(Self {
            bound,
            params,
            generator_name: gen.name().to_string(),
            formula,
        })
    }
}

/// Largest total variation compatible with ratio extremes `(m, M)`:
/// `(M-1)(1-m)/(M-m)`, with value `1 - m` at `M = ∞` and `0` at `m = M = 1`.
pub fn tv_cap(m: f64, big_m: ExtendedReal) -> Result<f64> {
    check_extremes(m, big_m)?;
    match big_m {
        ExtendedReal::Finite(big_m) => {
            if m == 1.0 || big_m == 1.0 {
                Ok(0.0)
            } else {
                Ok((big_m - 1.0) * (1.0 - m) / (big_m - m))
            }
        }
        _ => Ok(1.0 - m),
    }
}

/// Whether `A(δ, m, M)` is nonempty: either `m = M = 1` and `δ = 0`, or
/// `m < 1 < M` and `0 < δ <= tv_cap(m, M)`.
pub fn feasible(params: &ClassParams) -> bool {
    let (delta, m, big_m) = (params.delta, params.m, params.big_m);
    if m == 1.0 && big_m == ExtendedReal::Finite(1.0) {
        return delta == 0.0;
    }
    if m == 1.0 || big_m == ExtendedReal::Finite(1.0) {
        return false;
    }
    match tv_cap(m, big_m) {
        Ok(cap) => delta > 0.0 && delta <= cap,
        Err(_) => false,
    }
}

/// `f(m)/(1 - m)`, reading `f(0)` from the generator's stored limit.
fn lower_slope(gen: &Generator, m: f64) -> Result<ExtendedReal> {
    gen.value_at(m)?.checked_div(1.0 - m)
}

/// `f(M)/(M - 1)`.
fn upper_slope(gen: &Generator, big_m: f64) -> Result<ExtendedReal> {
    ExtendedReal::from_f64(gen.eval(big_m) / (big_m - 1.0))
}

/// Supremum of `D_f` over `A(δ, m, M)`: `δ (f(m)/(1-m) + f(M)/(M-1))`.
///
/// Degenerate classes (`m = 1` or `M = 1`) give 0. Requires `M < ∞`; use
/// [`vajda_bound`] for the unbounded case.
pub fn theorem1_bound(gen: &Generator, params: &ClassParams) -> Result<ExtendedReal> {
    let big_m = params.finite_big_m()?;
    if !feasible(params) {
        return Err(params.infeasible());
    }
    let m = params.m;
    if m == 1.0 || big_m == 1.0 {
        return Ok(ExtendedReal::ZERO);
    }
    let slopes = lower_slope(gen, m)?.checked_add(upper_slope(gen, big_m)?)?;
    slopes.scale(params.delta)
}

/// Supremum of `D_f` over all pairs with ratio extremes `(m, M)`:
/// `((M-1) f(m) + (1-m) f(M))/(M-m)`. Requires `M < ∞`.
pub fn corollary1_bound(gen: &Generator, m: f64, big_m: ExtendedReal) -> Result<ExtendedReal> {
    check_extremes(m, big_m)?;
    let big_m = big_m.finite().ok_or(Error::UnboundedM)?;
    if m == 1.0 || big_m == 1.0 {
        return Ok(ExtendedReal::ZERO);
    }
    let lower = gen.value_at(m)?.scale(big_m - 1.0)?;
    let upper = ExtendedReal::from_f64((1.0 - m) * gen.eval(big_m))?;
    lower.checked_add(upper)?.checked_div(big_m - m)
}

/// Supremum of `D_f` over all pairs at total variation `δ`:
/// `δ (f(0) + lim f(t)/t)`.
pub fn vajda_bound(gen: &Generator, delta: f64) -> Result<ExtendedReal> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta = {delta} not in [0, 1]")));
    }
    if delta == 0.0 {
        return Ok(ExtendedReal::ZERO);
    }
    gen.f_at_zero().checked_add(gen.slope_at_infinity())?.scale(delta)
}

/// `ln(x)/(x - 1)`, continuously extended by 1 at `x = 1`.
pub(crate) fn log_ratio(x: f64) -> f64 {
    let u = x - 1.0;
    if u.abs() < 1e-8 {
        1.0 - 0.5 * u
    } else {
        u.ln_1p() / u
    }
}

/// The relative-entropy bound in the reciprocal parametrization
/// `a = 1/M`, `b = 1/m`: `δ (ln a/(a-1) + ln b/(1-b))`.
///
/// `b = ∞` (`m = 0`) drops the second term, which tends to 0.
pub fn kl_bound_ab(delta: f64, a: f64, b: ExtendedReal) -> Result<ExtendedReal> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParams(format!("delta = {delta} not in [0, 1]")));
    }
    if !(a > 0.0 && a <= 1.0) || !(b >= ExtendedReal::Finite(1.0)) {
        return Err(Error::InvalidParams(format!(
            "need 0 < a <= 1 <= b, got a = {a}, b = {b}"
        )));
    }
    if a == 1.0 || b == ExtendedReal::Finite(1.0) {
        return Ok(ExtendedReal::ZERO);
    }
    let first = log_ratio(a);
    let second = match b {
        ExtendedReal::Finite(b) => -log_ratio(b),
        _ => 0.0,
    };
    ExtendedReal::from_f64(delta * (first + second))
}

/// Relative-entropy bound with `m = 0`: `δ ln(a)/(a - 1)`, `a = 1/M`.
pub fn verdu_kl_bound(delta: f64, big_m: ExtendedReal) -> Result<ExtendedReal> {
    check_extremes(0.0, big_m)?;
    let big_m = big_m.finite().ok_or(Error::UnboundedM)?;
    kl_bound_ab(delta, 1.0 / big_m, ExtendedReal::PosInf)
}

/// Rényi-divergence bound of order `alpha` over `A(δ, m, M)`:
/// `ln(1 + δ((M^α - 1)/(M - 1) - (1 - m^α)/(1 - m)))/(α - 1)`.
pub fn renyi_bound(alpha: f64, params: &ClassParams) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    let big_m = params.finite_big_m()?;
    if !feasible(params) {
        return Err(params.infeasible());
    }
    let m = params.m;
    if m == 1.0 || big_m == 1.0 {
        return Ok(ExtendedReal::ZERO);
    }
    let upper = (big_m.powf(alpha) - 1.0) / (big_m - 1.0);
    let lower = (1.0 - m.powf(alpha)) / (1.0 - m);
    let shift = params.delta * (upper - lower);
    if !(1.0 + shift > 0.0) {
        return Err(Error::LogDomain(1.0 + shift));
    }
    ExtendedReal::from_f64(shift.ln_1p() / (alpha - 1.0))
}

/// Prior Rényi bound: [`renyi_bound`] evaluated at `m = 0`.
pub fn sason_renyi_bound(alpha: f64, delta: f64, big_m: ExtendedReal) -> Result<ExtendedReal> {
    renyi_bound(alpha, &ClassParams::new(delta, 0.0, big_m)?)
}

/// Prior relative-entropy bound from ratio extremes, in terms of
/// `a = 1/M < 1 < b = 1/m`:
/// `(a ln b - b ln a)/(b - a) + ln((b - a)/(ln b - ln a)) - 1`.
pub fn simic_kl_bound(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0 && b > 1.0 && b.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "need 0 < a < 1 < b < inf, got a = {a}, b = {b}"
        )));
    }
    let (ln_a, ln_b) = (a.ln(), b.ln());
    Ok((a * ln_b - b * ln_a) / (b - a) + ((b - a) / (ln_b - ln_a)).ln() - 1.0)
}

/// Prior χ² bound: `2 δ max(M - 1, 1 - m)`.
pub fn sason_chi2_bound(params: &ClassParams) -> Result<f64> {
    let big_m = params.finite_big_m()?;
    if !feasible(params) {
        return Err(params.infeasible());
    }
    Ok(2.0 * params.delta * (big_m - 1.0).max(1.0 - params.m))
}

/// [`theorem1_bound`] for relative entropy.
pub fn kl_theorem1_bound(params: &ClassParams) -> Result<ExtendedReal> {
    theorem1_bound(&kl_generator(), params)
}
