//! Convex generators `f` with `f(1) = 0`, carried with their boundary limits
//! `f(0+)` and `f'(∞) = lim f(t)/t`.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, ExtendedReal, Result};

/// `|f(1)|` above this fails the anchor check.
pub const ANCHOR_TOLERANCE: f64 = 1e-12;
/// Number of sampled midpoint-convexity triples.
pub const CONVEXITY_SAMPLES: usize = 64;
const CONVEXITY_SEED: u64 = 0x5eed_c0de_f00d_0001;
const CONVEXITY_LO: f64 = 1e-6;
const CONVEXITY_HI: f64 = 1e6;

type EvalFn = dyn Fn(f64) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct Generator {
    eval: Arc<EvalFn>,
    f_at_zero: ExtendedReal,
    slope_at_infinity: ExtendedReal,
    name: String,
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("name", &self.name)
            .field("f_at_zero", &self.f_at_zero)
            .field("slope_at_infinity", &self.slope_at_infinity)
            .finish_non_exhaustive()
    }
}

impl Generator {
    fn named<F>(name: impl Into<String>, eval: F, f_at_zero: ExtendedReal, slope: ExtendedReal) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(eval),
            f_at_zero,
            slope_at_infinity: slope,
            name: name.into(),
        }
    }

    /// `f(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    /// `f(t)` for `t >= 0`, using the stored limit at `0`.
    pub fn value_at(&self, t: f64) -> Result<ExtendedReal> {
        if t == 0.0 {
            Ok(self.f_at_zero)
        } else {
            ExtendedReal::from_f64(self.eval(t))
        }
    }

    pub fn f_at_zero(&self) -> ExtendedReal {
        self.f_at_zero
    }

    pub fn slope_at_infinity(&self) -> ExtendedReal {
        self.slope_at_infinity
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Relative entropy, `f(t) = t ln t`.
pub fn kl_generator() -> Generator {
    Generator::named(
        "kl",
        |t: f64| if t == 0.0 { 0.0 } else { t * t.ln() },
        ExtendedReal::ZERO,
        ExtendedReal::PosInf,
    )
}

/// Total variation, `f(t) = |t - 1| / 2`.
pub fn tv_generator() -> Generator {
    Generator::named(
        "tv",
        |t: f64| 0.5 * (t - 1.0).abs(),
        ExtendedReal::Finite(0.5),
        ExtendedReal::Finite(0.5),
    )
}

/// Pearson χ², `f(t) = t² - 1` (Hellinger of order 2).
pub fn chi2_generator() -> Generator {
    Generator::named(
        "chi2",
        |t: f64| t * t - 1.0,
        ExtendedReal::Finite(-1.0),
        ExtendedReal::PosInf,
    )
}

/// Hellinger divergence of order `alpha`, `f(t) = (t^α - 1)/(α - 1)`.
pub fn hellinger_generator(alpha: f64) -> Result<Generator> {
    check_alpha(alpha)?;
    let f_at_zero = ExtendedReal::Finite(1.0 / (1.0 - alpha));
    let slope = if alpha > 1.0 {
        ExtendedReal::PosInf
    } else {
        ExtendedReal::ZERO
    };
    Ok(Generator::named(
        format!("hellinger:{alpha}"),
        move |t: f64| (t.powf(alpha) - 1.0) / (alpha - 1.0),
        f_at_zero,
        slope,
    ))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha == 1.0 {
        Err(Error::InvalidAlpha(alpha))
    } else {
        Ok(())
    }
}

/// Wraps a user-supplied convex `f`. The anchor `f(1) = 0` and midpoint
/// convexity on 64 log-uniform pairs in `(1e-6, 1e6)` are checked; neither is
/// a proof of convexity.
pub fn custom_generator<F>(
    f: F,
    f_at_zero: ExtendedReal,
    slope_at_infinity: ExtendedReal,
    name: impl Into<String>,
) -> Result<Generator>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    check_convexity_sample(&f)?;
    let anchor = f(1.0);
    if !(anchor.abs() <= ANCHOR_TOLERANCE) {
        return Err(Error::FailsAnchorCheck(anchor));
    }
    if f_at_zero == ExtendedReal::NegInf {
        return Err(Error::InvalidLimit("f(0+) = -inf"));
    }
    if slope_at_infinity == ExtendedReal::NegInf {
        return Err(Error::InvalidLimit("f'(inf) = -inf"));
    }
    Ok(Generator::named(name, f, f_at_zero, slope_at_infinity))
}

fn check_convexity_sample<F: Fn(f64) -> f64>(f: &F) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(CONVEXITY_SEED);
    let (lo, hi) = (CONVEXITY_LO.ln(), CONVEXITY_HI.ln());
    for _ in 0..CONVEXITY_SAMPLES {
        let a = rng.gen_range(lo..hi).exp();
        let b = rng.gen_range(lo..hi).exp();
        let (s, u) = if a < b { (a, b) } else { (b, a) };
        if s == u {
            continue;
        }
        let (fs, fu, fm) = (f(s), f(u), f(0.5 * (s + u)));
        let chord = 0.5 * (fs + fu);
        let slack = 1e-9 * (1.0 + chord.abs().max(fm.abs()));
        // a NaN anywhere fails too
        if !(fm <= chord + slack) {
            return Err(Error::FailsConvexitySample { s, u });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_limits(g: &Generator) {
        if let Some(f0) = g.f_at_zero().finite() {
            for &t in &[1e-8, 1e-10, 1e-12] {
                assert!((g.eval(t) - f0).abs() < 1e-3, "{} near 0 at {t}", g.name());
            }
        }
        if let Some(s) = g.slope_at_infinity().finite() {
            for &t in &[1e8, 1e12, 1e16] {
                assert!((g.eval(t) / t - s).abs() < 1e-3, "{} slope at {t}", g.name());
            }
        } else {
            // +inf slope: f(t)/t grows without bound
            assert!(g.eval(1e12) / 1e12 > g.eval(1e6) / 1e6);
        }
    }

    #[test]
    fn named_generators_anchor_and_limits() {
        let gens = vec![
            kl_generator(),
            tv_generator(),
            chi2_generator(),
            hellinger_generator(0.5).unwrap(),
            hellinger_generator(3.0).unwrap(),
        ];
        for g in &gens {
            assert_eq!(g.eval(1.0), 0.0, "{}", g.name());
            assert_limits(g);
            check_convexity_sample(&|t| g.eval(t)).unwrap();
        }
    }

    #[test]
    fn hellinger_two_is_chi2() {
        let h = hellinger_generator(2.0).unwrap();
        assert_eq!(h.eval(2.0), 3.0);
        assert_eq!(h.f_at_zero(), ExtendedReal::Finite(-1.0));
        assert_eq!(h.slope_at_infinity(), ExtendedReal::PosInf);
        assert_eq!(chi2_generator().eval(2.0), 3.0);
    }

    #[test]
    fn hellinger_limits() {
        let h = hellinger_generator(0.5).unwrap();
        assert_eq!(h.f_at_zero(), ExtendedReal::Finite(2.0));
        assert_eq!(h.slope_at_infinity(), ExtendedReal::ZERO);
        let h = hellinger_generator(3.0).unwrap();
        assert_eq!(h.f_at_zero(), ExtendedReal::Finite(-0.5));
    }

    #[test]
    fn invalid_alpha() {
        for a in [0.0, -1.0, 1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(hellinger_generator(a), Err(Error::InvalidAlpha(_))));
        }
    }

    #[test]
    fn tv_slope() {
        assert_eq!(tv_generator().slope_at_infinity(), ExtendedReal::Finite(0.5));
    }

    #[test]
    fn custom_generators() {
        let g = custom_generator(
            |t| (t - 1.0) * (t - 1.0),
            ExtendedReal::Finite(1.0),
            ExtendedReal::PosInf,
            "sq",
        )
        .unwrap();
        assert_eq!(g.eval(3.0), 4.0);

        let linear = custom_generator(
            |t| t - 1.0,
            ExtendedReal::Finite(-1.0),
            ExtendedReal::Finite(1.0),
            "lin",
        );
        assert!(linear.is_ok());

        let concave = custom_generator(|t| -t * t, ExtendedReal::ZERO, ExtendedReal::NegInf, "neg");
        assert!(matches!(concave, Err(Error::FailsConvexitySample { .. })));
        let concave = custom_generator(|t| 1.0 - t * t, ExtendedReal::Finite(1.0), ExtendedReal::ZERO, "neg");
        assert!(matches!(concave, Err(Error::FailsConvexitySample { .. })));

        let off_anchor = custom_generator(|t| t * t, ExtendedReal::ZERO, ExtendedReal::PosInf, "x");
        assert!(matches!(off_anchor, Err(Error::FailsAnchorCheck(_))));

        let bad_limit = custom_generator(|t| t - 1.0, ExtendedReal::NegInf, ExtendedReal::Finite(1.0), "x");
        assert!(matches!(bad_limit, Err(Error::InvalidLimit(_))));
    }
}
