//! Evaluation of `D_f(P‖Q) = Σ q_i f(p_i/q_i)` and the quantities the bounds
//! are parametrized by.

use crate::generator::check_alpha;
use crate::{Distribution, Error, ExtendedReal, Generator, Result};

fn check_lengths(p: &Distribution, q: &Distribution) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    Ok(())
}

fn check_absolute_continuity(p: &Distribution, q: &Distribution) -> Result<()> {
    check_lengths(p, q)?;
    match p
        .weights()
        .iter()
        .zip(q.weights())
        .position(|(&pi, &qi)| qi == 0.0 && pi > 0.0)
    {
        Some(index) => Err(Error::NotAbsolutelyContinuous { index }),
        None => Ok(()),
    }
}

/// `½ Σ |p_i - q_i|`.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<f64> {
    check_lengths(p, q)?;
    let l1: f64 = p.weights().iter().zip(q.weights()).map(|(a, b)| (a - b).abs()).sum();
    Ok((0.5 * l1).min(1.0))
}

/// Minimum and maximum of `p_i/q_i` over the support of `Q`.
///
/// The ratio has `Q`-mean 1, so `m <= 1 <= M`; rounding that would push an
/// extreme across 1 is clamped.
pub fn ratio_extremes(p: &Distribution, q: &Distribution) -> Result<(f64, ExtendedReal)> {
    check_absolute_continuity(p, q)?;
    let (lo, hi) = p
        .weights()
        .iter()
        .zip(q.weights())
        .filter(|(_, &qi)| qi > 0.0)
        .map(|(&pi, &qi)| pi / qi)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    Ok((lo.min(1.0), ExtendedReal::from_f64(hi.max(1.0))?))
}

/// `Σ_{q_i > 0} q_i f(p_i/q_i)`, where `p_i = 0` contributes `q_i f(0+)`.
pub fn f_divergence(gen: &Generator, p: &Distribution, q: &Distribution) -> Result<ExtendedReal> {
    check_absolute_continuity(p, q)?;
    let mut total = ExtendedReal::ZERO;
    for (&pi, &qi) in p.weights().iter().zip(q.weights()) {
        if qi == 0.0 {
            continue;
        }
        let term = gen.value_at(pi / qi)?.support_weighted(qi)?;
        total = total.checked_add(term)?;
    }
    Ok(total)
}

/// Upper bound on `E[φ(κ)]` for convex `φ` and `κ` supported on `[a, b]` with
/// the given mean: `ᾱ φ(a) + (1 - ᾱ) φ(b)`, `ᾱ = (b - mean)/(b - a)`.
pub fn chord_bound<F>(phi: F, a: f64, b: f64, mean: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Err(Error::DegenerateInterval(a));
    }
    if !(a < b) || !(a <= mean && mean <= b) {
        return Err(Error::MeanOutOfRange { a, b, mean });
    }
    let alpha = (b - mean) / (b - a);
    let lower = if alpha == 0.0 { 0.0 } else { alpha * phi(a) };
    let upper = if alpha == 1.0 { 0.0 } else { (1.0 - alpha) * phi(b) };
    Ok(lower + upper)
}

/// Rényi divergence of order `alpha` from the Hellinger divergence `h` of the
/// same order: `ln(1 + (α - 1) h)/(α - 1)`.
pub fn renyi_from_hellinger(alpha: f64, h: ExtendedReal) -> Result<ExtendedReal> {
    check_alpha(alpha)?;
    match h {
        ExtendedReal::PosInf if alpha > 1.0 => Ok(ExtendedReal::PosInf),
        ExtendedReal::PosInf => Err(Error::LogDomain(f64::NEG_INFINITY)),
        ExtendedReal::NegInf => Err(Error::LogDomain(f64::NEG_INFINITY)),
        ExtendedReal::Finite(h) => {
            let shift = (alpha - 1.0) * h;
            if !(1.0 + shift > 0.0) {
                return Err(Error::LogDomain(1.0 + shift));
            }
            ExtendedReal::from_f64(shift.ln_1p() / (alpha - 1.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{chi2_generator, kl_generator, tv_generator};

    fn d(w: &[f64]) -> Distribution {
        Distribution::new(w.to_vec()).unwrap()
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(total_variation(&d(&[0.5, 0.5]), &d(&[0.5, 0.5])).unwrap(), 0.0);
        let tv = total_variation(&d(&[0.25, 0.5, 0.25]), &d(&[0.5, 0.25, 0.25])).unwrap();
        assert!((tv - 0.25).abs() < 1e-15);
        assert_eq!(total_variation(&d(&[1.0, 0.0]), &d(&[0.0, 1.0])).unwrap(), 1.0);
        assert!(matches!(
            total_variation(&d(&[1.0]), &d(&[0.5, 0.5])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn ratio_extremes_examples() {
        let (m, big_m) = ratio_extremes(&d(&[0.25, 0.5, 0.25]), &d(&[0.5, 0.25, 0.25])).unwrap();
        assert_eq!((m, big_m), (0.5, ExtendedReal::Finite(2.0)));
        let p = d(&[0.2, 0.3, 0.5]);
        assert_eq!(ratio_extremes(&p, &p).unwrap(), (1.0, ExtendedReal::Finite(1.0)));
        let (m, big_m) = ratio_extremes(&d(&[0.0, 0.5, 0.5]), &d(&[0.25, 0.25, 0.5])).unwrap();
        assert_eq!((m, big_m), (0.0, ExtendedReal::Finite(2.0)));
        assert_eq!(
            ratio_extremes(&d(&[0.5, 0.5]), &d(&[1.0, 0.0])),
            Err(Error::NotAbsolutelyContinuous { index: 1 })
        );
    }

    #[test]
    fn f_divergence_examples() {
        let p = d(&[0.25, 0.5, 0.25]);
        let q = d(&[0.5, 0.25, 0.25]);
        assert_eq!(f_divergence(&kl_generator(), &q, &q).unwrap(), ExtendedReal::ZERO);
        let kl = f_divergence(&kl_generator(), &p, &q).unwrap().to_f64();
        // 0.5 * (0.5 ln 0.5) + 0.25 * (2 ln 2) + 0.25 * 0
        assert!((kl - 0.25 * 2f64.ln()).abs() < 1e-15);
        assert!((kl - 0.173_286_795_139_986_3).abs() < 1e-15);
        let tv = f_divergence(&tv_generator(), &p, &q).unwrap().to_f64();
        assert!((tv - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_mass_terms() {
        // p_i = 0 < q_i picks up f(0+); q_i = 0 = p_i is skipped
        let p = d(&[0.0, 0.5, 0.5, 0.0]);
        let q = d(&[0.25, 0.25, 0.5, 0.0]);
        let chi2 = f_divergence(&chi2_generator(), &p, &q).unwrap().to_f64();
        // 0.25 * (-1) + 0.25 * 3 + 0.5 * 0
        assert!((chi2 - 0.5).abs() < 1e-15);

        let reverse_kl = crate::generator::custom_generator(
            |t: f64| -t.ln(),
            ExtendedReal::PosInf,
            ExtendedReal::ZERO,
            "reverse-kl",
        )
        .unwrap();
        assert_eq!(f_divergence(&reverse_kl, &p, &q).unwrap(), ExtendedReal::PosInf);
        assert!(matches!(
            f_divergence(&reverse_kl, &q, &p),
            Err(Error::NotAbsolutelyContinuous { index: 0 })
        ));
    }

    #[test]
    fn chord_bound_examples() {
        let tv = |t: f64| 0.5 * (t - 1.0).abs();
        assert!((chord_bound(tv, 0.5, 2.0, 1.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(chord_bound(|t: f64| t * t, 0.0, 2.0, 1.0).unwrap(), 2.0);
        let kl = kl_generator();
        assert_eq!(chord_bound(|t| kl.eval(t), 1.0, 3.0, 1.0).unwrap(), 0.0);
        assert_eq!(chord_bound(tv, 1.0, 1.0, 1.0), Err(Error::DegenerateInterval(1.0)));
        assert!(matches!(
            chord_bound(tv, 0.5, 2.0, 2.5),
            Err(Error::MeanOutOfRange { .. })
        ));
    }

    #[test]
    fn renyi_transform_examples() {
        assert_eq!(
            renyi_from_hellinger(2.0, ExtendedReal::ZERO).unwrap(),
            ExtendedReal::ZERO
        );
        let r = renyi_from_hellinger(2.0, ExtendedReal::Finite(0.5)).unwrap().to_f64();
        assert!((r - 1.5f64.ln()).abs() < 1e-15);
        assert!((r - 0.405_465_108_108_164_4).abs() < 1e-15);
        assert_eq!(
            renyi_from_hellinger(2.0, ExtendedReal::PosInf).unwrap(),
            ExtendedReal::PosInf
        );
        assert!(matches!(
            renyi_from_hellinger(0.5, ExtendedReal::Finite(2.0)),
            Err(Error::LogDomain(_))
        ));
        assert!(matches!(
            renyi_from_hellinger(1.0, ExtendedReal::ZERO),
            Err(Error::InvalidAlpha(_))
        ));
    }
}
