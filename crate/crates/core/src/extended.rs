//! Extended reals `[-∞, +∞]` with the restricted arithmetic needed for
//! divergence values and bounds.
//!
//! NaN is never stored. `(+∞) + (−∞)` and `0 · (±∞)` are errors; the single
//! place where `0 · (+∞) = 0` is allowed is [`ExtendedReal::support_weighted`],
//! used for zero-mass terms of a divergence sum.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps IEEE infinities onto the symbolic ones. Rejects NaN.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::NotANumber)
        } else if x == f64::INFINITY {
            Ok(ExtendedReal::PosInf)
        } else if x == f64::NEG_INFINITY {
            Ok(ExtendedReal::NegInf)
        } else {
            Ok(ExtendedReal::Finite(x))
        }
    }

    /// Lossless except that the symbols become IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn is_pos_inf(self) -> bool {
        matches!(self, ExtendedReal::PosInf)
    }

    pub fn checked_add(self, other: ExtendedReal) -> Result<ExtendedReal> {
        use ExtendedReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::UndefinedArithmetic("(+inf) + (-inf)")),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => ExtendedReal::from_f64(a + b),
        }
    }

    pub fn checked_sub(self, other: ExtendedReal) -> Result<ExtendedReal> {
        self.checked_add(-other)
    }

    /// Multiplication by a finite real. `0 · (±∞)` is an error here.
    pub fn scale(self, k: f64) -> Result<ExtendedReal> {
        if !k.is_finite() {
            return Err(Error::NotANumber);
        }
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::from_f64(k * x),
            _ if k == 0.0 => Err(Error::UndefinedArithmetic("0 * inf")),
            inf if k > 0.0 => Ok(inf),
            inf => Ok(-inf),
        }
    }

    /// `weight · self` for a nonnegative probability weight, with `0 · (±∞) = 0`.
    ///
    /// Only for terms of a divergence sum, where a zero weight is the limit
    /// `q → 0` of `q · f(p/q)`.
    pub fn support_weighted(self, weight: f64) -> Result<ExtendedReal> {
        if weight == 0.0 {
            Ok(ExtendedReal::ZERO)
        } else {
            self.scale(weight)
        }
    }

    /// Quotient by a finite nonzero real.
    pub fn checked_div(self, k: f64) -> Result<ExtendedReal> {
        if k == 0.0 || !k.is_finite() {
            return Err(Error::UndefinedArithmetic("division by zero or infinity"));
        }
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::from_f64(x / k),
            inf => inf.scale(k.signum()),
        }
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;

    fn neg(self) -> ExtendedReal {
        match self {
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(-x),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
        }
    }
}

impl Default for ExtendedReal {
    fn default() -> Self {
        ExtendedReal::ZERO
    }
}

impl From<f64> for ExtendedReal {
    /// Panics on NaN. Use [`ExtendedReal::from_f64`] for untrusted input.
    fn from(x: f64) -> Self {
        ExtendedReal::from_f64(x).expect("NaN cannot be an ExtendedReal")
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::PosInf => f.write_str("inf"),
            ExtendedReal::Finite(x) => fmt::Display::fmt(x, f),
        }
    }
}

impl FromStr for ExtendedReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "Inf" | "infinity" => Ok(ExtendedReal::PosInf),
            "-inf" | "-Inf" | "-infinity" => Ok(ExtendedReal::NegInf),
            other => {
                let x: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParams(format!("cannot parse {other:?} as a number")))?;
                ExtendedReal::from_f64(x)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtendedReal::*;

    #[test]
    fn nan_is_rejected() {
        assert_eq!(ExtendedReal::from_f64(f64::NAN), Err(Error::NotANumber));
        assert!("nan".parse::<ExtendedReal>().is_err());
    }

    #[test]
    fn addition_with_infinity() {
        assert_eq!(Finite(3.0).checked_add(PosInf), Ok(PosInf));
        assert_eq!(NegInf.checked_add(Finite(-1.0)), Ok(NegInf));
        assert!(PosInf.checked_add(NegInf).is_err());
        assert!(NegInf.checked_add(PosInf).is_err());
    }

    #[test]
    fn scaling_conventions() {
        assert_eq!(PosInf.scale(0.5), Ok(PosInf));
        assert_eq!(PosInf.scale(-2.0), Ok(NegInf));
        assert!(PosInf.scale(0.0).is_err());
        assert_eq!(PosInf.support_weighted(0.0), Ok(ExtendedReal::ZERO));
        assert_eq!(Finite(2.0).scale(0.25), Ok(Finite(0.5)));
    }

    #[test]
    fn overflow_becomes_symbolic() {
        assert_eq!(Finite(f64::MAX).scale(2.0), Ok(PosInf));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("inf".parse::<ExtendedReal>(), Ok(PosInf));
        assert_eq!("-inf".parse::<ExtendedReal>(), Ok(NegInf));
        assert_eq!("0.25".parse::<ExtendedReal>(), Ok(Finite(0.25)));
        assert_eq!(PosInf.to_string(), "inf");
        assert_eq!(NegInf.to_string(), "-inf");
        assert!(NegInf < Finite(-1e300));
        assert!(Finite(1e300) < PosInf);
    }
}
