//! The default `(m, M, δ)` comparison grid: every pair of extremes from
//! [`DEFAULT_M_LOW`] × [`DEFAULT_M_HIGH`], each at three fractions of its
//! total-variation cap.

use crate::bounds::tv_cap;
use crate::{ClassParams, ExtendedReal, Result};

pub const DEFAULT_M_LOW: [f64; 5] = [0.0, 0.1, 0.25, 0.5, 0.9];
pub const DEFAULT_M_HIGH: [f64; 5] = [1.1, 2.0, 5.0, 10.0, 100.0];
pub const DEFAULT_CAP_FRACTIONS: [f64; 3] = [0.1, 0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub params: ClassParams,
    /// `δ / tv_cap(m, M)`.
    pub cap_fraction: f64,
}

/// Grid over the given extremes and cap fractions, in row-major order
/// `(m, M, fraction)`.
pub fn grid(lows: &[f64], highs: &[f64], fractions: &[f64]) -> Result<Vec<GridPoint>> {
    let mut points = Vec::with_capacity(lows.len() * highs.len() * fractions.len());
    for &m in lows {
        for &big_m in highs {
            let big_m = ExtendedReal::from_f64(big_m)?;
            let cap = tv_cap(m, big_m)?;
            for &cap_fraction in fractions {
                let delta = if cap_fraction == 1.0 { cap } else { cap_fraction * cap };
                points.push(GridPoint {
                    params: ClassParams::new(delta, m, big_m)?,
                    cap_fraction,
                });
            }
        }
    }
    Ok(points)
}

pub fn default_grid() -> Vec<GridPoint> {
    grid(&DEFAULT_M_LOW, &DEFAULT_M_HIGH, &DEFAULT_CAP_FRACTIONS).expect("default grid is valid")
}
