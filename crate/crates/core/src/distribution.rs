use crate::{Error, Result};

/// Inputs whose weights sum to within this distance of 1 are accepted and
/// renormalized.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// A point on the probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    /// Validates and renormalizes a weight vector.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let sum = check(&weights)?;
        let weights = if sum == 1.0 {
            weights
        } else {
            weights.into_iter().map(|w| w / sum).collect()
        };
        Ok(Self { weights })
    }

    /// Stores weights as given, after the same checks as [`Distribution::new`]
    /// but without renormalizing. For constructions whose exact atom values
    /// matter (extremal pairs).
    pub(crate) fn exact(weights: Vec<f64>) -> Result<Self> {
        check(&weights)?;
        Ok(Self { weights })
    }

    pub fn point_mass() -> Self {
        Self { weights: vec![1.0] }
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

/// Returns the weight sum when every weight is finite, nonnegative, and the
/// sum is within [`SUM_TOLERANCE`] of 1.
fn check(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(Error::EmptyVector);
    }
    for (index, &w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(Error::NonFiniteWeight { index });
        }
        if w < 0.0 {
            return Err(Error::NegativeWeight { index, value: w });
        }
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::SumOutOfTolerance { sum });
    }
    Ok(sum)
}

/// Alias for [`Distribution::new`].
pub fn validate_distribution(weights: Vec<f64>) -> Result<Distribution> {
    Distribution::new(weights)
}
