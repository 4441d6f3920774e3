//! Subadditive weights on the non-negative integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weight `w: N₀ → [1, ∞)` with `w(m + n) ≤ w(m) + w(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum WeightFunction {
    /// `w ≡ 1`.
    Constant,
    /// `w(k) = (1 + k)^r` with `0 < r ≤ 1`.
    Polynomial { r: f64 },
    /// `w(k) = 1 + k`.
    Linear,
}

impl WeightFunction {
    pub fn polynomial(r: f64) -> Result<Self> {
        let w = Self::Polynomial { r };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Polynomial { r } if !(r > 0.0 && r <= 1.0) => Err(Error::Domain(format!(
                "polynomial weight exponent must lie in (0, 1], got {r}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        match *self {
            Self::Constant => 1.0,
            Self::Polynomial { r } => (1.0 + k as f64).powf(r),
            Self::Linear => 1.0 + k as f64,
        }
    }

    /// `w(0), …, w(n_max)`.
    pub fn table(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max).map(|k| self.value(k)).collect()
    }
}

impl Default for WeightFunction {
    fn default() -> Self {
        Self::Constant
    }
}
