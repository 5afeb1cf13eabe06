use std::ops::Deref;

use crate::error::{invalid, Result};
use crate::scalar::Llr;

/// Default magnitude bound for LLRs. Values at or beyond it mean "certain".
pub const DEFAULT_SATURATION: f64 = 40.0;

/// LLR sequence `ln P(b=0)/P(b=1)` with every entry clamped to `[-B, B]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVec<T: Llr> {
    values: Vec<T>,
    bound: T,
}

impl<T: Llr> LlrVec<T> {
    /// Clamps `values` into `[-bound, bound]`. NaN entries are rejected.
    pub fn new(mut values: Vec<T>, bound: T) -> Result<Self> {
        if !(bound > T::zero()) || !bound.is_finite() {
            return invalid("saturation bound must be positive and finite");
        }
        for v in values.iter_mut() {
            if v.is_nan() {
                return invalid("LLR value is NaN");
            }
            *v = v.max(-bound).min(bound);
        }
        Ok(LlrVec { values, bound })
    }

    pub fn with_default_bound(values: Vec<T>) -> Result<Self> {
        Self::new(values, T::of(DEFAULT_SATURATION))
    }

    pub fn from_f64(values: &[f64], bound: f64) -> Result<Self> {
        Self::new(values.iter().map(|&v| T::of(v)).collect(), T::of(bound))
    }

    pub fn bound(&self) -> T {
        self.bound
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_inner(self) -> Vec<T> {
        self.values
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.as_f64()).collect()
    }
}

impl<T: Llr> Deref for LlrVec<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.values
    }
}
