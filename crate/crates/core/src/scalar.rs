//! Scalar abstraction for the numeric core.
//!
//! Everything downstream of tokenization (embedding training, graph weights,
//! feature extraction, learners) is written against [`Scalar`] so the same
//! code runs in `f32` or `f64`. The crate root exports `f64` aliases for the
//! concrete pipeline types; file formats always use `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive};
use serde::{de::DeserializeOwned, Serialize};

pub trait Scalar:
    Float
    + FromPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Display
    + Debug
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` for constants and counts.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable in scalar type")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize count representable in scalar type")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Display
        + Debug
        + Default
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}

/// Mean of a slice; zero for an empty slice.
pub fn mean<S: Scalar>(values: &[S]) -> S {
    if values.is_empty() {
        return S::zero();
    }
    values.iter().copied().sum::<S>() / S::from_usize_lossy(values.len())
}

/// Population standard deviation; zero for empty or single-element slices.
pub fn std_dev<S: Scalar>(values: &[S]) -> S {
    if values.len() < 2 {
        return S::zero();
    }
    let m = mean(values);
    let var = values
        .iter()
        .map(|&v| {
            let d = v - m;
            d * d
        })
        .sum::<S>()
        / S::from_usize_lossy(values.len());
    var.sqrt()
}

/// Min of a slice; zero for an empty slice (empty-set statistics convention).
pub fn min_or_zero<S: Scalar>(values: &[S]) -> S {
    values.iter().copied().fold(None, |acc: Option<S>, v| {
        Some(match acc {
            None => v,
            Some(a) => a.min(v),
        })
    })
    .unwrap_or_else(S::zero)
}

/// Max of a slice; zero for an empty slice.
pub fn max_or_zero<S: Scalar>(values: &[S]) -> S {
    values.iter().copied().fold(None, |acc: Option<S>, v| {
        Some(match acc {
            None => v,
            Some(a) => a.max(v),
        })
    })
    .unwrap_or_else(S::zero)
}
