//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating point scalar: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + FromStr
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }

    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Numerical tolerances used by the oracles and classifiers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Tolerances<T> {
    /// Absolute tolerance on unit-scale quantities (support functionals, pairings).
    pub norm: T,
    /// Relative tie band for norm attainment sets.
    pub tie: T,
    /// Relative tolerance of the minimization oracle.
    pub rel: T,
    /// Coordinate tolerance for canonical-form matching.
    pub form: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        // Default f64 bands; f32 gets bands widened to a multiple of its epsilon.
        let floor = |v: f64, k: f64| {
            let eps = T::epsilon().as_f64();
            T::lit(v.max(k * eps))
        };
        Self {
            norm: floor(1e-10, 1e3),
            tie: floor(1e-9, 1e3),
            rel: floor(1e-9, 1e2),
            form: floor(1e-8, 1e3),
        }
    }
}

pub(crate) fn sign<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        T::one()
    } else if v < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}
