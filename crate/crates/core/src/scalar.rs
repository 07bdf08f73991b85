//! Scalar abstractions.
//!
//! Floating-point code is written against [`Real`] so it runs in `f32` or
//! `f64`. Exact coefficient algebra (the polyharmonic boundary recursion) is
//! written against [`ExactField`], which is also implemented for big
//! rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Floating-point scalar used by every numeric routine in the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot
    /// represent finite `f64` values, which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn int(k: i64) -> Self {
        Self::from_i64(k).expect("integer representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A field in which the boundary-coefficient recursion can be carried out.
pub trait ExactField: Clone + PartialEq + Num + Debug {
    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(k: i64) -> Self {
        Self::from_ratio(k, 1)
    }

    fn to_f64_lossy(&self) -> f64;
}

impl ExactField for f64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl ExactField for f32 {
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f32 / den as f32
    }

    fn to_f64_lossy(&self) -> f64 {
        *self as f64
    }
}

impl ExactField for Rational64 {
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl ExactField for BigRational {
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals_round_trip() {
        assert_eq!(f32::lit(0.5), 0.5f32);
        assert_eq!(f64::int(-3), -3.0);
        assert_eq!(BigRational::from_ratio(6, 4), BigRational::from_ratio(3, 2));
        assert_eq!(Rational64::from_int(7).to_f64_lossy(), 7.0);
    }
}
