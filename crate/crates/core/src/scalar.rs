//! Real scalar fields over which the algebraic layers are generic.
//!
//! `f64` is the working type. [`Exact`] (arbitrary-precision rationals) is the
//! integer-rational mode used for identities that must hold with zero
//! tolerance.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// Exact rational scalar.
pub type Exact = BigRational;

pub trait Scalar:
    Num + Clone + Neg<Output = Self> + PartialEq + PartialOrd + Debug + Send + Sync + 'static
{
    /// Exact conversion for finite doubles (every finite `f64` is a dyadic rational).
    fn from_f64(x: f64) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self;

    fn abs_val(&self) -> Self;

    /// Zero test used by canonicalization. Exact for rationals; relative to
    /// `scale` for doubles.
    fn is_negligible(&self, scale: f64) -> bool;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, scale: f64) -> bool {
        self.abs() <= 1e-12 * scale.max(1.0)
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite double")
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn is_negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
}
