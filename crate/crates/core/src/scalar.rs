//! Scalar abstractions shared by the exact and floating-point code paths.
//!
//! Polynomial algebra is written once over [`Scalar`], which covers the
//! arbitrary-precision rationals used as ground truth as well as `f32`/`f64`.
//! Numerical routines (quadrature, root polishing) additionally need
//! [`FloatScalar`].

use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Float, FromPrimitive, Num, NumRef};

/// Field-like scalar usable as a polynomial coefficient.
///
/// Division is assumed to be exact (a field), which holds for rationals and,
/// up to rounding, for floats.
pub trait Scalar:
    Num + NumRef + Clone + Debug + PartialEq + Neg<Output = Self> + FromPrimitive + Send + Sync
{
}

impl<T> Scalar for T where
    T: Num + NumRef + Clone + Debug + PartialEq + Neg<Output = Self> + FromPrimitive + Send + Sync
{
}

/// Floating point: `f32` or `f64`.
pub trait FloatScalar: Scalar + Float + Copy {
    /// Lossy conversion from `f64` literals.
    fn lit(v: f64) -> Self {
        <Self as num_traits::NumCast>::from(v).expect("f64 literal representable")
    }

    /// Lossy conversion from a count or index.
    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }
}

impl FloatScalar for f32 {}
impl FloatScalar for f64 {}
