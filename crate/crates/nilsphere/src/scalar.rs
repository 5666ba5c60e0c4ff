//! Scalar abstraction: every numerical kernel in this crate is generic over
//! a floating-point type implementing [`Real`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum<Self> + Debug + Display + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum<Self>
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Shorthand for converting an `f64` constant into the working scalar type.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Shorthand for converting a `usize` into the working scalar type.
#[inline]
pub fn real_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize must convert into the scalar type")
}
