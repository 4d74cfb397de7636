//! Scalar abstraction. All transform and root computations are generic over
//! [`Real`], instantiated as `f32` or `f64` (aliases at the crate root use `f64`).

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar used throughout the crate.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Serialize + DeserializeOwned + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub(crate) fn lit<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Mode index as a scalar.
#[inline]
pub(crate) fn from_u32<F: Real>(n: u32) -> F {
    F::from_u32(n).expect("u32 representable in scalar type")
}
