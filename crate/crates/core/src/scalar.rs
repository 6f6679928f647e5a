use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Signed, ToPrimitive};
use rustfft::FftNum;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the library is generic over.
///
/// Implemented for `f32` and `f64`. Tolerances quoted in the docs are for `f64`;
/// `f32` instances clamp them to a few ulps via [`tol`].
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Signed
    + FftNum
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap()
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Requested tolerance, floored at 16 machine epsilons of `T`.
pub fn tol<T: Real>(x: f64) -> T {
    let floor = T::epsilon() * T::lit(16.0);
    T::lit(x).max(floor)
}

pub fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}
