//! Scalar abstraction shared by every numeric module.
//!
//! The numerics are written once against [`Real`] and instantiated for `f64`
//! (the default everywhere in the crate root aliases) or `f32`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the target precision.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_int(x: i64) -> Self {
        Self::from_i64(x).expect("integer representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `exp(2πi·num/den)` with the fraction reduced before scaling.
#[inline]
pub(crate) fn unit_root<T: Real>(num: i64, den: u64) -> Complex<T> {
    let r = num.rem_euclid(den as i64);
    let theta = T::TAU() * T::from_int(r) / T::from_int(den as i64);
    Complex::from_polar(T::one(), theta)
}

/// `base^s` for a positive real base.
#[inline]
pub(crate) fn real_pow<T: Real>(base: T, s: Complex<T>) -> Complex<T> {
    let ln = base.ln();
    Complex::from_polar((s.re * ln).exp(), s.im * ln)
}

/// `(-1)^k` as a scalar.
#[inline]
pub(crate) fn sign<T: Real>(k: i64) -> T {
    if k.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}
