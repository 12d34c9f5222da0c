//! Scalar abstractions shared by the analytic kernels.
//!
//! The closed-form layer (time functions, Duan variances, the qubit density
//! matrix) is written against [`Real`], so it runs in `f32` or `f64`. Code that
//! needs eigen-decompositions additionally requires nalgebra's `RealField`,
//! bundled here as [`Field`]. The Fock-space oracle and the SI designer are
//! fixed to `f64`.

use std::fmt::Debug;

use num_traits::{Float, FloatConst};

/// Floating-point scalar usable by the analytic kernels.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + Debug + Send + Sync + 'static {}

/// A [`Real`] that nalgebra can also decompose.
pub trait Field: Real + nalgebra::RealField {}

impl<T> Field for T where T: Real + nalgebra::RealField {}

/// Converts an `f64` literal into `S`.
#[inline]
pub fn lit<S: Real>(x: f64) -> S {
    <S as num_traits::NumCast>::from(x).expect("f64 literal representable in scalar type")
}

/// Lossy conversion of any scalar to `f64`.
#[inline]
pub fn to_f64<S: Real>(x: S) -> f64 {
    <S as num_traits::ToPrimitive>::to_f64(&x).unwrap_or(f64::NAN)
}
