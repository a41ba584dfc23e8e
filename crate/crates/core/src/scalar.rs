//! Real scalar abstraction shared by every numeric routine in the crate.

use std::fmt;

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real field the operator algebra is generic over (`f32` or `f64`).
///
/// Tolerances throughout the crate are quoted for double precision; `tol`
/// rescales them for narrower types via `TOL_SCALE`.
pub trait Real:
    RealField + Copy + Default + FromPrimitive + ToPrimitive + fmt::Display + fmt::LowerExp + Send + Sync
{
    /// Multiplier applied to double-precision tolerances.
    const TOL_SCALE: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn tol(x: f64) -> Self {
        Self::lit(x * Self::TOL_SCALE)
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const TOL_SCALE: f64 = 1.0;
}

impl Real for f32 {
    const TOL_SCALE: f64 = 1e5;
}

/// Complex scalar over `R`.
pub type C<R> = Complex<R>;

pub(crate) fn c<R: Real>(re: f64, im: f64) -> C<R> {
    Complex::new(R::lit(re), R::lit(im))
}

pub(crate) fn cr<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}
