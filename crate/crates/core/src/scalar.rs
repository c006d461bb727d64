//! Scalar abstraction shared by every numerical kernel.
//!
//! The kernels are written once against [`Real`] and instantiated for `f64`
//! (the working precision of the CLI and acceptance suite) and `f32`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Sum + Debug + Display + LowerExp + Send + Sync + 'static {
    /// Euler–Mascheroni constant.
    fn euler_gamma() -> Self;
}

impl Real for f32 {
    fn euler_gamma() -> Self {
        0.577_215_7
    }
}

impl Real for f64 {
    fn euler_gamma() -> Self {
        0.577_215_664_901_532_9
    }
}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts an unsigned integer into the working scalar.
#[inline]
pub fn from_u64<T: Real>(n: u64) -> T {
    T::from_u64(n).expect("integer representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// `(e^x - 1)/x`, accurate near zero.
pub fn expm1_over_x<T: Real>(x: Complex<T>) -> Complex<T> {
    if x.norm() < lit(1e-2) {
        // Horner on sum_{k>=0} x^k/(k+1)!
        let mut acc = Complex::new(T::one(), T::zero());
        for k in (1..=12u64).rev() {
            acc = Complex::new(T::one(), T::zero()) + x * acc / from_u64::<T>(k + 1);
        }
        acc
    } else {
        (x.exp() - Complex::new(T::one(), T::zero())) / x
    }
}
