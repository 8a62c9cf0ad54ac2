//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! Everything is written against [`Real`] so that `f64` (the default, and the
//! only precision the test tolerances are pinned for) and `f32` share one
//! implementation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;

pub use num_complex::Complex;

/// Floating point type usable by the QSPE routines.
pub trait Real: Float + FloatConst + FromPrimitive + FftNum + Debug + Display + Send + Sync {
    /// Converts an `f64` literal. Total for the finite values used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Converts an index or count.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite value")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `e^{i a}`.
#[inline]
pub fn cis<T: Real>(a: T) -> Complex<T> {
    Complex::new(a.cos(), a.sin())
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_pi<T: Real>(a: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut r = a - two_pi * (a / two_pi).round();
    if r <= -T::PI() {
        r = r + two_pi;
    } else if r > T::PI() {
        r = r - two_pi;
    }
    r
}

/// Wraps an angle into `(-π/2, π/2]`.
pub fn wrap_half_pi<T: Real>(a: T) -> T {
    let pi = T::PI();
    let half = T::FRAC_PI_2();
    let mut r = a - pi * (a / pi).round();
    if r <= -half {
        r = r + pi;
    } else if r > half {
        r = r - pi;
    }
    r
}

/// Neumaier compensated sum, so reductions do not depend on summation order
/// beyond the last couple of ulps.
pub fn compensated_sum<T: Real, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut comp = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp = comp + ((sum - t) + v);
        } else {
            comp = comp + ((v - t) + sum);
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping_ranges() {
        use std::f64::consts::PI;
        assert_eq!(wrap_pi(PI), PI);
        assert!((wrap_pi(-PI) - PI).abs() < 1e-15);
        assert!((wrap_pi(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
        assert!((wrap_half_pi(PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((wrap_half_pi(-PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((wrap_half_pi(0.3 + PI) - 0.3).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(v), 2.0);
    }
}
