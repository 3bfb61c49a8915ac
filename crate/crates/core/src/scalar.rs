//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the geometry is evaluated in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Coordinate tolerance used when comparing group elements and points.
    fn coord_tol() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn of_i64(x: i64) -> Self {
        Self::from_i64(x).expect("integer representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Step used for central finite differences.
    fn fd_step() -> Self {
        Self::epsilon().cbrt()
    }
}

impl Scalar for f32 {
    fn coord_tol() -> f32 {
        1e-4
    }
}

impl Scalar for f64 {
    fn coord_tol() -> f64 {
        1e-9
    }
}

/// `x mod m` into `[0, m)`.
#[inline]
pub fn wrap<T: Scalar>(x: T, m: T) -> T {
    let r = x - (x / m).floor() * m;
    if r >= m || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

/// Representative of `x mod m` in `(-m/2, m/2]`.
#[inline]
pub fn wrap_centered<T: Scalar>(x: T, m: T) -> T {
    let half = m / T::lit(2.0);
    let r = wrap(x, m);
    if r > half {
        r - m
    } else {
        r
    }
}

/// Distance between `a` and `b` on the circle of circumference `m`.
#[inline]
pub fn circular_distance<T: Scalar>(a: T, b: T, m: T) -> T {
    wrap_centered(a - b, m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_lands_in_range() {
        assert_eq!(wrap(10.5_f64, 10.0), 0.5);
        assert_eq!(wrap(-0.5_f64, 10.0), 9.5);
        assert_eq!(wrap(-1e-18_f64, 10.0), 0.0);
        assert!((wrap_centered(9.0_f64, 10.0) + 1.0).abs() < 1e-12);
        assert!((circular_distance(0.1_f64, 9.9, 10.0) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn f32_literals() {
        assert_eq!(f32::lit(0.5), 0.5_f32);
        assert_eq!(f32::of_i64(-3), -3.0_f32);
    }
}
