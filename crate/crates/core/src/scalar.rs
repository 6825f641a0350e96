//! Numeric abstractions shared by the geometry, channel and solver code.
//!
//! Physical models are written against [`Scalar`] (any IEEE float), the
//! assignment solver against [`Cost`] (anything with exact `+`/`-` and an
//! order, including integers and rationals) and the simplex routine against
//! [`LpScalar`], which adds a comparison tolerance so the same tableau code
//! runs in `f64` and in exact `BigRational` arithmetic.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Floating point scalar used by the physical models: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + Debug + Default + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Cost entries for the assignment solver.
///
/// Only exact ring operations and an order are needed, so `i64`, `f64` and
/// `Ratio<i64>` all qualify.
pub trait Cost: Copy + PartialOrd + Num + Debug {}

impl<T: Copy + PartialOrd + Num + Debug> Cost for T {}

/// Field arithmetic for the simplex routine.
pub trait LpScalar: Clone + Debug + PartialOrd + Num + Neg<Output = Self> + Signed {
    /// Values with magnitude at or below this are treated as zero.
    fn tolerance() -> Self;
    fn from_f64_lossy(v: f64) -> Self;
    fn to_f64_lossy(&self) -> f64;

    fn is_pos(&self) -> bool {
        *self > Self::tolerance()
    }
    fn is_neg(&self) -> bool {
        *self < -Self::tolerance()
    }
    fn near_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

impl LpScalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn from_f64_lossy(v: f64) -> Self {
        v
    }
    fn to_f64_lossy(&self) -> f64 {
        *self
    }
}

impl LpScalar for BigRational {
    fn tolerance() -> Self {
        BigRational::zero()
    }
    fn from_f64_lossy(v: f64) -> Self {
        BigRational::from_float(v).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
    }
    fn to_f64_lossy(&self) -> f64 {
        let n = self.numer().to_f64().unwrap_or(f64::NAN);
        let d = self.denom().to_f64().unwrap_or(f64::NAN);
        if n.is_finite() && d.is_finite() {
            n / d
        } else {
            f64::NAN
        }
    }
}

/// Exact rational helper for tests and the exact LP route.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A 2-D point in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn at_altitude(&self, z: T) -> Point3<T> {
        Point3::new(self.x, self.y, z)
    }
}

/// A 3-D point in meters. Ground entities sit at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Point3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn ground(&self) -> Point2<T> {
        Point2::new(self.x, self.y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y, self.z - other.z)
    }

    pub fn norm(&self) -> T {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// Euclidean distance between two 3-D points.
pub fn distance_3d<T: Scalar>(a: &Point3<T>, b: &Point3<T>) -> T {
    a.sub(b).norm()
}

/// dBm to watts.
pub fn dbm_to_watts<T: Scalar>(dbm: T) -> T {
    T::lit(10.0).powf((dbm - T::lit(30.0)) / T::lit(10.0))
}

/// dB to a linear power ratio.
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// Linear power ratio to dB.
pub fn linear_to_db<T: Scalar>(lin: T) -> T {
    T::lit(10.0) * lin.log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distances() {
        let o = Point3::new(0.0, 0.0, 0.0);
        assert_eq!(distance_3d(&o, &o), 0.0);
        assert_eq!(distance_3d(&o, &Point3::new(3.0, 4.0, 0.0)), 5.0);
        assert_eq!(distance_3d(&o, &Point3::new(0.0, 0.0, 100.0)), 100.0);
        let of = Point3::new(0.0f32, 0.0, 0.0);
        assert_eq!(distance_3d(&of, &Point3::new(3.0f32, 4.0, 0.0)), 5.0f32);
    }

    #[test]
    fn dbm_conversion() {
        assert!((dbm_to_watts(23.0f64) - 0.199_526_231).abs() < 1e-8);
        assert!((dbm_to_watts(30.0f64) - 1.0).abs() < 1e-12);
        assert!((linear_to_db(db_to_linear(3.0103f64)) - 3.0103).abs() < 1e-12);
    }

    #[test]
    fn rational_tolerance_is_exact() {
        let tiny = rational(1, 1_000_000_000_000);
        assert!(tiny.is_pos());
        assert!(!(1e-12f64).is_pos());
    }
}
