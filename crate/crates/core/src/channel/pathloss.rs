use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Shortest distance the path-loss fit is evaluated at, in meters.
pub const D_MIN: f64 = 1.0;

/// `PL = A log10(d) + B + C log10(fc / D)` with `d` in meters and `fc` in GHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PathLossParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub fc: T,
}

impl<T: Scalar> PathLossParams<T> {
    /// WINNER+ B1 fit at 2 GHz.
    pub fn b1() -> Self {
        Self { a: T::lit(22.7), b: T::lit(41.0), c: T::lit(20.0), d: T::lit(5.0), fc: T::lit(2.0) }
    }

    pub fn validate(&self) -> Result<()> {
        let z = T::zero();
        if self.a > z && self.c > z && self.d > z && self.fc > z && self.b.is_finite() {
            Ok(())
        } else {
            Err(Error::Config("path loss needs A, C, D, fc > 0".into()))
        }
    }
}

impl<T: Scalar> Default for PathLossParams<T> {
    fn default() -> Self {
        Self::b1()
    }
}

/// Distance raised to [`D_MIN`], and whether clamping happened.
pub fn clamp_distance<T: Scalar>(d: T) -> (T, bool) {
    let min = T::lit(D_MIN);
    if d < min {
        (min, true)
    } else {
        (d, false)
    }
}

/// Path loss in dB. Distances below [`D_MIN`] are clamped; callers that log
/// the clamp check [`clamp_distance`] first.
pub fn path_loss_db<T: Scalar>(d: T, p: &PathLossParams<T>) -> T {
    let (d, _) = clamp_distance(d);
    p.a * d.log10() + p.b + p.c * (p.fc / p.d).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_terms_vanish_at_reference() {
        let p = PathLossParams { fc: 5.0, ..PathLossParams::b1() };
        assert_eq!(path_loss_db(1.0, &p), 41.0);
    }

    #[test]
    fn b1_values() {
        let p = PathLossParams::<f64>::b1();
        // 22.7*2 + 41 + 20*log10(0.4)
        let oracle_100 = 45.4 + 41.0 + 20.0 * (0.4f64).log10();
        assert!((oracle_100 - 78.441).abs() < 1e-3);
        assert!((path_loss_db(100.0, &p) - 78.441).abs() < 1e-3);
        assert!((path_loss_db(1000.0, &p) - 101.141).abs() < 1e-3);
        assert!((path_loss_db(100.0f32, &PathLossParams::b1()) - 78.441).abs() < 1e-3);
    }

    #[test]
    fn short_distances_clamp() {
        let p = PathLossParams::<f64>::b1();
        assert_eq!(clamp_distance(0.2), (1.0, true));
        assert_eq!(path_loss_db(0.0, &p), path_loss_db(1.0, &p));
    }

    #[test]
    fn validation() {
        assert!(PathLossParams::<f64>::b1().validate().is_ok());
        assert!(PathLossParams { fc: 0.0, ..PathLossParams::<f64>::b1() }.validate().is_err());
    }
}
