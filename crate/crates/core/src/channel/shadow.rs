//! Distance-correlated log-normal shadowing.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{db_to_linear, linear_to_db, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShadowState<T> {
    pub s_db: T,
    /// Decorrelation distance in meters.
    pub d_corr: T,
    pub sigma_db: T,
}

/// How a shadowing sample evolves with displacement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShadowModel {
    /// Mixes the previous value and a fresh log-normal draw in the linear
    /// domain with weights `exp(-dd/dc)` and `sqrt(1 - exp(-2 dd/dc))`.
    Linear,
    /// The same weights applied to dB values: a Gauss-Markov process whose
    /// stationary law is `N(0, sigma)`.
    #[default]
    GaussMarkov,
}

impl<T: Scalar> ShadowState<T> {
    pub fn new(sigma_db: T, d_corr: T) -> Result<Self> {
        if !(sigma_db >= T::zero()) || !(d_corr > T::zero()) {
            return Err(Error::Config("shadowing needs sigma >= 0 and d_corr > 0".into()));
        }
        Ok(Self { s_db: T::zero(), d_corr, sigma_db })
    }

    /// Fresh draw from the stationary law.
    pub fn initialize(&mut self, rng: &mut impl Rng) {
        self.s_db = self.sigma_db * normal(rng);
    }

    fn weights(&self, delta_d: T) -> (T, T) {
        let r = (-delta_d.max(T::zero()) / self.d_corr).exp();
        (r, (T::one() - r * r).max(T::zero()).sqrt())
    }

    pub fn update(&mut self, model: ShadowModel, delta_d: T, rng: &mut impl Rng) -> T {
        self.s_db = match model {
            ShadowModel::Linear => update_shadowing(self, delta_d, rng),
            ShadowModel::GaussMarkov => update_shadowing_db(self, delta_d, rng),
        };
        self.s_db
    }
}

fn normal<T: Scalar>(rng: &mut impl Rng) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Linear-domain mixing; returns the new value in dB. A zero displacement
/// draws nothing and returns the state unchanged.
pub fn update_shadowing<T: Scalar>(state: &ShadowState<T>, delta_d: T, rng: &mut impl Rng) -> T {
    if delta_d <= T::zero() {
        return state.s_db;
    }
    let (w_old, w_new) = state.weights(delta_d);
    let fresh = state.sigma_db * normal(rng);
    linear_to_db(w_old * db_to_linear(state.s_db) + w_new * db_to_linear(fresh))
}

/// dB-domain Gauss-Markov step; returns the new value in dB.
pub fn update_shadowing_db<T: Scalar>(state: &ShadowState<T>, delta_d: T, rng: &mut impl Rng) -> T {
    if delta_d <= T::zero() {
        return state.s_db;
    }
    let (w_old, w_new) = state.weights(delta_d);
    w_old * state.s_db + w_new * state.sigma_db * normal::<T>(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn stats(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        (mean, (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt())
    }

    fn corr(a: &[f64], b: &[f64]) -> f64 {
        let (ma, sa) = stats(a);
        let (mb, sb) = stats(b);
        a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (a.len() as f64 * sa * sb)
    }

    #[test]
    fn zero_displacement_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = ShadowState { s_db: 4.2, d_corr: 50.0, sigma_db: 8.0 };
        assert_eq!(update_shadowing(&s, 0.0, &mut rng), 4.2);
        assert_eq!(update_shadowing_db(&s, 0.0, &mut rng), 4.2);
    }

    #[test]
    fn zero_sigma_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (s_db, dd) in [(3.0, 10.0), (-5.0, 50.0), (0.0, 1.0)] {
            let st = ShadowState { s_db, d_corr: 50.0, sigma_db: 0.0 };
            let r: f64 = (-dd / 50.0f64).exp();
            let expected = 10.0 * (r * 10f64.powf(s_db / 10.0) + (1.0 - (-2.0 * dd / 50.0f64).exp()).sqrt()).log10();
            assert!((update_shadowing(&st, dd, &mut rng) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn far_displacement_decorrelates() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        for model in [ShadowModel::Linear, ShadowModel::GaussMarkov] {
            let (mut before, mut after) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for _ in 0..n {
                let mut s = ShadowState::new(8.0, 50.0).unwrap();
                s.initialize(&mut rng);
                before.push(s.s_db);
                after.push(s.update(model, 20.0 * 50.0, &mut rng));
            }
            let (mean, sd) = stats(&after);
            assert!(corr(&before, &after).abs() < 0.05, "{model:?}");
            assert!(mean.abs() < 0.1 && (sd - 8.0).abs() < 0.1, "{model:?}: {mean} {sd}");
        }
    }

    #[test]
    fn gauss_markov_preserves_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut s = ShadowState::new(8.0, 50.0).unwrap();
        s.initialize(&mut rng);
        let v: Vec<f64> = (0..100_000).map(|_| s.update(ShadowModel::GaussMarkov, 5.0, &mut rng)).collect();
        let (_, sd) = stats(&v);
        assert!((sd - 8.0).abs() < 0.05 * 8.0, "std {sd}");
    }

    #[test]
    fn linear_mixing_shrinks_spread_at_short_steps() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut s = ShadowState::new(8.0, 50.0).unwrap();
        let v: Vec<f64> = (0..100_000).map(|_| s.update(ShadowModel::Linear, 5.0, &mut rng)).collect();
        let (mean, sd) = stats(&v[1000..]);
        assert!(sd < 4.0 && mean > 6.0, "mean {mean} std {sd}");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ShadowState::new(-1.0, 10.0).is_err());
        assert!(ShadowState::new(3.0, 0.0).is_err());
    }
}
