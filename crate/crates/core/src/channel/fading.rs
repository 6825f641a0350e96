use rand::Rng;
use rand_distr::Exp1;

use crate::scalar::{db_to_linear, Scalar};

/// Rayleigh power fading: unit-mean exponential.
pub fn sample_fast_fading<T: Scalar>(rng: &mut impl Rng) -> T {
    T::lit(rng.sample::<f64, _>(Exp1))
}

/// `g = 10^(s/10) / 10^(pl/10) * h`.
pub fn channel_gain_linear<T: Scalar>(s_db: T, pl_db: T, h: T) -> T {
    db_to_linear(s_db - pl_db) * h
}

/// `e^x E1(x)` for `x > 0`: power series up to 1, continued fraction beyond.
fn scaled_exp_integral(x: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let (mut sum, mut term) = (0.0, 1.0);
        for k in 1..60 {
            term *= -x / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        return x.exp() * (-EULER - x.ln() + sum);
    }
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Mean spectral efficiency `E[log2(1 + snr h)]` under Rayleigh fading, in
/// bit/s/Hz.
pub fn ergodic_rate(snr: f64) -> f64 {
    if !(snr > 0.0) {
        return 0.0;
    }
    scaled_exp_integral(1.0 / snr) / std::f64::consts::LN_2
}

/// Spectral efficiency assumed by the planner: the `outage`-quantile rate
/// under Rayleigh fading, or the ergodic rate when `outage` is zero.
pub fn planning_rate(snr: f64, outage: f64) -> f64 {
    if outage > 0.0 {
        (1.0 + snr * -(1.0 - outage).ln()).log2()
    } else {
        ergodic_rate(snr)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gain_examples() {
        assert_eq!(channel_gain_linear(0.0, 0.0, 1.0), 1.0);
        assert!((channel_gain_linear(0.0f64, 10.0, 1.0) - 0.1).abs() < 1e-15);
        assert!((channel_gain_linear(3.0103f64, 10.0, 2.0) - 0.4).abs() < 1e-5);
    }

    #[test]
    fn unit_mean_and_variance() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1_000_000;
        let draws: Vec<f64> = (0..n).map(|_| sample_fast_fading(&mut rng)).collect();
        assert!(draws.iter().all(|h| *h >= 0.0));
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    proptest! {
        #[test]
        fn fading_scales_gain(s in -20.0f64..20.0, pl in 30.0f64..150.0, h in 0.0f64..10.0) {
            let a = channel_gain_linear(s, pl, 1.0) * h;
            let b = channel_gain_linear(s, pl, h);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
        }
    }

    #[test]
    fn ergodic_rate_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h: Vec<f64> = (0..400_000).map(|_| sample_fast_fading(&mut rng)).collect();
        for snr in [0.05, 0.5, 1.0, 3.0, 100.0, 1e4] {
            let mc = h.iter().map(|x| (1.0 + snr * x).log2()).sum::<f64>() / h.len() as f64;
            let exact = ergodic_rate(snr);
            assert!((exact - mc).abs() < 0.01 * mc.max(0.1), "snr {snr}: {exact} vs {mc}");
            assert!(exact < (1.0 + snr).log2());
        }
        assert_eq!(ergodic_rate(0.0), 0.0);
    }

    #[test]
    fn high_snr_penalty_is_euler_constant_in_bits() {
        let snr = 1e8f64;
        let gap = snr.log2() - ergodic_rate(snr);
        assert!((gap - 0.577_215_664_901_532_9 / std::f64::consts::LN_2).abs() < 1e-6);
    }
}
