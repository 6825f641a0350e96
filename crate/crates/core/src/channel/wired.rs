//! RSU to server backhaul as an M/M/1 queue.

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::error::{Error, Result};

/// Expected sojourn time `1 / (mu - lambda)` in seconds.
pub fn wired_delay(arrival_rate: f64, service_rate: f64) -> Result<f64> {
    if !(arrival_rate >= 0.0) || !(service_rate > arrival_rate) {
        return Err(Error::UnstableQueue { arrival: arrival_rate, service: service_rate });
    }
    Ok(1.0 / (service_rate - arrival_rate))
}

/// One sojourn time drawn from the stationary exponential law.
pub fn sample_wired_delay(arrival_rate: f64, service_rate: f64, rng: &mut impl Rng) -> Result<f64> {
    let mean = wired_delay(arrival_rate, service_rate)?;
    let exp = Exp::new(1.0 / mean).map_err(|e| Error::Config(e.to_string()))?;
    Ok(exp.sample(rng))
}
