use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-timescale clock: communication and computation advance per TTI,
/// positions per mobility step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimClock {
    pub tti_index: u64,
    pub tti_duration: f64,
    pub mobility_step: f64,
    pub horizon: f64,
}

impl SimClock {
    pub fn new(tti_duration: f64, mobility_step: f64, horizon: f64) -> Result<Self> {
        if !(tti_duration > 0.0) || !(mobility_step > 0.0) || !(horizon >= 0.0) {
            return Err(Error::Config("clock durations must be positive".into()));
        }
        let ratio = mobility_step / tti_duration;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio.round() < 1.0 {
            return Err(Error::Config(format!(
                "mobility step {mobility_step} s is not an integer multiple of the TTI {tti_duration} s"
            )));
        }
        Ok(Self { tti_index: 0, tti_duration, mobility_step, horizon })
    }

    pub fn ttis_per_mobility_step(&self) -> u64 {
        (self.mobility_step / self.tti_duration).round() as u64
    }

    /// Number of TTIs that fit in the horizon.
    pub fn total_ttis(&self) -> u64 {
        (self.horizon / self.tti_duration + 1e-9).floor() as u64
    }

    /// Start time of the current TTI.
    pub fn now(&self) -> f64 {
        self.tti_index as f64 * self.tti_duration
    }

    /// End time of the current TTI, when its progress becomes visible.
    pub fn tti_end(&self) -> f64 {
        (self.tti_index + 1) as f64 * self.tti_duration
    }

    pub fn is_mobility_tti(&self) -> bool {
        self.tti_index % self.ttis_per_mobility_step() == 0
    }

    pub fn finished(&self) -> bool {
        self.tti_index >= self.total_ttis()
    }

    pub fn advance(&mut self) {
        self.tti_index += 1;
    }
}
