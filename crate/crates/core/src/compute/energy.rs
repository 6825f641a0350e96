use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::dbm_to_watts;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnergyParams {
    /// Effective switched capacitance, J s^2 / cycle^3.
    pub kappa: f64,
    /// UAV hover power in watts.
    pub p_hover: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        Self { kappa: 1e-27, p_hover: 100.0 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyCounters {
    pub tx_joules: f64,
    pub comp_joules: f64,
    pub fly_joules: f64,
}

impl EnergyCounters {
    pub fn total(&self) -> f64 {
        self.tx_joules + self.comp_joules + self.fly_joules
    }
}

/// Per-node energy counters. All updates add non-negative amounts.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyMeter {
    pub params: EnergyParams,
    pub nodes: BTreeMap<u64, EnergyCounters>,
}

impl EnergyMeter {
    pub fn new(params: EnergyParams) -> Self {
        Self { params, nodes: BTreeMap::new() }
    }

    pub fn transmit(&mut self, node: u64, power_dbm: f64, seconds: f64) {
        self.nodes.entry(node).or_default().tx_joules += dbm_to_watts(power_dbm) * seconds.max(0.0);
    }

    pub fn compute(&mut self, node: u64, freq: f64, cycles: f64) {
        self.nodes.entry(node).or_default().comp_joules += self.params.kappa * freq * freq * cycles.max(0.0);
    }

    pub fn hover(&mut self, node: u64, seconds: f64) {
        self.nodes.entry(node).or_default().fly_joules += self.params.p_hover * seconds.max(0.0);
    }

    pub fn get(&self, node: u64) -> EnergyCounters {
        self.nodes.get(&node).copied().unwrap_or_default()
    }

    pub fn totals(&self) -> EnergyCounters {
        self.nodes.values().fold(EnergyCounters::default(), |a, c| EnergyCounters {
            tx_joules: a.tx_joules + c.tx_joules,
            comp_joules: a.comp_joules + c.comp_joules,
            fly_joules: a.fly_joules + c.fly_joules,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idle_node_is_unchanged() {
        let m = EnergyMeter::default();
        assert_eq!(m.get(1), EnergyCounters::default());
    }

    #[test]
    fn transmit_at_23_dbm() {
        let mut m = EnergyMeter::default();
        m.transmit(1, 23.0, 1.0);
        assert!((m.get(1).tx_joules - 0.1995).abs() < 1e-4);
    }

    #[test]
    fn compute_and_hover() {
        let mut m = EnergyMeter::default();
        m.compute(2, 5e9, 0.0);
        assert_eq!(m.get(2).comp_joules, 0.0);
        m.compute(2, 5e9, 2.5e8);
        assert!((m.get(2).comp_joules - 1e-27 * 25e18 * 2.5e8).abs() < 1e-12);
        m.hover(2, 0.05);
        assert!((m.get(2).fly_joules - 5.0).abs() < 1e-12);
        assert!((m.totals().total() - m.get(2).total()).abs() < 1e-12);
    }
}
