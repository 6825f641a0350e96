//! Per-link state, resource-block occupancy, SINR and capacity.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::shadow::ShadowState;
use crate::error::{Error, Result};
use crate::scalar::{dbm_to_watts, Scalar};
use crate::sim::node::LinkMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkState {
    pub tx: u64,
    pub rx: u64,
    pub mode: LinkMode,
    pub tx_power_dbm: f64,
    pub path_loss_db: f64,
    pub shadow: ShadowState<f64>,
    pub fast_fading_linear: f64,
    /// Linear channel gain, shadowing and fading included.
    pub gain: f64,
    pub rb_set: Vec<usize>,
    pub sinr_linear: f64,
    /// Bits per second.
    pub capacity: f64,
}

impl LinkState {
    /// Received signal power in watts.
    pub fn rx_power(&self) -> f64 {
        dbm_to_watts(self.tx_power_dbm) * self.gain
    }

    pub fn active(&self) -> bool {
        !self.rb_set.is_empty()
    }
}

/// Which links occupy each resource block during one TTI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RbPlan {
    /// Hz.
    pub total_bandwidth: f64,
    pub rb_count: usize,
    /// RB index to the indices (into the link table) of its occupants.
    pub occupancy: BTreeMap<usize, Vec<usize>>,
}

impl RbPlan {
    pub fn new(total_bandwidth: f64, rb_count: usize) -> Result<Self> {
        if !(total_bandwidth > 0.0) || rb_count == 0 {
            return Err(Error::Config("band needs positive bandwidth and at least one RB".into()));
        }
        Ok(Self { total_bandwidth, rb_count, occupancy: BTreeMap::new() })
    }

    pub fn rb_bandwidth(&self) -> f64 {
        self.total_bandwidth / self.rb_count as f64
    }

    /// Rebuilds the occupancy map from the links' RB sets.
    pub fn rebuild(&mut self, links: &[LinkState]) -> Result<()> {
        self.occupancy.clear();
        for (i, l) in links.iter().enumerate() {
            for &rb in &l.rb_set {
                if rb >= self.rb_count {
                    return Err(Error::Config(format!("link {i} uses RB {rb} of {}", self.rb_count)));
                }
                self.occupancy.entry(rb).or_default().push(i);
            }
        }
        Ok(())
    }

    /// True when the occupancy map is exactly the inverse of the RB sets.
    pub fn consistent(&self, links: &[LinkState]) -> bool {
        let mut copy = self.clone();
        copy.rebuild(links).is_ok() && copy.occupancy == self.occupancy
    }
}

/// Per-RB SINR of link `idx`. `interference(i, idx)` gives the power (watts)
/// that link `i`'s transmitter delivers at link `idx`'s receiver.
pub fn sinr_per_rb(
    idx: usize,
    plan: &RbPlan,
    links: &[LinkState],
    noise_dbm: f64,
    interference: impl Fn(usize, usize) -> f64,
) -> Vec<f64> {
    let noise = dbm_to_watts(noise_dbm);
    let signal = links[idx].rx_power();
    links[idx]
        .rb_set
        .iter()
        .map(|rb| {
            let occupants = plan.occupancy.get(rb).map_or(&[][..], |v| v.as_slice());
            let i: f64 = occupants.iter().filter(|&&o| o != idx).map(|&o| interference(o, idx)).sum();
            signal / (noise + i)
        })
        .collect()
}

/// Mean of the per-RB SINR values; `None` for a link without RBs.
pub fn sinr(
    idx: usize,
    plan: &RbPlan,
    links: &[LinkState],
    noise_dbm: f64,
    interference: impl Fn(usize, usize) -> f64,
) -> Option<f64> {
    let v = sinr_per_rb(idx, plan, links, noise_dbm, interference);
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Interference model where each co-channel link contributes its own received
/// power.
pub fn own_power(links: &[LinkState]) -> impl Fn(usize, usize) -> f64 + '_ {
    move |i, _| links[i].rx_power()
}

/// `x * B * log2(1 + gamma)`.
pub fn shannon_capacity<T: Scalar>(bandwidth: T, gamma: T, x: bool) -> T {
    if x {
        bandwidth * (T::one() + gamma).log2()
    } else {
        T::zero()
    }
}

/// Sum of the per-RB Shannon rates.
pub fn capacity(per_rb_sinr: &[f64], rb_bandwidth: f64) -> f64 {
    per_rb_sinr.iter().map(|&g| shannon_capacity(rb_bandwidth, g, true)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NOISE_DBM: f64 = -104.0;

    fn link(rx_power: f64, rbs: &[usize]) -> LinkState {
        // 30 dBm is one watt, so the gain equals the received power.
        LinkState {
            tx: 0,
            rx: 1,
            mode: LinkMode::V2V,
            tx_power_dbm: 30.0,
            path_loss_db: 0.0,
            shadow: ShadowState { s_db: 0.0, d_corr: 10.0, sigma_db: 3.0 },
            fast_fading_linear: 1.0,
            gain: rx_power,
            rb_set: rbs.to_vec(),
            sinr_linear: 0.0,
            capacity: 0.0,
        }
    }

    fn plan(links: &[LinkState]) -> RbPlan {
        let mut p = RbPlan::new(20e6, 20).unwrap();
        p.rebuild(links).unwrap();
        p
    }

    #[test]
    fn sole_occupant_is_snr() {
        let n0 = dbm_to_watts(NOISE_DBM);
        let links = vec![link(n0, &[3])];
        let g = sinr(0, &plan(&links), &links, NOISE_DBM, own_power(&links)).unwrap();
        assert_eq!(g, links[0].rx_power() / n0);
        assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_pair() {
        let n0 = dbm_to_watts(NOISE_DBM);
        let links = vec![link(n0, &[0]), link(n0, &[0])];
        let p = plan(&links);
        for i in 0..2 {
            assert!((sinr(i, &p, &links, NOISE_DBM, own_power(&links)).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn silent_interferer() {
        let n0 = dbm_to_watts(NOISE_DBM);
        let links = vec![link(n0, &[0]), link(0.0, &[0])];
        let alone = vec![link(n0, &[0])];
        let a = sinr(0, &plan(&links), &links, NOISE_DBM, own_power(&links));
        let b = sinr(0, &plan(&alone), &alone, NOISE_DBM, own_power(&alone));
        assert_eq!(a, b);
    }

    #[test]
    fn empty_rb_set() {
        let links = vec![link(1.0, &[])];
        assert_eq!(sinr(0, &plan(&links), &links, NOISE_DBM, own_power(&links)), None);
        assert_eq!(capacity(&[], 1e6), 0.0);
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(shannon_capacity(1e6, 1.0, true), 1e6);
        assert_eq!(shannon_capacity(1e6, 3.0, true), 2e6);
        assert_eq!(shannon_capacity(1e6, 3.0, false), 0.0);
        assert_eq!(capacity(&[1.0, 3.0], 1e6), 3e6);
    }

    #[test]
    fn occupancy_consistency() {
        let links = vec![link(1.0, &[0, 1]), link(1.0, &[1])];
        let p = plan(&links);
        assert_eq!(p.occupancy[&1], vec![0, 1]);
        assert!(p.consistent(&links));
        let mut moved = links.clone();
        moved[1].rb_set = vec![2];
        assert!(!p.consistent(&moved));
        let mut bad = RbPlan::new(20e6, 2).unwrap();
        assert!(bad.rebuild(&[link(1.0, &[5])]).is_err());
        assert_eq!(p.rb_bandwidth(), 1e6);
    }

    proptest! {
        #[test]
        fn capacity_monotone(b in 1e3f64..1e8, g1 in 0.0f64..1e4, g2 in 0.0f64..1e4, s in 1.0f64..4.0) {
            let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
            prop_assert!(shannon_capacity(b, lo, true) <= shannon_capacity(b, hi, true));
            prop_assert!(shannon_capacity(b, lo, true) <= shannon_capacity(b * s, lo, true));
        }

        #[test]
        fn removing_interferer_never_hurts(
            powers in proptest::collection::vec(0.0f64..1e-9, 2..6),
            rbs in proptest::collection::vec(proptest::collection::btree_set(0usize..4, 1..3), 6),
            drop in 0usize..6,
        ) {
            let links: Vec<LinkState> = powers.iter().zip(&rbs).map(|(&p, r)| link(p, &r.iter().copied().collect::<Vec<_>>())).collect();
            let drop = drop % links.len();
            let before = plan(&links);
            let mut fewer = links.clone();
            fewer[drop].rb_set.clear();
            let after = plan(&fewer);
            for i in (0..links.len()).filter(|&i| i != drop) {
                let a = sinr_per_rb(i, &before, &links, NOISE_DBM, own_power(&links));
                let b = sinr_per_rb(i, &after, &fewer, NOISE_DBM, own_power(&fewer));
                for (x, y) in a.iter().zip(&b) {
                    prop_assert!(y >= x);
                }
            }
        }
    }
}
