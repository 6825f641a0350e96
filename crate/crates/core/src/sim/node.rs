use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Point3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    TaskVehicle,
    ServingVehicle,
    Uav,
    Rsu,
    CloudServer,
}

impl NodeKind {
    pub fn is_vehicle(self) -> bool {
        matches!(self, NodeKind::TaskVehicle | NodeKind::ServingVehicle)
    }

    pub fn is_zone_manager(self) -> bool {
        matches!(self, NodeKind::Uav | NodeKind::Rsu)
    }
}

/// Link modes, named transmitter-to-receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[allow(clippy::upper_case_acronyms)]
pub enum LinkMode {
    V2V,
    V2I,
    V2U,
    U2V,
    U2U,
    U2I,
    #[serde(rename = "I2I-wired")]
    I2IWired,
}

impl LinkMode {
    pub const ALL: [LinkMode; 7] =
        [LinkMode::V2V, LinkMode::V2I, LinkMode::V2U, LinkMode::U2V, LinkMode::U2U, LinkMode::U2I, LinkMode::I2IWired];

    /// Mode of a wireless link between two node kinds, `None` for wired or
    /// unsupported pairs.
    pub fn between(tx: NodeKind, rx: NodeKind) -> Option<LinkMode> {
        use NodeKind::*;
        match (tx, rx) {
            (a, b) if a.is_vehicle() && b.is_vehicle() => Some(LinkMode::V2V),
            (a, Rsu) if a.is_vehicle() => Some(LinkMode::V2I),
            (a, Uav) if a.is_vehicle() => Some(LinkMode::V2U),
            (Uav, b) if b.is_vehicle() => Some(LinkMode::U2V),
            (Uav, Uav) => Some(LinkMode::U2U),
            (Uav, Rsu) => Some(LinkMode::U2I),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkMode::V2V => "V2V",
            LinkMode::V2I => "V2I",
            LinkMode::V2U => "V2U",
            LinkMode::U2V => "U2V",
            LinkMode::U2U => "U2U",
            LinkMode::U2I => "U2I",
            LinkMode::I2IWired => "I2I-wired",
        }
    }
}

pub const VEHICLE_CPU: f64 = 2.5e9;
pub const UAV_CPU: f64 = 5e9;
pub const CLOUD_CPU: f64 = 25e9;
pub const UAV_ALTITUDE: f64 = 100.0;
pub const UAV_COVERAGE: f64 = 300.0;
pub const RSU_COVERAGE: f64 = 500.0;

/// Default transmit powers in dBm.
pub fn default_tx_power() -> BTreeMap<LinkMode, f64> {
    LinkMode::ALL
        .iter()
        .filter(|m| **m != LinkMode::I2IWired)
        .map(|&m| (m, if m == LinkMode::V2V { 23.0 } else { 26.0 }))
        .collect()
}

/// Any fog entity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: u64,
    pub kind: NodeKind,
    pub position: Point3<f64>,
    /// Zero for nodes that never accept tasks.
    pub cpu_freq: f64,
    pub tx_power: BTreeMap<LinkMode, f64>,
    pub coverage_radius: f64,
    pub stake: f64,
    pub reputation: f64,
    pub battery: Option<f64>,
}

impl Node {
    pub fn new(id: u64, kind: NodeKind, position: Point3<f64>) -> Self {
        let (cpu_freq, coverage_radius) = match kind {
            NodeKind::TaskVehicle => (0.0, 0.0),
            NodeKind::ServingVehicle => (VEHICLE_CPU, 0.0),
            NodeKind::Uav => (UAV_CPU, UAV_COVERAGE),
            NodeKind::Rsu => (0.0, RSU_COVERAGE),
            NodeKind::CloudServer => (CLOUD_CPU, 0.0),
        };
        let position = if kind.is_vehicle() { Point3::new(position.x, position.y, 0.0) } else { position };
        Self {
            id,
            kind,
            position,
            cpu_freq,
            tx_power: default_tx_power(),
            coverage_radius,
            stake: 0.0,
            reputation: 0.5,
            battery: None,
        }
    }

    pub fn accepts_tasks(&self) -> bool {
        self.cpu_freq > 0.0
    }

    pub fn tx_power_dbm(&self, mode: LinkMode) -> f64 {
        self.tx_power.get(&mode).copied().unwrap_or(f64::NEG_INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_parameter_table() {
        let v = Node::new(1, NodeKind::ServingVehicle, Point3::new(1.0, 2.0, 5.0));
        assert_eq!(v.position.z, 0.0);
        assert_eq!(v.cpu_freq, 2.5e9);
        assert_eq!(v.tx_power_dbm(LinkMode::V2V), 23.0);
        let u = Node::new(2, NodeKind::Uav, Point3::new(0.0, 0.0, UAV_ALTITUDE));
        assert_eq!((u.cpu_freq, u.coverage_radius, u.tx_power_dbm(LinkMode::U2V)), (5e9, 300.0, 26.0));
        assert_eq!(Node::new(3, NodeKind::CloudServer, Point3::default()).cpu_freq, 25e9);
        assert_eq!(Node::new(4, NodeKind::Rsu, Point3::default()).coverage_radius, 500.0);
        assert!(!Node::new(5, NodeKind::TaskVehicle, Point3::default()).accepts_tasks());
    }

    #[test]
    fn modes_between_kinds() {
        use NodeKind::*;
        assert_eq!(LinkMode::between(TaskVehicle, ServingVehicle), Some(LinkMode::V2V));
        assert_eq!(LinkMode::between(TaskVehicle, Uav), Some(LinkMode::V2U));
        assert_eq!(LinkMode::between(TaskVehicle, Rsu), Some(LinkMode::V2I));
        assert_eq!(LinkMode::between(Uav, Rsu), Some(LinkMode::U2I));
        assert_eq!(LinkMode::between(Rsu, CloudServer), None);
    }
}
