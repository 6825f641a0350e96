//! Scenario configuration. Every field has a default, so a config file only
//! lists what it changes.

use std::collections::BTreeMap;
use std::ops::Range;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::channel::{PathLossParams, ShadowModel};
use crate::compute::{EnergyParams, LambdaMix, TaskRanges};
use crate::error::{Error, Result};
use crate::ledger::{AttackKind, AttackerProfile, ForgeRules};
use crate::mobility::OnArrival;
use crate::offload::{SolverKind, WhoConfig};
use crate::sim::node::LinkMode;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Simulated seconds.
    pub horizon: f64,
    /// Seconds per TTI.
    pub tti: f64,
    /// Seconds between position updates; a whole number of TTIs.
    pub mobility_step: f64,
    pub solver: SolverKind,
    pub area: AreaConfig,
    pub roads: RoadConfig,
    /// Optional vehicle trace replacing the road model.
    pub trace: Option<PathBuf>,
    pub vehicles: VehicleConfig,
    pub rsu: RsuConfig,
    pub uav: UavConfig,
    pub cloud: CloudConfig,
    pub channel: ChannelConfig,
    pub tasks: TaskConfig,
    pub offload: OffloadConfig,
    pub energy: EnergyParams,
    pub ledger: LedgerConfig,
    pub attacks: Vec<AttackerProfile>,
    pub output: OutputConfig,
    /// Variants run in order by `run_sweep` and the CLI; unset fields keep the
    /// base values.
    pub sweep: Vec<SweepPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AreaConfig {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoadConfig {
    /// Intersections per axis.
    pub grid_x: usize,
    pub grid_y: usize,
    /// m/s.
    pub speed_limit: f64,
    /// Desired speeds are drawn uniformly from this range and capped at the
    /// limit.
    pub speed_min: f64,
    pub speed_max: f64,
    pub on_arrival: OnArrival,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VehicleConfig {
    pub task: usize,
    pub serving: usize,
    /// Hz.
    pub cpu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RsuConfig {
    pub positions: Vec<[f64; 2]>,
    /// Hz; zero makes RSUs pure relays.
    pub cpu: f64,
    /// Meters.
    pub coverage: f64,
    /// Tokens each RSU stakes for validation.
    pub stake: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UavConfig {
    pub count: usize,
    /// Meters.
    pub altitude: f64,
    /// m/s.
    pub v_max: f64,
    pub cpu: f64,
    pub coverage: f64,
    pub start: UavStart,
}

/// Initial UAV placement.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UavStart {
    /// Uniform over the area.
    #[default]
    Random,
    /// At the k-means centers of the initial task-vehicle positions.
    Centers,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CloudConfig {
    pub enabled: bool,
    pub cpu: f64,
    /// Messages per second the RSU backhaul serves.
    pub service_rate: f64,
    /// Draw each backhaul delay instead of using the mean sojourn.
    pub stochastic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    /// GHz.
    pub fc: f64,
    pub sigma_db: f64,
    /// Meters.
    pub d_corr: f64,
    pub tx_power_dbm: f64,
}

impl ModeParams {
    pub fn path_loss(&self) -> PathLossParams<f64> {
        PathLossParams { a: self.a, b: self.b, c: self.c, d: self.d, fc: self.fc }
    }
}

impl Default for ModeParams {
    fn default() -> Self {
        let p = PathLossParams::<f64>::b1();
        Self { a: p.a, b: p.b, c: p.c, d: p.d, fc: p.fc, sigma_db: 8.0, d_corr: 50.0, tx_power_dbm: 26.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    /// Hz.
    pub bandwidth: f64,
    pub rb_count: usize,
    /// Noise power per resource block.
    pub noise_dbm: f64,
    pub shadow_model: ShadowModel,
    /// Fading quantile the planner provisions uploads for; zero plans for
    /// the ergodic rate.
    pub outage: f64,
    pub modes: BTreeMap<LinkMode, ModeParams>,
}

impl ChannelConfig {
    pub fn mode(&self, m: LinkMode) -> ModeParams {
        self.modes.get(&m).copied().unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TaskConfig {
    #[serde(flatten)]
    pub ranges: TaskRanges,
    pub lambda: LambdaMix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OffloadConfig {
    /// Window length in TTIs.
    pub ws: usize,
    /// Penalty per unplaced task in slot units; unset means ten times the
    /// horizon in TTIs.
    pub punish: Option<f64>,
    /// Longest planning horizon in TTIs.
    pub max_slots: usize,
    pub who: WhoConfig,
    /// Instances with more tasks than this skip the polish stage.
    pub polish_max_tasks: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LedgerConfig {
    pub p_audit: f64,
    /// Blacklist threshold on the reputation score.
    pub theta: f64,
    #[serde(flatten)]
    pub forge: ForgeRules,
    /// Share of each payment paid to the validator.
    pub fee_rate: f64,
    pub tokens_per_gigacycle: f64,
    /// Opening balance of every vehicle.
    pub initial_balance: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub dump_links: bool,
    pub plots: bool,
}

/// One variant of a sweep; unset fields keep the base value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepPoint {
    pub label: String,
    pub task_vehicles: Option<usize>,
    pub serving_vehicles: Option<usize>,
    pub uavs: Option<usize>,
    pub solver: Option<SolverKind>,
}

impl Default for AreaConfig {
    fn default() -> Self {
        Self { width: 2000.0, height: 2000.0 }
    }
}

impl Default for RoadConfig {
    fn default() -> Self {
        Self { grid_x: 5, grid_y: 5, speed_limit: 13.9, speed_min: 8.0, speed_max: 14.0, on_arrival: OnArrival::Redraw }
    }
}

impl Default for VehicleConfig {
    fn default() -> Self {
        Self { task: 10, serving: 10, cpu: 2.5e9 }
    }
}

impl Default for RsuConfig {
    fn default() -> Self {
        Self { positions: vec![[500.0, 500.0], [1500.0, 1500.0]], cpu: 0.0, coverage: 500.0, stake: 10.0 }
    }
}

impl Default for UavConfig {
    fn default() -> Self {
        Self { count: 4, altitude: 100.0, v_max: 25.0, cpu: 5e9, coverage: 300.0, start: UavStart::Random }
    }
}

impl Default for CloudConfig {
    fn default() -> Self {
        Self { enabled: true, cpu: 25e9, service_rate: 200.0, stochastic: false }
    }
}

impl Default for ChannelConfig {
    fn default() -> Self {
        let modes = LinkMode::ALL
            .iter()
            .filter(|m| **m != LinkMode::I2IWired)
            .map(|&m| {
                let p = if m == LinkMode::V2V {
                    ModeParams { sigma_db: 3.0, d_corr: 10.0, tx_power_dbm: 23.0, ..ModeParams::default() }
                } else {
                    ModeParams::default()
                };
                (m, p)
            })
            .collect();
        Self { bandwidth: 20e6, rb_count: 20, noise_dbm: -104.0, shadow_model: ShadowModel::GaussMarkov, outage: 0.0, modes }
    }
}

impl Default for TaskConfig {
    fn default() -> Self {
        Self { ranges: TaskRanges::default(), lambda: LambdaMix::default() }
    }
}

impl Default for OffloadConfig {
    fn default() -> Self {
        Self { ws: 10, punish: None, max_slots: 20, who: WhoConfig::default(), polish_max_tasks: 12 }
    }
}

impl Default for LedgerConfig {
    fn default() -> Self {
        Self {
            p_audit: 0.2,
            theta: 0.3,
            forge: ForgeRules::default(),
            fee_rate: 0.01,
            tokens_per_gigacycle: 1.0,
            initial_balance: 100.0,
        }
    }
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            horizon: 60.0,
            tti: 0.05,
            mobility_step: 0.5,
            solver: SolverKind::Who,
            area: AreaConfig::default(),
            roads: RoadConfig::default(),
            trace: None,
            vehicles: VehicleConfig::default(),
            rsu: RsuConfig::default(),
            uav: UavConfig::default(),
            cloud: CloudConfig::default(),
            channel: ChannelConfig::default(),
            tasks: TaskConfig::default(),
            offload: OffloadConfig::default(),
            energy: EnergyParams::default(),
            ledger: LedgerConfig::default(),
            attacks: Vec::new(),
            output: OutputConfig::default(),
            sweep: Vec::new(),
        }
    }
}

/// Node id ranges. The cloud is id 0, followed by RSUs, UAVs, serving
/// vehicles and task vehicles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub cloud: u64,
    pub rsus: Range<u64>,
    pub uavs: Range<u64>,
    pub serving: Range<u64>,
    pub task: Range<u64>,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn layout(&self) -> Layout {
        let r = self.rsu.positions.len() as u64;
        let u = self.uav.count as u64;
        let s = self.vehicles.serving as u64;
        let t = self.vehicles.task as u64;
        Layout { cloud: 0, rsus: 1..1 + r, uavs: 1 + r..1 + r + u, serving: 1 + r + u..1 + r + u + s, task: 1 + r + u + s..1 + r + u + s + t }
    }

    pub fn punish(&self) -> f64 {
        self.offload.punish.unwrap_or(10.0 * (self.horizon / self.tti).round().max(1.0))
    }

    /// Applies a sweep point on top of this config.
    pub fn with_point(&self, p: &SweepPoint) -> Self {
        let mut c = self.clone();
        if let Some(v) = p.task_vehicles {
            c.vehicles.task = v;
        }
        if let Some(v) = p.serving_vehicles {
            c.vehicles.serving = v;
        }
        if let Some(v) = p.uavs {
            c.uav.count = v;
        }
        if let Some(s) = p.solver {
            c.solver = s;
        }
        c.sweep.clear();
        c
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        crate::sim::SimClock::new(self.tti, self.mobility_step, self.horizon)?;
        if !(self.area.width > 0.0 && self.area.height > 0.0) {
            return bad("area must have positive extent");
        }
        if self.roads.grid_x < 2 || self.roads.grid_y < 2 {
            return bad("road grid needs at least two intersections per axis");
        }
        if !(self.roads.speed_limit > 0.0 && 0.0 <= self.roads.speed_min && self.roads.speed_min <= self.roads.speed_max) {
            return bad("vehicle speeds need 0 <= min <= max and a positive limit");
        }
        if !(self.vehicles.cpu > 0.0) {
            return bad("serving vehicles need a positive CPU frequency");
        }
        for p in &self.rsu.positions {
            if !(0.0..=self.area.width).contains(&p[0]) || !(0.0..=self.area.height).contains(&p[1]) {
                return bad("RSU positions must lie inside the area");
            }
        }
        if self.rsu.cpu < 0.0 || self.rsu.coverage < 0.0 || self.rsu.stake < 0.0 {
            return bad("RSU cpu, coverage and stake must be non-negative");
        }
        if self.uav.count > 0 && !(self.uav.cpu > 0.0 && self.uav.v_max >= 0.0 && self.uav.altitude >= 0.0) {
            return bad("UAVs need a positive CPU, non-negative speed and altitude");
        }
        if self.cloud.enabled && !(self.cloud.cpu > 0.0 && self.cloud.service_rate > 0.0) {
            return bad("the cloud needs positive CPU and backhaul service rate");
        }
        if !(self.channel.bandwidth > 0.0) || self.channel.rb_count == 0 {
            return bad("channel needs positive bandwidth and RB count");
        }
        if !(0.0..1.0).contains(&self.channel.outage) {
            return bad("channel outage must lie in [0, 1)");
        }
        for (m, p) in &self.channel.modes {
            p.path_loss().validate().map_err(|e| Error::Config(format!("{}: {e}", m.name())))?;
            if !(p.sigma_db >= 0.0 && p.d_corr > 0.0) {
                return Err(Error::Config(format!("{}: shadowing needs sigma >= 0, d_corr > 0", m.name())));
            }
        }
        self.tasks.ranges.validate()?;
        self.tasks.lambda.validate()?;
        if self.offload.ws == 0 || self.offload.max_slots == 0 {
            return bad("window and planning horizon must be at least one TTI");
        }
        if !(0.0..=1.0).contains(&self.ledger.p_audit) || !(0.0..=1.0).contains(&self.ledger.theta) {
            return bad("p_audit and theta must lie in [0, 1]");
        }
        if self.ledger.forge.max_txs == 0 || !(self.ledger.forge.interval > 0.0) || self.ledger.forge.block_reward < 0.0 {
            return bad("block rules need a positive interval and cap, and a non-negative reward");
        }
        if !(0.0..=1.0).contains(&self.ledger.fee_rate) || self.ledger.tokens_per_gigacycle < 0.0 {
            return bad("fee rate must lie in [0, 1] and prices be non-negative");
        }
        let layout = self.layout();
        for a in &self.attacks {
            a.validate()?;
            if !layout.serving.contains(&a.node) && !layout.uavs.contains(&a.node) && !layout.task.contains(&a.node) {
                return Err(Error::Config(format!("attacker {} is not a vehicle or UAV", a.node)));
            }
            if a.kind == AttackKind::IdentitySpoof && !a.victim.is_some_and(|v| layout.task.contains(&v)) {
                return Err(Error::Config(format!("spoofer {} needs a task-vehicle victim", a.node)));
            }
        }
        if self.energy.kappa < 0.0 || self.energy.p_hover < 0.0 {
            return bad("energy parameters must be non-negative");
        }
        Ok(())
    }
}
