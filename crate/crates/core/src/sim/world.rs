//! World state and the per-TTI phase loop.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::clock::SimClock;
use super::event::{Event, EventKind, FailReason};
use super::node::{LinkMode, Node, NodeKind};
use super::plan::ActiveTx;
use super::rng::{substream, ATTACKS, CHANNEL, LEDGER, MOBILITY, TASKS};
use crate::channel::ShadowState;
use crate::compute::{enforce_deadlines, generate_tasks, EnergyMeter, Task, TaskQueue};
use crate::config::{ScenarioConfig, UavStart};
use crate::error::{Error, Result};
use crate::ledger::{
    apply_attack, maybe_forge_block, submit_transaction, AttackKind, AttackerProfile, AuditOutcome, Chain,
    ForgeOutcome, Registry, ReputationLedger, TaskProfile, Transaction, TxPool,
};
use crate::mobility::{assign_service_zone, load_trace, plan_uav_kmeans, step_vehicle, RoadNetwork, StepOutcome, Trace, UavMotion, VehicleMotion};
use crate::offload::hungarian_dense;
use crate::scalar::{distance_3d, Point2, Point3};

/// Forged transactions get ids from here up, apart from task ids.
pub const FORGED_TX_BASE: u64 = 1 << 48;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleState {
    /// Road-model motion; `None` when the vehicle follows a trace.
    pub motion: Option<VehicleMotion<f64>>,
    pub trace_id: Option<String>,
    /// Task arrivals per second (task vehicles only).
    pub lambda: f64,
    /// Zone manager currently serving the vehicle.
    pub zone: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rngs {
    pub mobility: ChaCha8Rng,
    pub channel: ChaCha8Rng,
    pub tasks: ChaCha8Rng,
    pub ledger: ChaCha8Rng,
    pub attacks: ChaCha8Rng,
}

impl Rngs {
    pub fn new(seed: u64) -> Self {
        Self {
            mobility: substream(seed, MOBILITY),
            channel: substream(seed, CHANNEL),
            tasks: substream(seed, TASKS),
            ledger: substream(seed, LEDGER),
            attacks: substream(seed, ATTACKS),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Counters {
    pub generated: u64,
    pub completed: u64,
    pub failed: u64,
    pub failed_by_reason: BTreeMap<FailReason, u64>,
    pub latency_sum: f64,
    pub tx_submitted: u64,
    pub tx_rejected: u64,
    pub tx_certified: u64,
    pub payments_withheld: u64,
    pub audits: u64,
    pub spoof_attempts: u64,
    pub spoof_rejected: u64,
    pub blocks: u64,
    pub solver_calls: u64,
    pub solver_fallbacks: u64,
    /// Plans that failed validation and were replaced by the greedy plan.
    pub solver_repairs: u64,
    pub distance_clamps: u64,
}

/// One row of the per-TTI series.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TtiMetrics {
    pub tti: u64,
    pub time: f64,
    pub generated: u64,
    pub completed: u64,
    pub failed: u64,
    pub in_flight: u64,
    pub completions: u64,
    pub failures: u64,
    pub tx_certified: u64,
    pub blocks: u64,
    pub mean_latency: f64,
    pub energy_tx: f64,
    pub energy_comp: f64,
    pub energy_fly: f64,
}

/// Everything that changes while the world runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Runtime {
    pub clock: SimClock,
    pub roads: RoadNetwork<f64>,
    pub trace: Option<Trace>,
    pub nodes: BTreeMap<u64, Node>,
    pub vehicles: BTreeMap<u64, VehicleState>,
    pub uavs: BTreeMap<u64, UavMotion<f64>>,
    /// Shadowing per radio pair, keyed transmitter then receiver.
    pub shadow: BTreeMap<u64, BTreeMap<u64, ShadowState<f64>>>,
    pub tasks: BTreeMap<u64, Task>,
    pub queues: BTreeMap<u64, TaskQueue>,
    pub energy: EnergyMeter,
    pub pool: TxPool,
    pub chain: Chain,
    pub reputation: ReputationLedger,
    pub registry: Registry,
    pub credentials: BTreeMap<u64, String>,
    pub attackers: BTreeMap<u64, AttackerProfile>,
    pub blacklisted: BTreeSet<u64>,
    pub stakes: BTreeMap<u64, f64>,
    pub rngs: Rngs,
    pub next_task_id: u64,
    pub next_forged_id: u64,
    /// TTIs in which an upload entered the cloud backhaul.
    pub backhaul_arrivals: VecDeque<u64>,
    /// Transmitters of the previous TTI, for interference estimates.
    pub last_tx: Vec<ActiveTx>,
    pub counters: Counters,
    pub series: Vec<TtiMetrics>,
}

/// Row of the optional per-TTI link table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub tti: u64,
    pub tx: u64,
    pub rx: u64,
    pub mode: LinkMode,
    pub pl_db: f64,
    pub s_db: f64,
    pub h: f64,
    pub rb_list: Vec<usize>,
    pub sinr_db: f64,
    pub capacity_bps: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct World {
    pub config: ScenarioConfig,
    pub runtime: Runtime,
    /// Collect [`LinkRecord`]s while stepping.
    #[serde(skip)]
    pub record_links: bool,
    #[serde(skip)]
    pub links: Vec<LinkRecord>,
    /// Wall-clock seconds spent in the solver.
    #[serde(skip)]
    pub solver_seconds: f64,
}

fn credential_for(seed: u64, id: u64) -> String {
    format!("{seed:016x}-{id}")
}

impl World {
    pub fn new(config: ScenarioConfig) -> Result<Self> {
        config.validate()?;
        let clock = SimClock::new(config.tti, config.mobility_step, config.horizon)?;
        let bounds = Point2::new(config.area.width, config.area.height);
        let roads = RoadNetwork::grid(config.roads.grid_x, config.roads.grid_y, bounds, config.roads.speed_limit)?;
        let mut trace = match &config.trace {
            Some(p) => Some(load_trace(p, config.mobility_step)?),
            None => None,
        };
        if trace.as_ref().is_some_and(|t| t.is_empty()) {
            trace = None;
        }
        let mut rngs = Rngs::new(config.seed);
        let layout = config.layout();
        let mut nodes = BTreeMap::new();
        let mut stakes = BTreeMap::new();
        let power = |n: &mut Node| {
            for (m, p) in n.tx_power.iter_mut() {
                *p = config.channel.mode(*m).tx_power_dbm;
            }
        };

        if config.cloud.enabled {
            let mut c = Node::new(layout.cloud, NodeKind::CloudServer, Point3::default());
            c.cpu_freq = config.cloud.cpu;
            nodes.insert(c.id, c);
        }
        for (id, p) in layout.rsus.clone().zip(&config.rsu.positions) {
            let mut n = Node::new(id, NodeKind::Rsu, Point3::new(p[0], p[1], 0.0));
            n.cpu_freq = config.rsu.cpu;
            n.coverage_radius = config.rsu.coverage;
            n.stake = config.rsu.stake;
            power(&mut n);
            stakes.insert(id, n.stake);
            nodes.insert(id, n);
        }
        let mut uavs = BTreeMap::new();
        for id in layout.uavs.clone() {
            let x = rngs.mobility.random_range(0.0..=config.area.width);
            let y = rngs.mobility.random_range(0.0..=config.area.height);
            let pos = Point3::new(x, y, config.uav.altitude);
            let mut n = Node::new(id, NodeKind::Uav, pos);
            n.cpu_freq = config.uav.cpu;
            n.coverage_radius = config.uav.coverage;
            power(&mut n);
            nodes.insert(id, n);
            uavs.insert(id, UavMotion { position: pos, target: pos.ground(), v_max: config.uav.v_max });
        }

        let trace_ids: Vec<String> = trace.as_ref().map(|t| t.vehicles.keys().cloned().collect()).unwrap_or_default();
        let vehicle_ids: Vec<(u64, NodeKind)> = layout
            .serving
            .clone()
            .map(|i| (i, NodeKind::ServingVehicle))
            .chain(layout.task.clone().map(|i| (i, NodeKind::TaskVehicle)))
            .collect();
        if trace.is_some() && trace_ids.len() < vehicle_ids.len() {
            return Err(Error::Config(format!(
                "trace has {} vehicles, the scenario needs {}",
                trace_ids.len(),
                vehicle_ids.len()
            )));
        }
        let mut vehicles = BTreeMap::new();
        for (i, &(id, kind)) in vehicle_ids.iter().enumerate() {
            let (motion, trace_id, ground) = match &trace {
                Some(t) => {
                    let tid = trace_ids[i].clone();
                    let first = t.vehicles[&tid][0].1;
                    (None, Some(tid), first)
                }
                None => {
                    let speed = if config.roads.speed_min == config.roads.speed_max {
                        config.roads.speed_min
                    } else {
                        rngs.mobility.random_range(config.roads.speed_min..=config.roads.speed_max)
                    };
                    let m = VehicleMotion::spawn(&roads, speed, &mut rngs.mobility);
                    let p = m.position(&roads);
                    (Some(m), None, p)
                }
            };
            let mut n = Node::new(id, kind, ground.at_altitude(0.0));
            if kind == NodeKind::ServingVehicle {
                n.cpu_freq = config.vehicles.cpu;
            }
            power(&mut n);
            nodes.insert(id, n);
            let lambda = if kind == NodeKind::TaskVehicle { config.tasks.lambda.draw(&mut rngs.tasks) } else { 0.0 };
            vehicles.insert(id, VehicleState { motion, trace_id, lambda, zone: None });
        }

        if config.uav.start == UavStart::Centers && !uavs.is_empty() {
            let demand: Vec<Point2<f64>> =
                nodes.values().filter(|n| n.kind == NodeKind::TaskVehicle).map(|n| n.position.ground()).collect();
            let previous: Vec<Point2<f64>> = uavs.values().map(|u| u.target).collect();
            let out = plan_uav_kmeans(&demand, uavs.len(), &mut rngs.mobility, &previous);
            for ((id, u), c) in uavs.iter_mut().zip(out.centers) {
                u.position = c.at_altitude(config.uav.altitude);
                u.target = c;
                nodes.get_mut(id).expect("listed").position = u.position;
            }
        }

        let queues = nodes.values().filter(|n| n.accepts_tasks()).map(|n| (n.id, TaskQueue::new(n.id))).collect();
        let mut registry = Registry::default();
        let mut credentials = BTreeMap::new();
        let mut balances = BTreeMap::new();
        for (&id, n) in &nodes {
            if n.kind.is_vehicle() || n.kind == NodeKind::Uav {
                let c = credential_for(config.seed, id);
                registry.register(id, &c);
                credentials.insert(id, c);
            }
            if n.kind.is_vehicle() {
                balances.insert(id, config.ledger.initial_balance);
            }
        }
        let attackers = config.attacks.iter().map(|a| (a.node, a.clone())).collect();
        let runtime = Runtime {
            clock,
            roads,
            trace,
            nodes,
            vehicles,
            uavs,
            shadow: BTreeMap::new(),
            tasks: BTreeMap::new(),
            queues,
            energy: EnergyMeter::new(config.energy),
            pool: TxPool::default(),
            chain: Chain::new(balances, config.ledger.forge.max_txs),
            reputation: ReputationLedger::new(config.ledger.theta),
            registry,
            credentials,
            attackers,
            blacklisted: BTreeSet::new(),
            stakes,
            rngs,
            next_task_id: 0,
            next_forged_id: FORGED_TX_BASE,
            backhaul_arrivals: VecDeque::new(),
            last_tx: Vec::new(),
            counters: Counters::default(),
            series: Vec::new(),
        };
        Ok(Self { config, runtime, record_links: false, links: Vec::new(), solver_seconds: 0.0 })
    }

    pub fn finished(&self) -> bool {
        self.runtime.clock.finished()
    }

    pub fn tti(&self) -> u64 {
        self.runtime.clock.tti_index
    }

    /// Runs one TTI through the fixed phase order and returns its events.
    pub fn advance_tti(&mut self) -> Result<Vec<Event>> {
        let mut ev = Vec::new();
        let tti = self.tti();
        let (now, end) = (self.runtime.clock.now(), self.runtime.clock.tti_end());
        let push = |ev: &mut Vec<Event>, t: f64, kind: EventKind| ev.push(Event { tti, time: t, kind });

        if self.runtime.clock.is_mobility_tti() {
            for kind in self.mobility_phase()? {
                push(&mut ev, now, kind);
            }
        }
        let (view, phase) = self.channel_phase();
        for kind in phase {
            push(&mut ev, now, kind);
        }
        for kind in self.generation_phase() {
            push(&mut ev, now, kind);
        }
        let (plan, phase) = self.scheduling_phase(&view)?;
        for kind in phase {
            push(&mut ev, now, kind);
        }
        for kind in self.transmission_phase(&view, &plan) {
            push(&mut ev, end, kind);
        }
        let (done, phase) = self.computation_phase(&plan);
        for kind in phase {
            push(&mut ev, end, kind);
        }
        for kind in self.ledger_phase(&done) {
            push(&mut ev, end, kind);
        }
        self.metrics_phase(done.len() as u64, &ev);
        self.runtime.clock.advance();
        Ok(ev)
    }

    // Phase 1.

    fn mobility_phase(&mut self) -> Result<Vec<EventKind>> {
        let mut ev = Vec::new();
        let rt = &mut self.runtime;
        let step = self.config.mobility_step;
        let before: BTreeMap<u64, Point3<f64>> = rt.nodes.iter().map(|(&id, n)| (id, n.position)).collect();
        let step_index = rt.clock.tti_index / rt.clock.ttis_per_mobility_step();
        if rt.clock.tti_index > 0 {
            let mut departed = Vec::new();
            for (&id, v) in rt.vehicles.iter_mut() {
                let ground = if let Some(m) = v.motion.as_mut() {
                    if step_vehicle(&rt.roads, m, step, self.config.roads.on_arrival, &mut rt.rngs.mobility)?
                        == StepOutcome::Departed
                    {
                        departed.push(id);
                        continue;
                    }
                    m.position(&rt.roads)
                } else {
                    let tid = v.trace_id.as_deref().expect("trace vehicles carry an id");
                    match rt.trace.as_ref().and_then(|t| t.position(tid, step_index)) {
                        Some(p) => p,
                        None => {
                            departed.push(id);
                            continue;
                        }
                    }
                };
                if let Some(n) = rt.nodes.get_mut(&id) {
                    n.position = ground.at_altitude(0.0);
                }
            }
            for id in departed {
                ev.extend(self.depart(id));
            }
            let rt = &mut self.runtime;
            for (id, u) in rt.uavs.iter_mut() {
                u.move_toward(step);
                if let Some(n) = rt.nodes.get_mut(id) {
                    n.position = u.position;
                }
            }
        }
        let rt = &mut self.runtime;

        let demand: Vec<Point2<f64>> =
            rt.nodes.values().filter(|n| n.kind == NodeKind::TaskVehicle).map(|n| n.position.ground()).collect();
        if !rt.uavs.is_empty() && !demand.is_empty() {
            let ids: Vec<u64> = rt.uavs.keys().copied().collect();
            let previous: Vec<Point2<f64>> = rt.uavs.values().map(|u| u.target).collect();
            let out = plan_uav_kmeans(&demand, ids.len(), &mut rt.rngs.mobility, &previous);
            if out.duplicate_centers {
                ev.push(EventKind::DuplicateCenters { k: ids.len(), distinct: out.distinct_points });
            }
            let cost: Vec<Vec<f64>> = ids
                .iter()
                .map(|id| out.centers.iter().map(|c| rt.uavs[id].position.ground().distance(c)).collect())
                .collect();
            let m = hungarian_dense(&cost);
            for (i, id) in ids.iter().enumerate() {
                if let Some(c) = m.assignment[i] {
                    rt.uavs.get_mut(id).expect("listed").target = out.centers[c];
                }
            }
        }

        let managers: Vec<(u64, Point3<f64>)> =
            rt.nodes.values().filter(|n| n.kind.is_zone_manager()).map(|n| (n.id, n.position)).collect();
        for (&id, v) in rt.vehicles.iter_mut() {
            v.zone = assign_service_zone(&rt.nodes[&id].position, &managers).ok();
        }

        let model = self.config.channel.shadow_model;
        for (tx, row) in rt.shadow.iter_mut() {
            for (rx, s) in row.iter_mut() {
                let (Some(a0), Some(b0), Some(a1), Some(b1)) =
                    (before.get(tx), before.get(rx), rt.nodes.get(tx), rt.nodes.get(rx))
                else {
                    continue;
                };
                let rel0 = a0.sub(b0);
                let rel1 = a1.position.sub(&b1.position);
                let dd = rel1.sub(&rel0).norm();
                s.update(model, dd, &mut rt.rngs.channel);
            }
        }
        Ok(ev)
    }

    /// Removes a vehicle and fails the live tasks that depended on it.
    fn depart(&mut self, id: u64) -> Vec<EventKind> {
        let rt = &mut self.runtime;
        let mut ev = vec![EventKind::VehicleDeparted { vehicle: id }];
        let orphaned: Vec<u64> = rt
            .tasks
            .values()
            .filter(|t| !t.state.is_final() && (t.origin == id || t.assigned_node == Some(id)))
            .map(|t| t.id)
            .collect();
        for tid in orphaned {
            let t = rt.tasks.get_mut(&tid).expect("listed");
            t.fail(FailReason::Orphaned);
            if let Some(q) = t.assigned_node.and_then(|n| rt.queues.get_mut(&n)) {
                q.remove(tid);
            }
            ev.push(EventKind::TaskFailed { task: tid, reason: FailReason::Orphaned });
            record_failure(&mut rt.counters, FailReason::Orphaned);
            rt.tasks.remove(&tid);
        }
        rt.nodes.remove(&id);
        rt.vehicles.remove(&id);
        rt.queues.remove(&id);
        rt.shadow.remove(&id);
        for row in rt.shadow.values_mut() {
            row.remove(&id);
        }
        ev
    }

    // Phase 3.

    fn generation_phase(&mut self) -> Vec<EventKind> {
        let rt = &mut self.runtime;
        let tti = rt.clock.tti_index;
        let mut ev = Vec::new();
        for (&tv, v) in &rt.vehicles {
            if rt.nodes[&tv].kind != NodeKind::TaskVehicle {
                continue;
            }
            for d in generate_tasks(v.lambda, self.config.tti, &self.config.tasks.ranges, &mut rt.rngs.tasks) {
                let id = rt.next_task_id;
                rt.next_task_id += 1;
                rt.tasks.insert(id, Task::new(id, tv, d.up, d.req, d.deadline, tti));
                rt.counters.generated += 1;
                ev.push(EventKind::TaskCreated { task: id, origin: tv, up: d.up, req: d.req, deadline: d.deadline });
            }
        }
        ev
    }

    /// Fails live tasks that can no longer finish by their deadline.
    pub(super) fn deadline_check(&mut self) -> Vec<EventKind> {
        let rt = &mut self.runtime;
        let failed = enforce_deadlines(rt.tasks.values_mut(), rt.clock.tti_index, self.config.tti);
        let mut ev = Vec::new();
        for (id, reason) in failed {
            if let Some(q) = rt.tasks[&id].assigned_node.and_then(|n| rt.queues.get_mut(&n)) {
                q.remove(id);
            }
            rt.tasks.remove(&id);
            record_failure(&mut rt.counters, reason);
            ev.push(EventKind::TaskFailed { task: id, reason });
        }
        ev
    }

    // Phase 7.

    fn ledger_phase(&mut self, done: &[u64]) -> Vec<EventKind> {
        let mut ev = Vec::new();
        let cfg = self.config.ledger;
        let end = self.runtime.clock.tti_end();
        let rt = &mut self.runtime;
        for &tid in done {
            let t = rt.tasks.remove(&tid).expect("completed task is live until the ledger phase");
            let node = t.assigned_node.expect("completed tasks are assigned");
            let correct = apply_attack(rt.attackers.get(&node), end);
            let outcome = rt.reputation.audit_and_update(node, correct, cfg.p_audit, &mut rt.rngs.ledger);
            if outcome != AuditOutcome::Unaudited {
                rt.counters.audits += 1;
                ev.push(EventKind::ResultAudited { task: tid, node, correct });
            }
            let score = rt.reputation.score(node);
            if let Some(n) = rt.nodes.get_mut(&node) {
                n.reputation = score;
            }
            if rt.reputation.blacklisted(node) && rt.blacklisted.insert(node) {
                ev.push(EventKind::Blacklisted { node, score });
            }
            if outcome == AuditOutcome::CaughtFalse {
                rt.counters.payments_withheld += 1;
                ev.push(EventKind::PaymentWithheld { task: tid, payer: t.origin, payee: node });
                continue;
            }
            let amount = t.req / 1e9 * cfg.tokens_per_gigacycle;
            let tx = Transaction {
                id: tid,
                payer: t.origin,
                payee: node,
                amount,
                fee: amount * cfg.fee_rate,
                profile: TaskProfile {
                    up: t.up,
                    req: t.req,
                    deadline: t.deadline,
                    latency: t.latency(self.config.tti).unwrap_or_default(),
                },
                created: end,
            };
            let credential = rt.credentials.get(&t.origin).cloned().unwrap_or_default();
            match submit_transaction(&mut rt.pool, tx, &credential, &rt.registry) {
                Ok(()) => {
                    rt.counters.tx_submitted += 1;
                    ev.push(EventKind::TxSubmitted { tx: tid });
                }
                Err(e) => {
                    rt.counters.tx_rejected += 1;
                    ev.push(EventKind::TxRejected { tx: tid, reason: e.to_string() });
                }
            }
        }

        if rt.clock.is_mobility_tti() {
            let spoofers: Vec<AttackerProfile> =
                rt.attackers.values().filter(|a| a.kind == AttackKind::IdentitySpoof).cloned().collect();
            for a in spoofers {
                let Some(victim) = a.victim else { continue };
                if !rt.nodes.contains_key(&a.node) {
                    continue;
                }
                let id = rt.next_forged_id;
                rt.next_forged_id += 1;
                let amount = rt.rngs.attacks.random_range(0.1..=0.3) * cfg.tokens_per_gigacycle;
                let forged = Transaction {
                    id,
                    payer: victim,
                    payee: a.node,
                    amount,
                    fee: amount * cfg.fee_rate,
                    profile: TaskProfile::default(),
                    created: end,
                };
                rt.counters.spoof_attempts += 1;
                let own = rt.credentials.get(&a.node).cloned().unwrap_or_default();
                match submit_transaction(&mut rt.pool, forged, &own, &rt.registry) {
                    Ok(()) => {
                        rt.counters.tx_submitted += 1;
                        ev.push(EventKind::TxSubmitted { tx: id });
                    }
                    Err(e) => {
                        rt.counters.spoof_rejected += 1;
                        rt.counters.tx_rejected += 1;
                        ev.push(EventKind::TxRejected { tx: id, reason: e.to_string() });
                        ev.push(EventKind::AttackDetected { node: a.node, attack: a.kind.name().into() });
                    }
                }
            }
        }

        match maybe_forge_block(&mut rt.pool, &rt.chain, end, 0.0, &rt.stakes, &cfg.forge, &mut rt.rngs.ledger) {
            ForgeOutcome::Idle => {}
            ForgeOutcome::NoValidator => ev.push(EventKind::ValidatorUnavailable { pool: rt.pool.len() }),
            ForgeOutcome::Forged(b) => {
                let (height, validator, txs) = (b.height, b.validator, b.transactions.len());
                rt.chain.append(b).expect("locally forged blocks verify");
                rt.counters.blocks += 1;
                rt.counters.tx_certified += txs as u64;
                ev.push(EventKind::BlockForged { height, validator, txs });
            }
        }
        ev
    }

    // Phase 8.

    fn metrics_phase(&mut self, completions: u64, ev: &[Event]) {
        let rt = &mut self.runtime;
        for id in rt.uavs.keys() {
            rt.energy.hover(*id, self.config.tti);
        }
        let failures = ev.iter().filter(|e| matches!(e.kind, EventKind::TaskFailed { .. })).count() as u64;
        let certified = ev
            .iter()
            .map(|e| if let EventKind::BlockForged { txs, .. } = e.kind { txs as u64 } else { 0 })
            .sum();
        let c = &rt.counters;
        let in_flight = rt.tasks.len() as u64;
        debug_assert_eq!(c.generated, c.completed + c.failed + in_flight);
        let e = rt.energy.totals();
        rt.series.push(TtiMetrics {
            tti: rt.clock.tti_index,
            time: rt.clock.tti_end(),
            generated: c.generated,
            completed: c.completed,
            failed: c.failed,
            in_flight,
            completions,
            failures,
            tx_certified: certified,
            blocks: c.blocks,
            mean_latency: if c.completed > 0 { c.latency_sum / c.completed as f64 } else { 0.0 },
            energy_tx: e.tx_joules,
            energy_comp: e.comp_joules,
            energy_fly: e.fly_joules,
        });
    }

    /// Live tasks, i.e. neither done nor failed.
    pub fn in_flight(&self) -> u64 {
        self.runtime.tasks.values().filter(|t| !t.state.is_final()).count() as u64
    }

    pub fn node_distance(&self, a: u64, b: u64) -> Option<f64> {
        Some(distance_3d(&self.runtime.nodes.get(&a)?.position, &self.runtime.nodes.get(&b)?.position))
    }
}

pub(super) fn record_failure(c: &mut Counters, reason: FailReason) {
    c.failed += 1;
    *c.failed_by_reason.entry(reason).or_default() += 1;
}
