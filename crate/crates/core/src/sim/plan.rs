//! Channel, scheduling, transmission and computation phases.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use super::event::EventKind;
use super::node::{LinkMode, NodeKind};
use super::world::{LinkRecord, World};
use crate::channel::{channel_gain_linear, planning_rate, path_loss_db, sample_fast_fading, sample_wired_delay, wired_delay, ShadowState, D_MIN};
use crate::compute::{step_compute, step_transmit, CpuShareMap, TaskState};
use crate::error::{Error, Result};
use crate::offload::greedy::{greedy_choice, simulate_equal_share};
use crate::offload::{exact_oracle, greedy_assign, who_solve, InstanceNode, InstanceTask, OffloadInstance, Schedule, SolverKind};
use crate::scalar::{dbm_to_watts, distance_3d, linear_to_db};

/// Radio state of one transmitter-receiver pair in the current TTI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radio {
    pub mode: LinkMode,
    pub pl_db: f64,
    pub s_db: f64,
    pub h: f64,
    pub power_dbm: f64,
}

impl Radio {
    /// Received power with the fading draw averaged out.
    fn mean_power(&self) -> f64 {
        dbm_to_watts(self.power_dbm) * channel_gain_linear(self.s_db, self.pl_db, 1.0)
    }

    fn rx_power(&self) -> f64 {
        dbm_to_watts(self.power_dbm) * channel_gain_linear(self.s_db, self.pl_db, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate {
    /// Computing node.
    pub node: u64,
    /// Node the task vehicle transmits to (differs from `node` for the cloud).
    pub radio: u64,
    /// Expected full-band uplink rate in bits/s.
    pub capacity: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ChannelView {
    pub radios: BTreeMap<(u64, u64), Radio>,
    pub candidates: BTreeMap<u64, Vec<Candidate>>,
    /// Measured arrival rate at the cloud backhaul, per second.
    pub cloud_arrival: f64,
    /// Planning gap for the cloud, `None` when it cannot take new tasks.
    pub cloud_gap: Option<usize>,
    /// Expected interference per resource block, keyed by zone and receiver.
    pub interference: BTreeMap<(Option<u64>, u64), f64>,
    /// Expected rate of each transmitting task on its committed link.
    pub pinned: BTreeMap<u64, f64>,
}

/// A transmitter active in the previous TTI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveTx {
    pub tx: u64,
    pub zone: Option<u64>,
    /// Fraction of the band it occupied.
    pub fraction: f64,
    pub power_dbm: f64,
}

/// Slot-0 shares of the current plan.
#[derive(Debug, Clone, Default)]
pub struct Plan {
    pub tx: BTreeMap<u64, f64>,
    pub cpu: CpuShareMap,
}

impl World {
    fn noise_w(&self) -> f64 {
        dbm_to_watts(self.config.channel.noise_dbm)
    }

    fn radio(&mut self, view: &mut ChannelView, tx: u64, rx: u64, ev: &mut Vec<EventKind>) -> Option<Radio> {
        if let Some(r) = view.radios.get(&(tx, rx)) {
            return Some(*r);
        }
        let rt = &mut self.runtime;
        let (a, b) = (rt.nodes.get(&tx)?, rt.nodes.get(&rx)?);
        let mode = LinkMode::between(a.kind, b.kind)?;
        let p = self.config.channel.mode(mode);
        let d = distance_3d(&a.position, &b.position);
        if d < D_MIN {
            rt.counters.distance_clamps += 1;
            ev.push(EventKind::DistanceClamped { tx, rx });
        }
        let power_dbm = a.tx_power_dbm(mode);
        let pl_db = path_loss_db(d, &p.path_loss());
        let shadow = rt.shadow.entry(tx).or_default().entry(rx).or_insert_with(|| {
            let mut s = ShadowState::new(p.sigma_db, p.d_corr).expect("validated channel parameters");
            s.initialize(&mut rt.rngs.channel);
            s
        });
        let s_db = shadow.s_db;
        let h = sample_fast_fading(&mut rt.rngs.channel);
        let r = Radio { mode, pl_db, s_db, h, power_dbm };
        view.radios.insert((tx, rx), r);
        Some(r)
    }

    /// Expected full-band rate of a radio over the fading distribution, counting last TTI's transmitters in
    /// other zones as interference spread evenly over the band.
    fn estimate(&self, view: &mut ChannelView, r: &Radio, rx: u64, zone: Option<u64>) -> f64 {
        let interference = *view.interference.entry((zone, rx)).or_insert_with(|| {
            self.runtime
                .last_tx
                .iter()
                .filter(|o| o.zone != zone)
                .map(|o| o.fraction * self.cross_power(o.tx, rx, o.power_dbm))
                .sum()
        });
        let snr = r.mean_power() / (self.noise_w() + interference);
        self.config.channel.bandwidth * planning_rate(snr, self.config.channel.outage)
    }

    fn covers(&self, manager: u64, vehicle: u64) -> bool {
        let (Some(m), Some(v)) = (self.runtime.nodes.get(&manager), self.runtime.nodes.get(&vehicle)) else {
            return false;
        };
        distance_3d(&m.position.ground().at_altitude(0.0), &v.position) <= m.coverage_radius + 1e-9
    }

    // Phase 2.

    pub(super) fn channel_phase(&mut self) -> (ChannelView, Vec<EventKind>) {
        let mut ev = Vec::new();
        let mut view = ChannelView::default();
        let tti = self.tti();
        let dt = self.config.tti;
        let per_second = (1.0 / dt).round() as u64;
        let cloud = self.config.layout().cloud;
        if self.config.cloud.enabled {
            let arrivals = &mut self.runtime.backhaul_arrivals;
            while arrivals.front().is_some_and(|&a| a + per_second <= tti) {
                arrivals.pop_front();
            }
            let lambda = arrivals.len() as f64 / (per_second as f64 * dt);
            view.cloud_arrival = lambda;
            match wired_delay(lambda, self.config.cloud.service_rate) {
                Ok(d) => view.cloud_gap = Some((d / dt - 1e-9).ceil().max(0.0) as usize),
                Err(_) => ev.push(EventKind::CloudSaturated { arrival: lambda, service: self.config.cloud.service_rate }),
            }
        }

        let tvs: Vec<(u64, Option<u64>)> = self
            .runtime
            .vehicles
            .iter()
            .filter(|(id, _)| self.runtime.nodes[id].kind == NodeKind::TaskVehicle)
            .map(|(&id, v)| (id, v.zone))
            .collect();
        for (tv, zone) in tvs {
            let mut cands = Vec::new();
            if let Some(z) = zone {
                let svs: Vec<u64> = self
                    .runtime
                    .vehicles
                    .iter()
                    .filter(|(id, v)| {
                        v.zone == Some(z)
                            && self.runtime.nodes[id].kind == NodeKind::ServingVehicle
                            && !self.runtime.blacklisted.contains(id)
                    })
                    .map(|(&id, _)| id)
                    .collect();
                for sv in svs {
                    if let Some(r) = self.radio(&mut view, tv, sv, &mut ev) {
                        let capacity = self.estimate(&mut view, &r, sv, zone);
                        cands.push(Candidate { node: sv, radio: sv, capacity });
                    }
                }
                if self.covers(z, tv) {
                    let manager = &self.runtime.nodes[&z];
                    let computes = manager.accepts_tasks() && !self.runtime.blacklisted.contains(&z);
                    let relays_cloud = manager.kind == NodeKind::Rsu && view.cloud_gap.is_some();
                    if computes || relays_cloud {
                        if let Some(r) = self.radio(&mut view, tv, z, &mut ev) {
                            let capacity = self.estimate(&mut view, &r, z, zone);
                            if computes {
                                cands.push(Candidate { node: z, radio: z, capacity });
                            }
                            if relays_cloud {
                                cands.push(Candidate { node: cloud, radio: z, capacity });
                            }
                        }
                    }
                }
            }
            view.candidates.insert(tv, cands);
        }

        let pinned: Vec<(u64, u64, u64)> = self
            .runtime
            .tasks
            .values()
            .filter(|t| t.state == TaskState::Transmitting)
            .filter_map(|t| Some((t.id, t.origin, t.relay.or(t.assigned_node)?)))
            .collect();
        for (task, tv, rx) in pinned {
            let gated = self.runtime.nodes.get(&rx).is_some_and(|n| n.kind.is_zone_manager()) && !self.covers(rx, tv);
            if gated {
                continue;
            }
            if let Some(r) = self.radio(&mut view, tv, rx, &mut ev) {
                let zone = self.runtime.vehicles.get(&tv).and_then(|v| v.zone);
                let c = self.estimate(&mut view, &r, rx, zone);
                view.pinned.insert(task, c);
            }
        }
        (view, ev)
    }

    // Phase 4.

    pub(super) fn scheduling_phase(&mut self, view: &ChannelView) -> Result<(Plan, Vec<EventKind>)> {
        let mut ev = self.deadline_check();
        let mut plan = Plan::default();
        let tti = self.tti();
        let rt = &self.runtime;
        let ids: Vec<u64> = rt.tasks.keys().copied().collect();
        if ids.is_empty() {
            return Ok((plan, ev));
        }

        // Union-find over tasks, computing nodes and zone bands.
        let mut node_ix: BTreeMap<u64, usize> = BTreeMap::new();
        let mut band_ix: BTreeMap<u64, usize> = BTreeMap::new();
        let mut edges: Vec<(usize, Elem)> = Vec::new();
        for (i, &id) in ids.iter().enumerate() {
            let t = &rt.tasks[&id];
            let zone = rt.vehicles.get(&t.origin).and_then(|v| v.zone);
            match (t.state, t.assigned_node) {
                (TaskState::Pending, _) => {
                    let cands = view.candidates.get(&t.origin).map(Vec::as_slice).unwrap_or_default();
                    for c in cands {
                        edges.push((i, Elem::Node(c.node)));
                    }
                    if let (Some(z), false) = (zone, cands.is_empty()) {
                        edges.push((i, Elem::Band(z)));
                    }
                }
                (TaskState::Transmitting, Some(n)) => {
                    edges.push((i, Elem::Node(n)));
                    if let Some(z) = zone {
                        edges.push((i, Elem::Band(z)));
                    }
                }
                (_, Some(n)) => edges.push((i, Elem::Node(n))),
                _ => {}
            }
        }
        let mut next = ids.len();
        for (_, e) in &edges {
            let map = match e {
                Elem::Node(n) => node_ix.entry(*n),
                Elem::Band(z) => band_ix.entry(*z),
            };
            map.or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        let mut uf = UnionFind::<usize>::new(next);
        for (i, e) in &edges {
            let j = match e {
                Elem::Node(n) => node_ix[n],
                Elem::Band(z) => band_ix[z],
            };
            uf.union(*i, j);
        }
        let mut groups: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, &id) in ids.iter().enumerate() {
            groups.entry(uf.find(i)).or_default().push(id);
        }
        let mut groups: Vec<Vec<u64>> = groups.into_values().collect();
        groups.sort_by_key(|g| g[0]);

        for group in groups {
            let Some((inst, radios)) = self.build_instance(&group, view, tti) else { continue };
            let schedule = self.run_solver(&inst, &mut ev)?;
            self.apply_slot0(&inst, &schedule, &radios, &mut plan, &mut ev)?;
        }
        Ok((plan, ev))
    }

    /// Instance for one component, plus the radio used by each task on each
    /// node column.
    fn build_instance(&self, group: &[u64], view: &ChannelView, tti: u64) -> Option<(OffloadInstance, Vec<Vec<Option<u64>>>)> {
        let rt = &self.runtime;
        let cfg = &self.config;
        let cloud = cfg.layout().cloud;
        let mut node_ids: BTreeSet<u64> = BTreeSet::new();
        for id in group {
            let t = &rt.tasks[id];
            match t.state {
                TaskState::Pending => {
                    for c in view.candidates.get(&t.origin).into_iter().flatten() {
                        node_ids.insert(c.node);
                    }
                }
                _ => {
                    node_ids.extend(t.assigned_node);
                }
            }
        }
        node_ids.retain(|n| rt.nodes.get(n).is_some_and(|x| x.accepts_tasks()));
        if node_ids.is_empty() {
            return None;
        }
        let nodes: Vec<u64> = node_ids.into_iter().collect();
        let col: BTreeMap<u64, usize> = nodes.iter().enumerate().map(|(j, &n)| (n, j)).collect();

        let start = tti as i64;
        let mut horizon = 0i64;
        let mut tasks = Vec::with_capacity(group.len());
        let mut rates: Vec<Vec<f64>> = Vec::with_capacity(group.len());
        let mut radios: Vec<Vec<Option<u64>>> = Vec::with_capacity(group.len());
        for id in group {
            let t = &rt.tasks[id];
            let mut row = vec![0.0; nodes.len()];
            let mut via = vec![None; nodes.len()];
            match t.state {
                TaskState::Pending => {
                    for c in view.candidates.get(&t.origin).into_iter().flatten() {
                        if let Some(&j) = col.get(&c.node) {
                            row[j] = c.capacity;
                            via[j] = Some(c.radio);
                        }
                    }
                }
                TaskState::Transmitting => {
                    if let Some(&j) = t.assigned_node.as_ref().and_then(|n| col.get(n)) {
                        row[j] = view.pinned.get(id).copied().unwrap_or(0.0);
                        via[j] = t.relay.or(t.assigned_node);
                    }
                }
                _ => {}
            }
            let pinned = match t.state {
                TaskState::Pending => None,
                _ => t.assigned_node.and_then(|n| col.get(&n).copied()),
            };
            let inst_task = InstanceTask {
                id: *id,
                created: t.created_tti as i64,
                up: t.remaining_bits,
                req: t.remaining_cycles,
                deadline: t.deadline,
                pinned,
                available: t.available_tti.map(|a| a as i64),
            };
            let latest = inst_task.created + (t.deadline / cfg.tti + 1e-9).floor() as i64;
            horizon = horizon.max(latest - start);
            tasks.push(inst_task);
            rates.push(row);
            radios.push(via);
        }
        let slots = (horizon.max(0) as usize).clamp(cfg.offload.ws.min(cfg.offload.max_slots), cfg.offload.max_slots);
        let inst_nodes = nodes
            .iter()
            .map(|&n| InstanceNode {
                id: n,
                cpu_freq: rt.nodes[&n].cpu_freq,
                release_gap: if n == cloud { view.cloud_gap.unwrap_or(slots) } else { 0 },
            })
            .collect();
        let capacity = rates.into_iter().map(|row| row.into_iter().map(|c| vec![c; slots]).collect()).collect();
        let inst = OffloadInstance {
            start_slot: start,
            slots,
            dt: cfg.tti,
            ws: cfg.offload.ws,
            punish: cfg.punish(),
            rb_count: cfg.channel.rb_count,
            tasks,
            nodes: inst_nodes,
            capacity,
        };
        Some((inst, radios))
    }

    fn run_solver(&mut self, inst: &OffloadInstance, ev: &mut Vec<EventKind>) -> Result<Schedule> {
        let started = Instant::now();
        self.runtime.counters.solver_calls += 1;
        let mut who = self.config.offload.who;
        if inst.tasks.len() > self.config.offload.polish_max_tasks {
            who.polish_rounds = 0;
        }
        let checked = |s: Schedule, world: &mut World| {
            if s.validate(inst).is_empty() {
                s
            } else {
                world.runtime.counters.solver_repairs += 1;
                greedy_assign(inst)
            }
        };
        let schedule = match self.config.solver {
            SolverKind::Greedy => simulate_equal_share(inst, &greedy_choice(inst)),
            SolverKind::Who => {
                let s = who_solve(inst, &who)?.schedule;
                checked(s, self)
            }
            SolverKind::Oracle => match exact_oracle(inst) {
                Ok(r) => checked(r.schedule, self),
                Err(Error::InstanceTooLarge { .. }) => {
                    self.runtime.counters.solver_fallbacks += 1;
                    ev.push(EventKind::SolverFallback { tasks: inst.tasks.len(), nodes: inst.nodes.len() });
                    let s = who_solve(inst, &who)?.schedule;
                    checked(s, self)
                }
                Err(e) => return Err(e),
            },
        };
        self.solver_seconds += started.elapsed().as_secs_f64();
        Ok(schedule)
    }

    fn apply_slot0(
        &mut self,
        inst: &OffloadInstance,
        s: &Schedule,
        radios: &[Vec<Option<u64>>],
        plan: &mut Plan,
        ev: &mut Vec<EventKind>,
    ) -> Result<()> {
        let tti = self.tti();
        let cloud = self.config.layout().cloud;
        let mut uploads = Vec::new();
        for (k, it) in inst.tasks.iter().enumerate() {
            let Some(j) = s.assignment[k] else { continue };
            let node = inst.nodes[j].id;
            let (tx, cpu) = (s.tx_share[k][0], s.cpu_share[k][0]);
            let rt = &mut self.runtime;
            let task = rt.tasks.get_mut(&it.id).expect("instance tasks are live");
            if task.state == TaskState::Pending {
                if tx <= 0.0 && cpu <= 0.0 {
                    continue;
                }
                task.assigned_node = Some(node);
                task.relay = radios[k][j].filter(|_| node == cloud);
                task.state = TaskState::Transmitting;
                rt.queues.get_mut(&node).expect("computing nodes have queues").push(it.id, node)?;
                ev.push(EventKind::TaskAssigned { task: it.id, node });
                ev.push(EventKind::TranStart { task: it.id });
            }
            match task.state {
                TaskState::Transmitting if tx > 0.0 => uploads.push((it.id, tx)),
                TaskState::Queued | TaskState::Computing
                    if cpu > 0.0 && task.available_tti.is_none_or(|a| a <= tti) =>
                {
                    plan.cpu.set(node, it.id, cpu);
                }
                _ => {}
            }
        }
        for (id, x) in uploads {
            plan.tx.insert(id, x);
        }
        Ok(())
    }

    // Phase 5.

    pub(super) fn transmission_phase(&mut self, view: &ChannelView, plan: &Plan) -> Vec<EventKind> {
        let mut ev = Vec::new();
        let tti = self.tti();
        let dt = self.config.tti;
        let rb_count = self.config.channel.rb_count;
        let rb_bw = self.config.channel.bandwidth / rb_count as f64;
        let noise = self.noise_w();
        let cloud = self.config.layout().cloud;

        let zones: Vec<u64> =
            self.runtime.nodes.values().filter(|n| n.kind.is_zone_manager()).map(|n| n.id).collect();
        struct Active {
            task: u64,
            tx: u64,
            rx: u64,
            zone: Option<u64>,
            share: f64,
            rbs: Vec<usize>,
            radio: Radio,
        }
        let mut active = Vec::new();
        let mut requests = Vec::new();
        for (&task, &share) in &plan.tx {
            let t = &self.runtime.tasks[&task];
            let rx = t.relay.or(t.assigned_node).expect("transmitting tasks are assigned");
            let Some(radio) = view.radios.get(&(t.origin, rx)).copied() else { continue };
            let zone = self.runtime.vehicles.get(&t.origin).and_then(|v| v.zone);
            let zi = zone.and_then(|z| zones.iter().position(|&x| x == z)).unwrap_or(zones.len());
            let n = ((share * rb_count as f64 - 1e-9).ceil() as usize).clamp(1, rb_count);
            requests.push(RbRequest { zone: zi, offset: zi * rb_count / (zones.len() + 1), blocks: n });
            active.push(Active { task, tx: t.origin, rx, zone, share, rbs: Vec::new(), radio });
        }
        for (a, rbs) in active.iter_mut().zip(allocate_rbs(&requests, rb_count)) {
            a.rbs = rbs;
        }
        let mut cap = Vec::with_capacity(active.len());
        for a in &active {
            let signal = a.radio.rx_power();
            let mut sinr = Vec::with_capacity(a.rbs.len());
            for rb in &a.rbs {
                let mut interference = 0.0;
                for o in &active {
                    if o.zone == a.zone || !o.rbs.contains(rb) {
                        continue;
                    }
                    interference += self.cross_power(o.tx, a.rx, o.radio.power_dbm);
                }
                sinr.push(signal / (noise + interference));
            }
            let sum: f64 = sinr.iter().map(|g| rb_bw * (1.0 + g).log2()).sum();
            let c = a.share * rb_count as f64 / a.rbs.len() as f64 * sum;
            if self.record_links {
                let mean = sinr.iter().sum::<f64>() / sinr.len() as f64;
                self.links.push(LinkRecord {
                    tti,
                    tx: a.tx,
                    rx: a.rx,
                    mode: a.radio.mode,
                    pl_db: a.radio.pl_db,
                    s_db: a.radio.s_db,
                    h: a.radio.h,
                    rb_list: a.rbs.clone(),
                    sinr_db: linear_to_db(mean),
                    capacity_bps: c,
                });
            }
            cap.push(c);
        }

        self.runtime.last_tx = active
            .iter()
            .map(|a| ActiveTx {
                tx: a.tx,
                zone: a.zone,
                fraction: a.rbs.len() as f64 / rb_count as f64,
                power_dbm: a.radio.power_dbm,
            })
            .collect();
        let (lambda, mu) = (view.cloud_arrival, self.config.cloud.service_rate);
        for (a, c) in active.iter().zip(cap) {
            let rt = &mut self.runtime;
            rt.energy.transmit(a.tx, a.radio.power_dbm, dt);
            let t = rt.tasks.get_mut(&a.task).expect("active");
            if !step_transmit(t, c, dt, tti) {
                continue;
            }
            ev.push(EventKind::TranEnd { task: a.task });
            let mut gap = 0;
            if t.assigned_node == Some(cloud) {
                gap = if self.config.cloud.stochastic {
                    let d = sample_wired_delay(lambda, mu, &mut rt.rngs.channel).unwrap_or(f64::INFINITY);
                    if d.is_finite() { (d / dt - 1e-9).ceil() as u64 } else { u64::from(u32::MAX) }
                } else {
                    view.cloud_gap.unwrap_or(self.config.offload.max_slots) as u64
                };
                rt.backhaul_arrivals.push_back(tti);
            }
            t.available_tti = Some(tti + 1 + gap);
        }
        ev
    }

    /// Interference power from `tx` at `rx`, path loss only.
    fn cross_power(&self, tx: u64, rx: u64, power_dbm: f64) -> f64 {
        let (Some(a), Some(b)) = (self.runtime.nodes.get(&tx), self.runtime.nodes.get(&rx)) else { return 0.0 };
        let Some(mode) = LinkMode::between(a.kind, b.kind) else { return 0.0 };
        let pl = path_loss_db(distance_3d(&a.position, &b.position), &self.config.channel.mode(mode).path_loss());
        dbm_to_watts(power_dbm) * channel_gain_linear(0.0, pl, 1.0)
    }

    // Phase 6.

    pub(super) fn computation_phase(&mut self, plan: &Plan) -> (Vec<u64>, Vec<EventKind>) {
        let mut ev = Vec::new();
        let mut done = Vec::new();
        let tti = self.tti();
        let dt = self.config.tti;
        let rt = &mut self.runtime;
        for (&node, shares) in &plan.cpu.shares {
            let Some(freq) = rt.nodes.get(&node).map(|n| n.cpu_freq) else { continue };
            for id in shares.keys() {
                if rt.tasks.get(id).is_some_and(|t| t.state == TaskState::Queued) {
                    ev.push(EventKind::CompStart { task: *id });
                }
            }
            let (finished, cycles) = step_compute(freq, shares, &mut rt.tasks, dt, tti);
            rt.energy.compute(node, freq, cycles);
            for id in finished {
                let latency = rt.tasks[&id].latency(dt).expect("done tasks have a latency");
                if let Some(q) = rt.queues.get_mut(&node) {
                    q.remove(id);
                }
                rt.counters.completed += 1;
                rt.counters.latency_sum += latency;
                ev.push(EventKind::CompEnd { task: id });
                ev.push(EventKind::TaskDone { task: id, node, latency });
                done.push(id);
            }
        }
        done.sort_unstable();
        (done, ev)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RbRequest {
    pub zone: usize,
    /// Preferred first block; zones start at different points of the band.
    pub offset: usize,
    pub blocks: usize,
}

/// Resource blocks for each request, in order. Blocks are exclusive within a
/// zone while the zone has room; among the admissible blocks, those least
/// used by other zones are taken first, ties going cyclically from the
/// request's offset.
pub fn allocate_rbs(requests: &[RbRequest], rb_count: usize) -> Vec<Vec<usize>> {
    let mut total = vec![0usize; rb_count];
    let mut own: BTreeMap<usize, Vec<bool>> = BTreeMap::new();
    let mut out = Vec::with_capacity(requests.len());
    for r in requests {
        let taken = own.entry(r.zone).or_insert_with(|| vec![false; rb_count]);
        let mut order: Vec<usize> = (0..rb_count).collect();
        order.sort_by_key(|&b| (taken[b], total[b], (b + rb_count - r.offset % rb_count) % rb_count));
        let chosen: Vec<usize> = order.into_iter().take(r.blocks.min(rb_count)).collect();
        for &b in &chosen {
            taken[b] = true;
            total[b] += 1;
        }
        let mut chosen = chosen;
        chosen.sort_unstable();
        out.push(chosen);
    }
    out
}

enum Elem {
    Node(u64),
    Band(u64),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(zone: usize, offset: usize, blocks: usize) -> RbRequest {
        RbRequest { zone, offset, blocks }
    }

    #[test]
    fn zones_avoid_each_other_while_the_band_has_room() {
        let got = allocate_rbs(&[req(0, 0, 3), req(1, 10, 4), req(0, 0, 2), req(1, 10, 10)], 20);
        assert_eq!(got[0], vec![0, 1, 2]);
        assert_eq!(got[1], vec![10, 11, 12, 13]);
        assert_eq!(got[2], vec![3, 4]);
        // Zone 1 fills the ten blocks nobody uses before reusing zone 0's.
        assert_eq!(got[3].len(), 10);
        assert!(got[3].iter().all(|b| !got[0].contains(b) && !got[2].contains(b) && !got[1].contains(b)));
    }

    #[test]
    fn exclusive_within_a_zone() {
        let got = allocate_rbs(&[req(0, 5, 7), req(0, 5, 7), req(0, 5, 6)], 20);
        let mut all: Vec<usize> = got.concat();
        all.sort_unstable();
        assert_eq!(all, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn oversubscribed_zone_reuses_least_loaded_blocks() {
        let got = allocate_rbs(&[req(0, 0, 4), req(0, 0, 3)], 5);
        assert_eq!(got[0], vec![0, 1, 2, 3]);
        assert_eq!(got[1].len(), 3);
        assert!(got[1].contains(&4));
    }
}
