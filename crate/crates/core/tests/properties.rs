use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use uavfog::config::{ScenarioConfig, UavStart};
use uavfog::harness::{mission_preset, simulate};
use uavfog::offload::random::random_instance;
use uavfog::offload::{ao_refine, exact_oracle, greedy_assign, objective, who_solve, window_offload, AoConfig, WhoConfig};
use uavfog::sim::{EventKind, NodeKind, World};
use uavfog::SolverKind;

fn solver() -> impl Strategy<Value = SolverKind> {
    prop_oneof![Just(SolverKind::Greedy), Just(SolverKind::Who), Just(SolverKind::Oracle)]
}

fn small_world(seed: u64, tv: usize, sv: usize, uavs: usize, solver: SolverKind) -> ScenarioConfig {
    let mut c = mission_preset("resource-allocation").unwrap();
    c.sweep.clear();
    c.seed = seed;
    c.horizon = 3.0;
    c.vehicles.task = tv;
    c.vehicles.serving = sv;
    c.uav.count = uavs;
    c.uav.start = if seed % 2 == 0 { UavStart::Centers } else { UavStart::Random };
    c.solver = solver;
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_outputs_are_valid_and_ordered(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3, varying in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, n, m, 20, varying);
        let cfg = AoConfig::default();
        let refined = ao_refine(&window_offload(&inst, &cfg).schedule, &inst, &cfg).unwrap();
        prop_assert!(refined.trace.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{:?}", refined.trace);
        prop_assert!(refined.iterations <= cfg.max_iters);
        let who = who_solve(&inst, &WhoConfig::default()).unwrap().schedule;
        let greedy = greedy_assign(&inst);
        let oracle = exact_oracle(&inst).unwrap();
        for s in [&refined.schedule, &who, &greedy, &oracle.schedule] {
            prop_assert!(s.validate(&inst).is_empty(), "{:?}", s.validate(&inst));
        }
        let o = oracle.objective;
        prop_assert!(o <= objective(&who, &inst).unwrap() + 1e-9);
        prop_assert!(o <= objective(&greedy, &inst).unwrap() + 1e-9);
        prop_assert!(o <= objective(&refined.schedule, &inst).unwrap() + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn world_invariants_hold_every_tti(seed in any::<u64>(), tv in 0usize..=6, sv in 0usize..=4, uavs in 0usize..=3, solver in solver()) {
        let mut w = World::new(small_world(seed, tv, sv, uavs, solver)).unwrap();
        let (width, height) = (w.config.area.width, w.config.area.height);
        let step = w.config.uav.v_max * w.config.mobility_step;
        let mut last_time = 0.0;
        let mut last_energy: BTreeMap<u64, (f64, f64, f64)> = BTreeMap::new();
        let mut last_uav = BTreeMap::new();
        let mut generated = 0u64;
        let mut deadlines = BTreeMap::new();
        let initial = w.runtime.chain.total_balance();
        while !w.finished() {
            for e in w.advance_tti().unwrap() {
                prop_assert!(e.time >= last_time - 1e-12, "event time went back");
                last_time = e.time;
                match e.kind {
                    EventKind::TaskCreated { task, deadline, .. } => {
                        generated += 1;
                        deadlines.insert(task, deadline);
                    }
                    EventKind::TaskDone { task, latency, .. } => {
                        prop_assert!(latency <= deadlines[&task] + 1e-9, "late completion");
                    }
                    _ => {}
                }
            }
            let c = &w.runtime.counters;
            prop_assert_eq!(c.generated, generated);
            prop_assert_eq!(c.generated, c.completed + c.failed + w.in_flight());
            for n in w.runtime.nodes.values() {
                let p = n.position;
                prop_assert!((0.0..=width).contains(&p.x) && (0.0..=height).contains(&p.y), "node {} left the area", n.id);
                if n.kind == NodeKind::Uav {
                    if let Some(prev) = last_uav.insert(n.id, p) {
                        prop_assert!(uavfog::scalar::distance_3d(&prev, &p) <= step + 1e-9);
                    }
                }
            }
            for (id, e) in &w.runtime.energy.nodes {
                let now = (e.tx_joules, e.comp_joules, e.fly_joules);
                if let Some(prev) = last_energy.insert(*id, now) {
                    prop_assert!(now.0 >= prev.0 && now.1 >= prev.1 && now.2 >= prev.2);
                }
            }
            let chain = &w.runtime.chain;
            prop_assert!((chain.total_balance() - initial - chain.minted).abs() < 1e-6);
            prop_assert!(chain.blocks.iter().all(|b| b.transactions.len() <= w.config.ledger.forge.max_txs));
        }
    }

    #[test]
    fn summary_keys_do_not_depend_on_the_scenario(seed in any::<u64>(), tv in 0usize..=3, sv in 0usize..=2) {
        let keys = |c: ScenarioConfig| -> Vec<String> {
            let v = serde_json::to_value(simulate(c).unwrap().metrics.summary).unwrap();
            let mut out = Vec::new();
            fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<String>) {
                if let serde_json::Value::Object(m) = v {
                    for (k, x) in m {
                        let key = format!("{prefix}{k}");
                        walk(&format!("{key}."), x, out);
                        out.push(key);
                    }
                }
            }
            walk("", &v, &mut out);
            out
        };
        let mut c = small_world(seed, tv, sv, 1, SolverKind::Greedy);
        c.horizon = 0.5;
        let mut empty = c.clone();
        empty.vehicles.task = 0;
        prop_assert_eq!(keys(c), keys(empty));
    }
}
