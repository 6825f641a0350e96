//! Random small instances for benchmarking and property tests.

use rand::Rng;

use super::instance::{InstanceNode, InstanceTask, OffloadInstance};

/// Draws an instance with attributes in the default task ranges, CPU speeds
/// typical of vehicles, UAVs and RSUs, and per-pair uplink rates drawn
/// log-uniformly between 2 and 100 Mb/s. With `varying`, every slot gets its
/// own rate. The window spans the whole horizon.
pub fn random_instance(rng: &mut impl Rng, tasks: usize, nodes: usize, slots: usize, varying: bool) -> OffloadInstance {
    let cpu = [2.5e9, 5e9, 10e9];
    let rate = |rng: &mut dyn rand::RngCore| 10f64.powf(rng.random_range(2e6f64.log10()..1e8f64.log10()));
    let tasks_v: Vec<InstanceTask> = (0..tasks)
        .map(|i| InstanceTask {
            id: i as u64,
            created: rng.random_range(0..=3),
            up: rng.random_range(0.02e6..=1e6),
            req: rng.random_range(0.1e9..=0.3e9),
            deadline: rng.random_range(0.2..=1.0),
            ..Default::default()
        })
        .collect();
    let nodes_v: Vec<InstanceNode> = (0..nodes)
        .map(|j| InstanceNode { id: j as u64, cpu_freq: cpu[rng.random_range(0..cpu.len())], release_gap: 0 })
        .collect();
    let capacity = (0..tasks)
        .map(|_| {
            (0..nodes)
                .map(|_| {
                    if varying {
                        (0..slots).map(|_| rate(rng)).collect()
                    } else {
                        vec![rate(rng); slots]
                    }
                })
                .collect()
        })
        .collect();
    OffloadInstance {
        start_slot: 0,
        slots,
        dt: 0.05,
        ws: slots,
        punish: 10.0 * slots as f64,
        rb_count: 20,
        tasks: tasks_v,
        nodes: nodes_v,
        capacity,
    }
}
