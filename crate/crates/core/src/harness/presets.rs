//! Named scenario configs, one per mission.

use crate::config::{ScenarioConfig, SweepPoint, UavStart};
use crate::error::{Error, Result};
use crate::ledger::{AttackKind, AttackerProfile};
use crate::offload::SolverKind;

pub const PRESETS: [&str; 5] = ["deployment", "trajectory", "offloading", "security", "resource-allocation"];

fn point(label: &str) -> SweepPoint {
    SweepPoint { label: label.to_string(), ..Default::default() }
}

/// Returns the config for a mission preset.
///
/// - `deployment`: the default map with RSUs, UAVs, vehicles and the cloud.
/// - `trajectory`: sweeps the UAV count over 4 and 6.
/// - `offloading`: 50 task vehicles, serving vehicles swept from 10 to 90,
///   each with the greedy and WHO solvers.
/// - `security`: always-on, on-off and identity-spoofing attackers among the
///   serving vehicles, audits with probability 0.2.
/// - `resource-allocation`: a 600 m square with one RSU and 4 UAVs, swept
///   over small task/serving vehicle mixes with both solvers.
pub fn mission_preset(name: &str) -> Result<ScenarioConfig> {
    let mut c = ScenarioConfig::default();
    match name {
        "deployment" => {}
        "trajectory" => {
            c.sweep = [4, 6].iter().map(|&u| SweepPoint { uavs: Some(u), ..point(&format!("uav-{u}")) }).collect();
        }
        "offloading" => {
            c.vehicles.task = 50;
            for sv in [10, 30, 50, 70, 90] {
                for solver in [SolverKind::Greedy, SolverKind::Who] {
                    c.sweep.push(SweepPoint {
                        serving_vehicles: Some(sv),
                        solver: Some(solver),
                        ..point(&format!("sv-{sv}-{}", solver.name()))
                    });
                }
            }
        }
        "security" => {
            c.vehicles.task = 20;
            c.vehicles.serving = 10;
            c.ledger.p_audit = 0.2;
            let l = c.layout();
            let sv = l.serving.start;
            let profile = |node, kind| AttackerProfile { node, kind, on_period: 0.0, off_period: 0.0, victim: None };
            c.attacks = vec![
                profile(sv, AttackKind::AlwaysOn),
                AttackerProfile { on_period: 5.0, off_period: 5.0, ..profile(sv + 1, AttackKind::OnOff) },
                AttackerProfile { victim: Some(l.task.start), ..profile(sv + 2, AttackKind::IdentitySpoof) },
            ];
        }
        "resource-allocation" => {
            c.area.width = 600.0;
            c.area.height = 600.0;
            c.roads.grid_x = 4;
            c.roads.grid_y = 4;
            c.rsu.positions = vec![[300.0, 300.0]];
            c.uav.count = 4;
            c.uav.start = UavStart::Centers;
            c.vehicles.task = 5;
            c.vehicles.serving = 5;
            c.solver = SolverKind::Who;
            for (tv, sv) in [(5, 5), (10, 5), (5, 10), (10, 10)] {
                for solver in [SolverKind::Greedy, SolverKind::Who] {
                    c.sweep.push(SweepPoint {
                        task_vehicles: Some(tv),
                        serving_vehicles: Some(sv),
                        solver: Some(solver),
                        ..point(&format!("tv{tv}-sv{sv}-{}", solver.name()))
                    });
                }
            }
        }
        _ => return Err(Error::UnknownPreset { name: name.to_string(), valid: PRESETS.join(", ") }),
    }
    c.validate()?;
    Ok(c)
}
