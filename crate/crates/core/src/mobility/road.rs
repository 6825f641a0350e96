//! Built-in road network and route-following vehicles.

use petgraph::algo::{astar, kosaraju_scc};
use petgraph::graph::{DiGraph, NodeIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Point2, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lane<T> {
    pub from: usize,
    pub to: usize,
    pub length: T,
    pub speed_limit: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadNetwork<T> {
    pub intersections: Vec<Point2<T>>,
    pub lanes: Vec<Lane<T>>,
    /// Width and height of the area; the origin is the lower-left corner.
    pub bounds: Point2<T>,
    /// Outgoing lanes per intersection.
    pub outgoing: Vec<Vec<usize>>,
}

impl<T: Scalar> RoadNetwork<T> {
    /// `nx` by `ny` intersections spread over the whole area, joined by
    /// bidirectional lanes to their horizontal and vertical neighbours.
    pub fn grid(nx: usize, ny: usize, bounds: Point2<T>, speed_limit: T) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Config("a road grid needs at least 2x2 intersections".into()));
        }
        let fx = |i: usize| bounds.x * T::from_usize(i).unwrap() / T::from_usize(nx - 1).unwrap();
        let fy = |i: usize| bounds.y * T::from_usize(i).unwrap() / T::from_usize(ny - 1).unwrap();
        let mut intersections = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                intersections.push(Point2::new(fx(i), fy(j)));
            }
        }
        let mut net = Self { intersections, lanes: Vec::new(), bounds, outgoing: vec![Vec::new(); nx * ny] };
        for j in 0..ny {
            for i in 0..nx {
                let a = j * nx + i;
                if i + 1 < nx {
                    net.add_pair(a, a + 1, speed_limit);
                }
                if j + 1 < ny {
                    net.add_pair(a, a + nx, speed_limit);
                }
            }
        }
        net.validate()?;
        Ok(net)
    }

    fn add_pair(&mut self, a: usize, b: usize, speed_limit: T) {
        let length = self.intersections[a].distance(&self.intersections[b]);
        for (from, to) in [(a, b), (b, a)] {
            self.outgoing[from].push(self.lanes.len());
            self.lanes.push(Lane { from, to, length, speed_limit });
        }
    }

    fn graph(&self) -> DiGraph<(), T> {
        let mut g = DiGraph::new();
        let ids: Vec<NodeIndex> = (0..self.intersections.len()).map(|_| g.add_node(())).collect();
        for l in &self.lanes {
            g.add_edge(ids[l.from], ids[l.to], l.length);
        }
        g
    }

    pub fn validate(&self) -> Result<()> {
        let inside = |p: &Point2<T>| p.x >= T::zero() && p.y >= T::zero() && p.x <= self.bounds.x && p.y <= self.bounds.y;
        if !self.intersections.iter().all(inside) {
            return Err(Error::Config("intersection outside the area".into()));
        }
        for l in &self.lanes {
            if l.from == l.to || l.from >= self.intersections.len() || l.to >= self.intersections.len() {
                return Err(Error::Config(format!("lane {} -> {} is malformed", l.from, l.to)));
            }
        }
        if kosaraju_scc(&self.graph()).len() != 1 {
            return Err(Error::Config("road network is not strongly connected".into()));
        }
        Ok(())
    }

    /// Shortest lane sequence between two distinct intersections.
    pub fn route(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let g = self.graph();
        let (_, path) = astar(&g, NodeIndex::new(from), |n| n == NodeIndex::new(to), |e| *e.weight(), |_| T::zero())?;
        path.windows(2)
            .map(|w| {
                let (a, b) = (w[0].index(), w[1].index());
                self.outgoing[a].iter().copied().find(|&l| self.lanes[l].to == b)
            })
            .collect()
    }

    /// Route from `from` to a uniformly drawn other intersection.
    pub fn random_route(&self, from: usize, rng: &mut impl Rng) -> Vec<usize> {
        let n = self.intersections.len();
        let mut to = rng.random_range(0..n - 1);
        if to >= from {
            to += 1;
        }
        self.route(from, to).expect("network is strongly connected")
    }

    pub fn point_on(&self, lane: usize, offset: T) -> Point2<T> {
        let l = &self.lanes[lane];
        let (a, b) = (self.intersections[l.from], self.intersections[l.to]);
        let f = if l.length > T::zero() { offset / l.length } else { T::zero() };
        Point2::new(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OnArrival {
    #[default]
    Redraw,
    Despawn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VehicleMotion<T> {
    pub route: Vec<usize>,
    /// Index into `route` of the current lane.
    pub leg: usize,
    pub lane_offset: T,
    pub speed: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Moving,
    Departed,
}

impl<T: Scalar> VehicleMotion<T> {
    /// Places a vehicle at a random point of a random lane with a random route
    /// continuing from that lane's end.
    pub fn spawn(net: &RoadNetwork<T>, speed: T, rng: &mut impl Rng) -> Self {
        let lane = rng.random_range(0..net.lanes.len());
        let offset = net.lanes[lane].length * T::lit(rng.random::<f64>());
        let mut route = vec![lane];
        route.extend(net.random_route(net.lanes[lane].to, rng));
        Self { route, leg: 0, lane_offset: offset, speed: speed.min(net.lanes[lane].speed_limit) }
    }

    pub fn lane(&self) -> usize {
        self.route[self.leg]
    }

    pub fn position(&self, net: &RoadNetwork<T>) -> Point2<T> {
        net.point_on(self.lane(), self.lane_offset)
    }
}

/// Advances one vehicle by `speed * dt` along its route, carrying leftover
/// distance across junctions.
pub fn step_vehicle<T: Scalar>(
    net: &RoadNetwork<T>,
    m: &mut VehicleMotion<T>,
    dt: T,
    on_arrival: OnArrival,
    rng: &mut impl Rng,
) -> Result<StepOutcome> {
    let mut left = m.speed * dt;
    loop {
        let lane = m.route.get(m.leg).and_then(|&l| net.lanes.get(l)).ok_or_else(|| {
            Error::Config(format!("vehicle on lane {:?} absent from the network", m.route.get(m.leg)))
        })?;
        let room = lane.length - m.lane_offset;
        if left <= room {
            m.lane_offset = m.lane_offset + left;
            return Ok(StepOutcome::Moving);
        }
        left = left - room;
        if m.leg + 1 < m.route.len() {
            m.leg += 1;
            m.lane_offset = T::zero();
            continue;
        }
        m.lane_offset = lane.length;
        match on_arrival {
            OnArrival::Despawn => return Ok(StepOutcome::Departed),
            OnArrival::Redraw => {
                m.route = net.random_route(lane.to, rng);
                m.leg = 0;
                m.lane_offset = T::zero();
                m.speed = m.speed.min(net.lanes[m.route[0]].speed_limit);
            }
        }
    }
}

/// Steps every vehicle; returns the indices of departed ones.
pub fn step_vehicles<T: Scalar>(
    net: &RoadNetwork<T>,
    motions: &mut [VehicleMotion<T>],
    dt: T,
    on_arrival: OnArrival,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    let mut departed = Vec::new();
    for (i, m) in motions.iter_mut().enumerate() {
        if step_vehicle(net, m, dt, on_arrival, rng)? == StepOutcome::Departed {
            departed.push(i);
        }
    }
    Ok(departed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn net() -> RoadNetwork<f64> {
        RoadNetwork::grid(5, 5, Point2::new(2000.0, 2000.0), 13.9).unwrap()
    }

    /// Two 100 m lanes in a row, 0 -> 1 -> 2.
    fn line() -> (RoadNetwork<f64>, VehicleMotion<f64>) {
        let net = RoadNetwork::grid(3, 2, Point2::new(200.0, 200.0), 13.9).unwrap();
        let a = net.outgoing[0].iter().copied().find(|&l| net.lanes[l].to == 1).unwrap();
        let b = net.outgoing[1].iter().copied().find(|&l| net.lanes[l].to == 2).unwrap();
        (net, VehicleMotion { route: vec![a, b], leg: 0, lane_offset: 0.0, speed: 10.0 })
    }

    #[test]
    fn default_grid_shape() {
        let n = net();
        assert_eq!(n.intersections.len(), 25);
        assert_eq!(n.lanes.len(), 2 * 2 * 5 * 4);
        assert!(n.lanes.iter().all(|l| l.length == 500.0));
    }

    #[test]
    fn zero_speed_stays() {
        let (n, mut m) = line();
        m.speed = 0.0;
        m.lane_offset = 42.0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        step_vehicle(&n, &mut m, 0.5, OnArrival::Redraw, &mut rng).unwrap();
        assert_eq!((m.leg, m.lane_offset), (0, 42.0));
    }

    #[test]
    fn straight_advance() {
        let (n, mut m) = line();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        step_vehicle(&n, &mut m, 0.5, OnArrival::Redraw, &mut rng).unwrap();
        assert_eq!((m.leg, m.lane_offset), (0, 5.0));
    }

    #[test]
    fn carries_over_into_successor() {
        let (n, mut m) = line();
        m.lane_offset = 98.0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        step_vehicle(&n, &mut m, 0.5, OnArrival::Redraw, &mut rng).unwrap();
        assert_eq!(m.leg, 1);
        assert!((m.lane_offset - 3.0).abs() < 1e-12);
    }

    #[test]
    fn despawn_at_route_end() {
        let (n, mut m) = line();
        m.leg = 1;
        m.lane_offset = 99.0;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(step_vehicle(&n, &mut m, 0.5, OnArrival::Despawn, &mut rng).unwrap(), StepOutcome::Departed);
    }

    #[test]
    fn unknown_lane_is_a_config_error() {
        let (n, mut m) = line();
        m.route = vec![999];
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(step_vehicle(&n, &mut m, 0.5, OnArrival::Redraw, &mut rng), Err(Error::Config(_))));
    }

    #[test]
    fn routes_connect_endpoints() {
        let n = net();
        let r = n.route(0, 24).unwrap();
        assert_eq!(r.len(), 8);
        assert_eq!(n.lanes[r[0]].from, 0);
        assert_eq!(n.lanes[*r.last().unwrap()].to, 24);
        assert!(r.windows(2).all(|w| n.lanes[w[0]].to == n.lanes[w[1]].from));
    }

    #[test]
    fn disconnected_network_rejected() {
        let mut n = net();
        n.lanes.retain(|l| l.from != 0);
        assert!(n.validate().is_err());
    }
}
