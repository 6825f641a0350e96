//! Plain-text vehicle traces: one `time vehicle_id x y` record per line.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Point2;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    /// Records per vehicle: mobility step index and position, in time order.
    pub vehicles: BTreeMap<String, Vec<(u64, Point2<f64>)>>,
}

impl Trace {
    pub fn is_empty(&self) -> bool {
        self.vehicles.is_empty()
    }

    /// Position held from the latest record at or before `step`; `None`
    /// before the first record or after the last one.
    pub fn position(&self, id: &str, step: u64) -> Option<Point2<f64>> {
        let recs = self.vehicles.get(id)?;
        if step > recs.last()?.0 {
            return None;
        }
        let i = recs.partition_point(|(s, _)| *s <= step);
        (i > 0).then(|| recs[i - 1].1)
    }

    pub fn last_step(&self, id: &str) -> Option<u64> {
        self.vehicles.get(id)?.last().map(|r| r.0)
    }
}

pub fn parse_trace(text: &str, mobility_step: f64) -> Result<Trace> {
    let mut trace = Trace::default();
    let mut last_time = f64::NEG_INFINITY;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let fields: Vec<&str> = raw.split(' ').collect();
        if fields.len() != 4 {
            return Err(err(format!("expected `time vehicle_id x y`, found {} fields", fields.len())));
        }
        let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| err(format!("bad {what} {s:?}")));
        let t = num(fields[0], "time")?;
        let (x, y) = (num(fields[2], "x")?, num(fields[3], "y")?);
        if !(t.is_finite() && x.is_finite() && y.is_finite()) {
            return Err(err("non-finite value".into()));
        }
        if t < last_time {
            return Err(err(format!("timestamp {t} precedes {last_time}")));
        }
        last_time = t;
        let steps = t / mobility_step;
        if t < 0.0 || (steps - steps.round()).abs() > 1e-6 {
            return Err(err(format!("time {t} is not a multiple of the mobility step {mobility_step}")));
        }
        trace.vehicles.entry(fields[1].to_string()).or_default().push((steps.round() as u64, Point2::new(x, y)));
    }
    Ok(trace)
}

pub fn load_trace(path: &Path, mobility_step: f64) -> Result<Trace> {
    parse_trace(&std::fs::read_to_string(path)?, mobility_step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace() {
        assert!(parse_trace("", 0.5).unwrap().is_empty());
    }

    #[test]
    fn single_record() {
        let t = parse_trace("0.0 veh1 100 200\n", 0.5).unwrap();
        assert_eq!(t.position("veh1", 0), Some(Point2::new(100.0, 200.0)));
        assert_eq!(t.position("veh1", 1), None);
    }

    #[test]
    fn out_of_order_rejected() {
        let e = parse_trace("1.0 a 0 0\n0.5 a 1 1\n", 0.5).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn misaligned_time_rejected() {
        assert!(matches!(parse_trace("0.3 a 0 0", 0.5), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let e = parse_trace("0.0 a 0 0\n0.5 a 1\n", 0.5).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(matches!(parse_trace("0.0  a 0 0", 0.5), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn positions_hold_between_records() {
        let t = parse_trace("0.0 a 0 0\n1.5 a 30 0\n", 0.5).unwrap();
        assert_eq!(t.position("a", 2), Some(Point2::new(0.0, 0.0)));
        assert_eq!(t.position("a", 3), Some(Point2::new(30.0, 0.0)));
        assert_eq!(t.last_step("a"), Some(3));
    }
}
