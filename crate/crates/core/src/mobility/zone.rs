use crate::error::{Error, Result};
use crate::scalar::{distance_3d, Point3, Scalar};

/// Nearest zone manager by 3-D distance; ties go to the lowest id.
pub fn assign_service_zone<T: Scalar>(vehicle: &Point3<T>, managers: &[(u64, Point3<T>)]) -> Result<u64> {
    let mut best: Option<(T, u64)> = None;
    for &(id, pos) in managers {
        let d = distance_3d(vehicle, &pos);
        let better = match best {
            None => true,
            Some((bd, bid)) => d < bd || (d == bd && id < bid),
        };
        if better {
            best = Some((d, id));
        }
    }
    best.map(|(_, id)| id).ok_or(Error::NoZoneManager)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_manager() {
        let v = Point3::new(5.0, 5.0, 0.0);
        assert_eq!(assign_service_zone(&v, &[(4, Point3::new(900.0, 0.0, 100.0))]).unwrap(), 4);
    }

    #[test]
    fn nearest_wins() {
        let v = Point3::new(0.0, 0.0, 0.0);
        let m = [(1, Point3::new(10.0, 0.0, 0.0)), (2, Point3::new(20.0, 0.0, 0.0))];
        assert_eq!(assign_service_zone(&v, &m).unwrap(), 1);
    }

    #[test]
    fn tie_goes_to_lowest_id() {
        let v = Point3::new(0.0, 0.0, 0.0);
        let m = [(7, Point3::new(10.0, 0.0, 0.0)), (3, Point3::new(-10.0, 0.0, 0.0))];
        assert_eq!(assign_service_zone(&v, &m).unwrap(), 3);
    }

    #[test]
    fn empty_is_an_error() {
        assert!(matches!(assign_service_zone::<f64>(&Point3::default(), &[]), Err(Error::NoZoneManager)));
    }
}
