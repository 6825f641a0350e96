use serde::{Deserialize, Serialize};

use crate::scalar::{Point2, Point3, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UavMotion<T> {
    pub position: Point3<T>,
    pub target: Point2<T>,
    pub v_max: T,
}

impl<T: Scalar> UavMotion<T> {
    /// Flies straight toward the target at altitude, covering at most
    /// `v_max * dt`. Returns the displacement.
    pub fn move_toward(&mut self, dt: T) -> T {
        let here = self.position.ground();
        let dist = here.distance(&self.target);
        let reach = self.v_max * dt;
        if dist <= reach {
            self.position = self.target.at_altitude(self.position.z);
            return dist;
        }
        let f = reach / dist;
        self.position.x = here.x + (self.target.x - here.x) * f;
        self.position.y = here.y + (self.target.y - here.y) * f;
        reach
    }
}
