use serde::{Deserialize, Serialize};

use super::{Mat3, Vec3};

/// Rotation plus translation. For cameras the rotation columns are the
/// right, up and backward axes (the camera looks along the negative third
/// column).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidPose {
    pub rotation: Mat3,
    pub translation: Vec3,
}

impl RigidPose {
    pub fn identity() -> Self {
        RigidPose {
            rotation: Mat3::identity(),
            translation: Vec3::zeros(),
        }
    }

    /// Camera pose at `eye` aimed at `target`, with `up` as the reference vertical.
    pub fn look_at(eye: Vec3, target: Vec3, up: Vec3) -> Self {
        let forward = (target - eye).normalize();
        let right = forward.cross(&up).normalize();
        let cam_up = right.cross(&forward);
        RigidPose {
            rotation: Mat3::from_columns(&[right, cam_up, -forward]),
            translation: eye,
        }
    }

    pub fn right(&self) -> Vec3 {
        self.rotation.column(0).into_owned()
    }

    pub fn up(&self) -> Vec3 {
        self.rotation.column(1).into_owned()
    }

    pub fn forward(&self) -> Vec3 {
        -self.rotation.column(2).into_owned()
    }

    pub fn transform_point(&self, p: Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let r = &self.rotation;
        (r.transpose() * r - Mat3::identity()).abs().max() <= tol && (r.determinant() - 1.0).abs() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn look_at_is_proper_rotation() {
        let pose = RigidPose::look_at(Vec3::new(3.0, 5.0, 1.6), Vec3::new(0.0, 0.0, 1.2), Vec3::z());
        assert!(pose.is_valid(1e-9));
        let f = pose.forward();
        let expected = (Vec3::new(0.0, 0.0, 1.2) - Vec3::new(3.0, 5.0, 1.6)).normalize();
        assert!((f - expected).norm() < 1e-12);
        assert!(pose.right().z.abs() < 1e-12);
    }
}
