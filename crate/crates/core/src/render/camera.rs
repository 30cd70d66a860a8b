use crate::geometry::{reflect_point, Plane, Ray, Vec3};
use crate::scene::CameraPose;

/// Pinhole camera producing rays for continuous raster coordinates
/// (`x` right, `y` down, pixel `(i, j)` spanning `[i, i+1) × [j, j+1)`).
#[derive(Clone, Copy, Debug)]
pub struct Camera {
    pub eye: Vec3,
    pub right: Vec3,
    pub up: Vec3,
    pub forward: Vec3,
    tan_half: f64,
    aspect: f64,
    width: f64,
    height: f64,
    /// Negates the horizontal raster axis.
    flip_x: bool,
}

impl Camera {
    pub fn new(view: &CameraPose, width: u32, height: u32) -> Self {
        Camera {
            eye: view.pose.translation,
            right: view.pose.right(),
            up: view.pose.up(),
            forward: view.pose.forward(),
            tan_half: (0.5 * view.vertical_fov).tan(),
            aspect: width as f64 / height as f64,
            width: width as f64,
            height: height as f64,
            flip_x: false,
        }
    }

    /// The camera mirrored by `plane`. Its right axis is negated to keep a
    /// proper rotation and the raster is flipped horizontally to compensate,
    /// so every raster position maps to the mirror image of the original ray.
    pub fn reflected(&self, plane: &Plane) -> Self {
        Camera {
            eye: reflect_point(plane, self.eye),
            right: -plane.reflect_vector(self.right),
            up: plane.reflect_vector(self.up),
            forward: plane.reflect_vector(self.forward),
            flip_x: !self.flip_x,
            ..*self
        }
    }

    pub fn ray(&self, x: f64, y: f64) -> Ray {
        let mut sx = (2.0 * x / self.width - 1.0) * self.tan_half * self.aspect;
        if self.flip_x {
            sx = -sx;
        }
        let sy = (1.0 - 2.0 * y / self.height) * self.tan_half;
        Ray::new(self.eye, (self.forward + self.right * sx + self.up * sy).normalize())
    }

    /// Projects a world point to raster coordinates; `None` behind the camera.
    pub fn project(&self, p: Vec3) -> Option<(f64, f64)> {
        let d = p - self.eye;
        let z = d.dot(&self.forward);
        if z <= 0.0 {
            return None;
        }
        let mut sx = d.dot(&self.right) / (z * self.tan_half * self.aspect);
        if self.flip_x {
            sx = -sx;
        }
        let sy = d.dot(&self.up) / (z * self.tan_half);
        Some(((sx + 1.0) * 0.5 * self.width, (1.0 - sy) * 0.5 * self.height))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RigidPose;

    fn view() -> CameraPose {
        CameraPose {
            pose: RigidPose::look_at(Vec3::new(0.3, 4.0, 1.5), Vec3::new(0.0, 0.0, 1.0), Vec3::z()),
            vertical_fov: 1.0,
            index: 0,
        }
    }

    #[test]
    fn center_ray_is_forward_and_projection_inverts() {
        let cam = Camera::new(&view(), 64, 48);
        let r = cam.ray(32.0, 24.0);
        assert!((r.dir - cam.forward).norm() < 1e-12);
        let p = cam.ray(10.25, 40.5).at(3.0);
        let (x, y) = cam.project(p).unwrap();
        assert!((x - 10.25).abs() < 1e-9 && (y - 40.5).abs() < 1e-9);
    }

    #[test]
    fn reflected_rays_are_mirror_images() {
        let plane = Plane::new(Vec3::y(), 0.0);
        let cam = Camera::new(&view(), 64, 64);
        let virt = cam.reflected(&plane);
        let m = virt.right.cross(&virt.up);
        assert!((m + virt.forward).norm() < 1e-12, "virtual camera stays right-handed");
        for &(x, y) in &[(0.5, 0.5), (13.2, 50.0), (63.5, 1.0)] {
            let a = cam.ray(x, y);
            let b = virt.ray(x, y);
            assert!((plane.reflect_vector(a.dir) - b.dir).norm() < 1e-12);
        }
    }
}
