use serde::{Deserialize, Serialize};

use super::{Plane, Polygon, RigidPose, Vec2, Vec3, EPS_GEOM};

/// Half-extent of the square that bounds ground sections of unbounded frusta.
const SECTION_BOUND: f64 = 1.0e3;

/// Convex region bounded by inward-facing planes: `p` is inside when
/// `dot(n, p) >= d` for every plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frustum {
    pub planes: Vec<Plane>,
}

impl Frustum {
    /// Symmetric perspective frustum of a camera pose.
    pub fn perspective(pose: &RigidPose, vertical_fov: f64, aspect: f64, near: f64, far: f64) -> Self {
        let eye = pose.translation;
        let f = pose.forward();
        let r = pose.right();
        let u = pose.up();
        let ty = (0.5 * vertical_fov).tan();
        let tx = ty * aspect;
        let mut planes = Vec::with_capacity(6);
        // Each side plane contains the eye and one edge direction of the view pyramid.
        for (axis, other, t) in [(r, u, tx), (u, r, ty)] {
            for s in [1.0, -1.0] {
                let edge = f + axis * (s * t);
                let mut n = other.cross(&edge).normalize();
                if n.dot(&f) < 0.0 {
                    n = -n;
                }
                planes.push(Plane {
                    normal: n,
                    offset: n.dot(&eye),
                });
            }
        }
        planes.push(Plane {
            normal: f,
            offset: f.dot(&eye) + near,
        });
        planes.push(Plane {
            normal: -f,
            offset: -(f.dot(&eye) + far),
        });
        Frustum { planes }
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        self.planes.iter().all(|pl| pl.signed_distance(p) >= -tol)
    }

    pub fn reflected_by(&self, mirror: &Plane) -> Frustum {
        Frustum {
            planes: self.planes.iter().map(|p| p.reflected_by(mirror)).collect(),
        }
    }

    /// Convex section of the frustum with the horizontal plane at height `z`.
    pub fn ground_section(&self, z: f64) -> Polygon {
        let mut poly = Polygon::rectangle(
            Vec2::new(-SECTION_BOUND, -SECTION_BOUND),
            Vec2::new(SECTION_BOUND, SECTION_BOUND),
        );
        for plane in &self.planes {
            let n2 = Vec2::new(plane.normal.x, plane.normal.y);
            let rhs = plane.offset - plane.normal.z * z;
            if n2.norm() <= EPS_GEOM {
                // Horizontal plane: the whole slice is either in or out.
                if rhs > EPS_GEOM {
                    return Polygon::default();
                }
                continue;
            }
            poly = poly.clip_halfplane(n2, rhs);
            if poly.is_empty() {
                break;
            }
        }
        poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_frustum() -> Frustum {
        let axes = [Vec3::x(), Vec3::y(), Vec3::z()];
        let mut planes = Vec::new();
        for (i, a) in axes.iter().enumerate() {
            let (lo, hi) = [(-1.0, 2.0), (0.0, 3.0), (0.0, 4.0)][i];
            planes.push(Plane { normal: *a, offset: lo });
            planes.push(Plane {
                normal: -a,
                offset: -hi,
            });
        }
        Frustum { planes }
    }

    #[test]
    fn box_slice_is_its_footprint() {
        let poly = box_frustum().ground_section(2.0);
        assert!((poly.area() - 9.0).abs() < 1e-9);
        for v in &poly.vertices {
            assert!((v.x + 1.0).abs() < 1e-9 || (v.x - 2.0).abs() < 1e-9);
            assert!(v.y.abs() < 1e-9 || (v.y - 3.0).abs() < 1e-9);
        }
        assert!(poly.signed_area() > 0.0);
    }

    #[test]
    fn slice_above_box_is_empty() {
        assert!(box_frustum().ground_section(5.0).is_empty());
    }

    #[test]
    fn perspective_contains_points_on_axis() {
        let pose = RigidPose::look_at(Vec3::new(0.0, 5.0, 1.5), Vec3::new(0.0, 0.0, 1.0), Vec3::z());
        let fr = Frustum::perspective(&pose, 1.0, 1.0, 0.1, 50.0);
        assert!(fr.contains(Vec3::new(0.0, 0.0, 1.0), 0.0));
        assert!(!fr.contains(Vec3::new(0.0, 6.0, 1.5), 0.0));
        assert!(!fr.contains(Vec3::new(40.0, 0.0, 1.0), 0.0));
    }
}
