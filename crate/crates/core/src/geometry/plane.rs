use serde::{Deserialize, Serialize};

use super::{Mat3, Mat4, Vec3};

/// An oriented plane `{p : dot(normal, p) = offset}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    /// Builds a plane from any non-zero normal; the normal is rescaled to unit length.
    pub fn new(normal: Vec3, offset: f64) -> Self {
        let len = normal.norm();
        Plane {
            normal: normal / len,
            offset: offset / len,
        }
    }

    pub fn from_point_normal(point: Vec3, normal: Vec3) -> Self {
        let n = normal.normalize();
        Plane {
            normal: n,
            offset: n.dot(&point),
        }
    }

    /// Plane through `a`, `b`, `c`, oriented so that `inside` has positive signed distance.
    pub fn through_points(a: Vec3, b: Vec3, c: Vec3, inside: Vec3) -> Self {
        let plane = Plane::from_point_normal(a, (b - a).cross(&(c - a)));
        if plane.signed_distance(inside) < 0.0 {
            plane.flipped()
        } else {
            plane
        }
    }

    pub fn flipped(&self) -> Self {
        Plane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    #[inline]
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(&p) - self.offset
    }

    pub fn reflect_vector(&self, v: Vec3) -> Vec3 {
        v - 2.0 * self.normal.dot(&v) * self.normal
    }

    /// The mirror image of this plane under a reflection across `mirror`.
    pub fn reflected_by(&self, mirror: &Plane) -> Plane {
        let n = mirror.reflect_vector(self.normal);
        let p = reflect_point(mirror, self.normal * self.offset);
        Plane {
            normal: n,
            offset: n.dot(&p),
        }
    }
}

/// Mirror image of `p` across `plane`.
#[inline]
pub fn reflect_point(plane: &Plane, p: Vec3) -> Vec3 {
    p - 2.0 * plane.signed_distance(p) * plane.normal
}

/// Homogeneous matrix of [`reflect_point`]: `I - 2 n nᵀ` with translation `2 d n`.
pub fn reflection_transform(plane: &Plane) -> Mat4 {
    let n = plane.normal;
    let linear = Mat3::identity() - 2.0 * n * n.transpose();
    let t = 2.0 * plane.offset * n;
    let mut m = Mat4::identity();
    m.fixed_view_mut::<3, 3>(0, 0).copy_from(&linear);
    m.fixed_view_mut::<3, 1>(0, 3).copy_from(&t);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn reflect_across_ground_flips_z() {
        let plane = Plane::new(Vec3::z(), 0.0);
        assert_eq!(
            reflect_point(&plane, Vec3::new(1.0, 2.0, 3.0)),
            Vec3::new(1.0, 2.0, -3.0)
        );
    }

    #[test]
    fn reflect_across_offset_plane() {
        let plane = Plane::new(Vec3::x(), 2.0);
        assert_eq!(reflect_point(&plane, Vec3::zeros()), Vec3::new(4.0, 0.0, 0.0));
    }

    #[test]
    fn matrix_form_examples() {
        let m = reflection_transform(&Plane::new(Vec3::z(), 0.0));
        let expected = Mat4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, -1.0, 1.0));
        assert_eq!(m, expected);

        let m = reflection_transform(&Plane::new(Vec3::x(), 2.0));
        assert_eq!(m[(0, 0)], -1.0);
        assert_eq!(m[(1, 1)], 1.0);
        assert_eq!(m[(2, 2)], 1.0);
        assert_eq!(m.fixed_view::<3, 1>(0, 3).into_owned(), Vec3::new(4.0, 0.0, 0.0));
    }

    #[test]
    fn reflected_plane_matches_reflected_points() {
        let mirror = Plane::new(Vec3::new(0.0, 1.0, 0.0), 0.5);
        let p = Plane::new(Vec3::new(1.0, 2.0, -0.5), 1.3);
        let r = p.reflected_by(&mirror);
        // A point on `p`, reflected, lies on `r`.
        let on_p = p.normal * p.offset + Vec3::new(2.0, -1.0, 0.0).cross(&p.normal);
        assert!(close(p.signed_distance(on_p), 0.0, 1e-12));
        assert!(close(r.signed_distance(reflect_point(&mirror, on_p)), 0.0, 1e-12));
    }
}
