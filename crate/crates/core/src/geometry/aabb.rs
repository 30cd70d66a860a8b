use serde::{Deserialize, Serialize};

use super::{rotation_z, Vec3};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Self {
        Aabb { min, max }
    }

    pub fn empty() -> Self {
        Aabb {
            min: Vec3::repeat(f64::INFINITY),
            max: Vec3::repeat(f64::NEG_INFINITY),
        }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Vec3>) -> Option<Self> {
        let mut bb = Aabb::empty();
        let mut any = false;
        for p in points {
            bb.grow(*p);
            any = true;
        }
        any.then_some(bb)
    }

    #[inline]
    pub fn grow(&mut self, p: Vec3) {
        self.min = self.min.inf(&p);
        self.max = self.max.sup(&p);
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn extent(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn max_extent(&self) -> f64 {
        self.extent().max()
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] - tol && p[i] <= self.max[i] + tol)
    }

    /// Volume of the intersection; zero when the boxes only touch.
    pub fn overlap_volume(&self, other: &Aabb) -> f64 {
        (0..3)
            .map(|i| (self.max[i].min(other.max[i]) - self.min[i].max(other.min[i])).max(0.0))
            .product()
    }

    pub fn translated(&self, t: Vec3) -> Aabb {
        Aabb {
            min: self.min + t,
            max: self.max + t,
        }
    }

    /// Slab test; returns the parametric entry/exit interval clipped to `[t_min, t_max]`.
    pub fn ray_interval(&self, origin: Vec3, inv_dir: Vec3, t_min: f64, t_max: f64) -> Option<(f64, f64)> {
        let mut lo = t_min;
        let mut hi = t_max;
        for i in 0..3 {
            let t0 = (self.min[i] - origin[i]) * inv_dir[i];
            let t1 = (self.max[i] - origin[i]) * inv_dir[i];
            let (near, far) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
            // NaN from 0 * inf keeps the current bound.
            if near > lo {
                lo = near;
            }
            if far < hi {
                hi = far;
            }
            if lo > hi {
                return None;
            }
        }
        Some((lo, hi))
    }
}

/// Uniform scale, rotation about world z, then translation:
/// `x ↦ Rz(angle) · (scale · x) + translation`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Similarity {
    pub scale: f64,
    pub angle: f64,
    pub translation: Vec3,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity {
            scale: 1.0,
            angle: 0.0,
            translation: Vec3::zeros(),
        }
    }

    #[inline]
    pub fn apply(&self, p: &Vec3) -> Vec3 {
        rotation_z(self.angle) * (self.scale * p) + self.translation
    }

    /// Applies the linear part only, for directions and normals.
    pub fn apply_vector(&self, v: &Vec3) -> Vec3 {
        rotation_z(self.angle) * v
    }
}

/// Tight world-space box over every transformed vertex.
pub fn transformed_aabb(vertices: &[Vec3], xf: &Similarity) -> Result<Aabb> {
    let rot = rotation_z(xf.angle);
    let mut bb = Aabb::empty();
    if vertices.is_empty() {
        return Err(Error::EmptyMesh);
    }
    for v in vertices {
        bb.grow(rot * (xf.scale * v) + xf.translation);
    }
    Ok(bb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn unit_cube() -> Vec<Vec3> {
        let mut v = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    v.push(Vec3::new(x, y, z));
                }
            }
        }
        v
    }

    #[test]
    fn identity_cube() {
        let bb = transformed_aabb(&unit_cube(), &Similarity::identity()).unwrap();
        assert_eq!(bb.min, Vec3::zeros());
        assert_eq!(bb.max, Vec3::repeat(1.0));
    }

    #[test]
    fn rotated_cube_extent_is_sqrt2() {
        // Corners (1,0) and (0,1) rotate to x = ±√2/2; (0,0) and (1,1) to the y extremes.
        let xf = Similarity {
            angle: FRAC_PI_4,
            ..Similarity::identity()
        };
        let bb = transformed_aabb(&unit_cube(), &xf).unwrap();
        let e = bb.extent();
        assert!((e.x - 2f64.sqrt()).abs() < 1e-6);
        assert!((e.y - 2f64.sqrt()).abs() < 1e-6);
        assert!((e.z - 1.0).abs() < 1e-12);
    }

    #[test]
    fn translation_shifts_z_exactly() {
        let xf = Similarity {
            translation: Vec3::new(0.0, 0.0, -0.3),
            ..Similarity::identity()
        };
        let bb = transformed_aabb(&unit_cube(), &xf).unwrap();
        assert_eq!(bb.min.z, 0.0 - 0.3);
        assert_eq!(bb.max.z, 1.0 - 0.3);
    }

    #[test]
    fn empty_mesh_is_an_error() {
        assert!(matches!(
            transformed_aabb(&[], &Similarity::identity()),
            Err(Error::EmptyMesh)
        ));
    }

    #[test]
    fn overlap_rules() {
        let a = Aabb::new(Vec3::zeros(), Vec3::repeat(1.0));
        let far = a.translated(Vec3::repeat(2.0));
        let half = a.translated(Vec3::repeat(0.5));
        let face = a.translated(Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(a.overlap_volume(&far), 0.0);
        assert!((a.overlap_volume(&half) - 0.125).abs() < 1e-12);
        assert_eq!(a.overlap_volume(&face), 0.0);
    }

    fn vec3() -> impl Strategy<Value = Vec3> {
        (-5.0..5.0f64, -5.0..5.0f64, -5.0..5.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
    }

    proptest! {
        #[test]
        fn transformed_box_is_tight(
            pts in prop::collection::vec(vec3(), 1..40),
            scale in 0.1..3.0f64,
            angle in 0.0..std::f64::consts::TAU,
            t in vec3(),
        ) {
            let xf = Similarity { scale, angle, translation: t };
            let bb = transformed_aabb(&pts, &xf).unwrap();
            let world: Vec<Vec3> = pts.iter().map(|p| xf.apply(p)).collect();
            for w in &world {
                prop_assert!(bb.contains(*w, 1e-9));
            }
            for axis in 0..3 {
                prop_assert!(world.iter().any(|w| (w[axis] - bb.min[axis]).abs() <= 1e-6));
                prop_assert!(world.iter().any(|w| (w[axis] - bb.max[axis]).abs() <= 1e-6));
            }
        }
    }
}
