use super::{Vec3, EPS_RAY};

#[derive(Clone, Copy, Debug)]
pub struct Ray {
    pub origin: Vec3,
    pub dir: Vec3,
}

impl Ray {
    pub fn new(origin: Vec3, dir: Vec3) -> Self {
        Ray { origin, dir }
    }

    #[inline]
    pub fn at(&self, t: f64) -> Vec3 {
        self.origin + self.dir * t
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleHit {
    pub t: f64,
    /// Barycentric weights of the second and third vertices.
    pub u: f64,
    pub v: f64,
    /// Unit normal following the winding `(b - a) × (c - a)`.
    pub normal: Vec3,
}

/// Möller–Trumbore intersection accepting `t > EPS_RAY`.
///
/// Edges and vertices are closed (`u, v >= 0`, `u + v <= 1`), so a ray through
/// an edge shared by two triangles hits both; the caller breaks equal-`t`
/// ties by primitive index.
pub fn ray_triangle(origin: &Vec3, dir: &Vec3, tri: [&Vec3; 3]) -> Option<TriangleHit> {
    ray_triangle_range(origin, dir, tri, EPS_RAY, f64::INFINITY)
}

#[inline]
pub(crate) fn ray_triangle_range(
    origin: &Vec3,
    dir: &Vec3,
    [a, b, c]: [&Vec3; 3],
    t_min: f64,
    t_max: f64,
) -> Option<TriangleHit> {
    let e1 = b - a;
    let e2 = c - a;
    let p = dir.cross(&e2);
    let det = e1.dot(&p);
    if det.abs() < 1e-14 {
        return None;
    }
    let inv = 1.0 / det;
    let s = origin - a;
    let u = s.dot(&p) * inv;
    if !(0.0..=1.0).contains(&u) {
        return None;
    }
    let q = s.cross(&e1);
    let v = dir.dot(&q) * inv;
    if v < 0.0 || u + v > 1.0 {
        return None;
    }
    let t = e2.dot(&q) * inv;
    if t <= t_min || t >= t_max {
        return None;
    }
    Some(TriangleHit {
        t,
        u,
        v,
        normal: e1.cross(&e2).normalize(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hits_triangle_at_distance_one() {
        let a = Vec3::new(-1.0, -1.0, 0.0);
        let b = Vec3::new(1.0, -1.0, 0.0);
        let c = Vec3::new(0.0, 1.0, 0.0);
        let hit = ray_triangle(&Vec3::new(0.0, 0.0, -1.0), &Vec3::z(), [&a, &b, &c]).unwrap();
        assert_eq!(hit.t, 1.0);
        assert_eq!(hit.normal, Vec3::z());
    }

    #[test]
    fn parallel_ray_misses() {
        let a = Vec3::new(-1.0, -1.0, 0.0);
        let b = Vec3::new(1.0, -1.0, 0.0);
        let c = Vec3::new(0.0, 1.0, 0.0);
        assert!(ray_triangle(&Vec3::new(0.0, 0.0, 1.0), &Vec3::x(), [&a, &b, &c]).is_none());
    }

    #[test]
    fn shared_edge_hit_is_closed_and_repeatable() {
        // Two triangles sharing the diagonal x = y of the unit square.
        let p00 = Vec3::new(0.0, 0.0, 0.0);
        let p10 = Vec3::new(1.0, 0.0, 0.0);
        let p11 = Vec3::new(1.0, 1.0, 0.0);
        let p01 = Vec3::new(0.0, 1.0, 0.0);
        let origin = Vec3::new(0.5, 0.5, 1.0);
        let dir = -Vec3::z();
        let first: Vec<_> = (0..8)
            .map(|_| {
                (
                    ray_triangle(&origin, &dir, [&p00, &p10, &p11]),
                    ray_triangle(&origin, &dir, [&p00, &p11, &p01]),
                )
            })
            .collect();
        assert!(first[0].0.is_some() && first[0].1.is_some());
        assert!(first.iter().all(|r| *r == first[0]));
    }

    #[test]
    fn behind_origin_is_rejected() {
        let a = Vec3::new(-1.0, -1.0, 0.0);
        let b = Vec3::new(1.0, -1.0, 0.0);
        let c = Vec3::new(0.0, 1.0, 0.0);
        assert!(ray_triangle(&Vec3::new(0.0, 0.0, 1.0), &Vec3::z(), [&a, &b, &c]).is_none());
        // Within the self-intersection offset.
        assert!(ray_triangle(&Vec3::new(0.0, 0.0, -5e-5), &Vec3::z(), [&a, &b, &c]).is_none());
    }
}
