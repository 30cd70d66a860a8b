//! Convex polygons in the ground plane.

use serde::{Deserialize, Serialize};

use super::{Vec2, EPS_GEOM};

/// Convex polygon with counter-clockwise vertices. An empty vertex list is
/// the empty set; fewer than three vertices is a degenerate (zero-area)
/// closed set such as a shared edge.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Vec2>) -> Self {
        let mut p = Polygon { vertices };
        p.cleanup();
        if p.signed_area() < 0.0 {
            p.vertices.reverse();
        }
        p
    }

    pub fn rectangle(min: Vec2, max: Vec2) -> Self {
        Polygon {
            vertices: vec![min, Vec2::new(max.x, min.y), max, Vec2::new(min.x, max.y)],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.x * b.y - b.x * a.y;
        }
        0.5 * acc
    }

    pub fn area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.vertices.len();
        let area = self.signed_area();
        if n < 3 || area.abs() < EPS_GEOM {
            let sum: Vec2 = self.vertices.iter().sum();
            return sum / n.max(1) as f64;
        }
        let mut c = Vec2::zeros();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let cross = a.x * b.y - b.x * a.y;
            c += (a + b) * cross;
        }
        c / (6.0 * area)
    }

    /// Closed containment test with tolerance `tol` on every edge.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        let n = self.vertices.len();
        match n {
            0 => false,
            1 => (self.vertices[0] - p).norm() <= tol,
            _ => {
                for i in 0..n {
                    let a = self.vertices[i];
                    let b = self.vertices[(i + 1) % n];
                    let edge = b - a;
                    let len = edge.norm();
                    if len <= EPS_GEOM {
                        continue;
                    }
                    let cross = edge.x * (p.y - a.y) - edge.y * (p.x - a.x);
                    if cross / len < -tol {
                        return false;
                    }
                }
                if n == 2 {
                    // Segment: also bound along its direction.
                    let a = self.vertices[0];
                    let d = self.vertices[1] - a;
                    let s = (p - a).dot(&d) / d.norm_squared();
                    let slack = tol / d.norm();
                    return s >= -slack && s <= 1.0 + slack;
                }
                true
            }
        }
    }

    /// Keeps the closed half-plane `dot(normal, p) >= offset`.
    pub fn clip_halfplane(&self, normal: Vec2, offset: f64) -> Polygon {
        let n = self.vertices.len();
        if n == 0 {
            return Polygon::default();
        }
        let scale = normal.norm().max(1.0);
        let dist = |p: &Vec2| (normal.dot(p) - offset) / scale;
        let mut out = Vec::with_capacity(n + 1);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let da = dist(&a);
            let db = dist(&b);
            let a_in = da >= -EPS_GEOM;
            let b_in = db >= -EPS_GEOM;
            if a_in {
                out.push(a);
            }
            if n > 1 && a_in != b_in && (da.abs() > EPS_GEOM || db.abs() > EPS_GEOM) {
                let t = da / (da - db);
                if t > 0.0 && t < 1.0 {
                    out.push(a + (b - a) * t);
                }
            }
        }
        let mut p = Polygon { vertices: out };
        p.cleanup();
        p
    }

    /// Shrinks the polygon by `margin`: every edge moves inward by that distance.
    pub fn eroded(&self, margin: f64) -> Polygon {
        if self.vertices.len() < 3 {
            return Polygon::default();
        }
        let mut out = self.clone();
        let n = self.vertices.len();
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let edge = b - a;
            let len = edge.norm();
            if len <= EPS_GEOM {
                continue;
            }
            let inward = Vec2::new(-edge.y, edge.x) / len;
            out = out.clip_halfplane(inward, inward.dot(&a) + margin);
            if out.is_empty() {
                break;
            }
        }
        if out.area() <= EPS_GEOM {
            return Polygon::default();
        }
        out
    }

    /// Removes repeated and collinear vertices.
    fn cleanup(&mut self) {
        let v = &mut self.vertices;
        v.dedup_by(|b, a| (*a - *b).norm() <= 1e-12);
        while v.len() > 1 && (v[0] - v[v.len() - 1]).norm() <= 1e-12 {
            v.pop();
        }
        if v.len() < 3 {
            return;
        }
        let mut i = 0;
        while v.len() >= 3 && i < v.len() {
            let n = v.len();
            let a = v[(i + n - 1) % n];
            let b = v[i];
            let c = v[(i + 1) % n];
            let cross = (b - a).perp(&(c - b));
            let scale = (b - a).norm() * (c - b).norm();
            if cross.abs() <= 1e-12 * scale.max(1e-300) && (b - a).dot(&(c - b)) >= 0.0 {
                v.remove(i);
            } else {
                i += 1;
            }
        }
    }
}

/// Intersection of two convex polygons (Sutherland–Hodgman, closed sets).
pub fn convex_intersect(a: &Polygon, b: &Polygon) -> Polygon {
    if a.is_empty() || b.is_empty() {
        return Polygon::default();
    }
    let n = b.vertices.len();
    if n < 3 {
        // Degenerate clipper: keep the part of it inside `a`.
        return convex_intersect(b, a);
    }
    let mut out = a.clone();
    for i in 0..n {
        let p = b.vertices[i];
        let q = b.vertices[(i + 1) % n];
        let edge = q - p;
        if edge.norm() <= EPS_GEOM {
            continue;
        }
        let inward = Vec2::new(-edge.y, edge.x);
        out = out.clip_halfplane(inward, inward.dot(&p));
        if out.is_empty() {
            break;
        }
    }
    if out.signed_area() < 0.0 {
        out.vertices.reverse();
    }
    out
}
