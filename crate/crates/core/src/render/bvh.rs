//! Median-split bounding volume hierarchy over triangles.

use crate::geometry::{Aabb, Vec3};

const LEAF_SIZE: usize = 4;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Triangle {
    pub a: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
}

impl Triangle {
    pub fn new(a: Vec3, b: Vec3, c: Vec3) -> Self {
        Triangle {
            a,
            e1: b - a,
            e2: c - a,
        }
    }

    fn bounds(&self) -> Aabb {
        let mut bb = Aabb::new(self.a, self.a);
        bb.grow(self.a + self.e1);
        bb.grow(self.a + self.e2);
        bb
    }

    /// Möller–Trumbore with closed edges, accepting `t_min < t <= t_max`.
    #[inline]
    pub fn intersect(&self, origin: &Vec3, dir: &Vec3, t_min: f64, t_max: f64) -> Option<(f64, f64, f64)> {
        let p = dir.cross(&self.e2);
        let det = self.e1.dot(&p);
        if det.abs() < 1e-14 {
            return None;
        }
        let inv = 1.0 / det;
        let s = origin - self.a;
        let u = s.dot(&p) * inv;
        if !(0.0..=1.0).contains(&u) {
            return None;
        }
        let q = s.cross(&self.e1);
        let v = dir.dot(&q) * inv;
        if v < 0.0 || u + v > 1.0 {
            return None;
        }
        let t = self.e2.dot(&q) * inv;
        if t <= t_min || t > t_max {
            return None;
        }
        Some((t, u, v))
    }
}

#[derive(Clone, Copy, Debug)]
struct Node {
    bounds: Aabb,
    /// Leaf: first entry in `order`. Interior: index of the right child
    /// (the left child follows the node directly).
    offset: u32,
    /// Zero for interior nodes.
    count: u32,
    axis: u8,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct BvhHit {
    pub t: f64,
    pub prim: u32,
    pub u: f64,
    pub v: f64,
}

#[derive(Clone, Debug)]
pub(crate) struct Bvh {
    nodes: Vec<Node>,
    order: Vec<u32>,
}

impl Bvh {
    pub fn build(tris: &[Triangle]) -> Self {
        let bounds: Vec<Aabb> = tris.iter().map(Triangle::bounds).collect();
        let centroids: Vec<Vec3> = bounds.iter().map(Aabb::center).collect();
        let mut order: Vec<u32> = (0..tris.len() as u32).collect();
        let mut nodes = Vec::with_capacity(2 * tris.len() / LEAF_SIZE + 1);
        if !tris.is_empty() {
            build_node(&mut nodes, &mut order, 0, &bounds, &centroids);
        }
        Bvh { nodes, order }
    }

    /// Nearest hit with `t_min < t <= t_max`; equal distances go to the lower
    /// primitive index. `skip` filters primitives out.
    pub fn closest(
        &self,
        tris: &[Triangle],
        origin: &Vec3,
        dir: &Vec3,
        t_min: f64,
        t_max: f64,
        skip: impl Fn(u32) -> bool,
    ) -> Option<BvhHit> {
        if self.nodes.is_empty() {
            return None;
        }
        let inv = dir.map(|d| 1.0 / d);
        let mut best: Option<BvhHit> = None;
        let mut limit = t_max;
        let mut stack = [0u32; 64];
        let mut sp = 1;
        while sp > 0 {
            sp -= 1;
            let node = &self.nodes[stack[sp] as usize];
            if node.bounds.ray_interval(*origin, inv, t_min, limit).is_none() {
                continue;
            }
            if node.count > 0 {
                let start = node.offset as usize;
                for &prim in &self.order[start..start + node.count as usize] {
                    if skip(prim) {
                        continue;
                    }
                    if let Some((t, u, v)) = tris[prim as usize].intersect(origin, dir, t_min, limit) {
                        let better = match best {
                            None => true,
                            Some(b) => t < b.t || (t == b.t && prim < b.prim),
                        };
                        if better {
                            best = Some(BvhHit { t, prim, u, v });
                            limit = t;
                        }
                    }
                }
            } else {
                let left = stack[sp] + 1;
                let right = node.offset;
                // Visit the child on the ray's near side first.
                let (first, second) = if dir[node.axis as usize] >= 0.0 {
                    (left, right)
                } else {
                    (right, left)
                };
                stack[sp] = second;
                stack[sp + 1] = first;
                sp += 2;
            }
        }
        best
    }

    /// Whether any primitive is hit with `t_min < t < t_max`.
    pub fn occluded(&self, tris: &[Triangle], origin: &Vec3, dir: &Vec3, t_min: f64, t_max: f64) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let inv = dir.map(|d| 1.0 / d);
        let mut stack = [0u32; 64];
        let mut sp = 1;
        while sp > 0 {
            sp -= 1;
            let idx = stack[sp];
            let node = &self.nodes[idx as usize];
            if node.bounds.ray_interval(*origin, inv, t_min, t_max).is_none() {
                continue;
            }
            if node.count > 0 {
                let start = node.offset as usize;
                for &prim in &self.order[start..start + node.count as usize] {
                    if let Some((t, _, _)) = tris[prim as usize].intersect(origin, dir, t_min, t_max) {
                        if t < t_max {
                            return true;
                        }
                    }
                }
            } else {
                stack[sp] = idx + 1;
                stack[sp + 1] = node.offset;
                sp += 2;
            }
        }
        false
    }
}

fn build_node(nodes: &mut Vec<Node>, order: &mut [u32], start: usize, bounds: &[Aabb], centroids: &[Vec3]) -> usize {
    let mut bb = Aabb::empty();
    let mut cb = Aabb::empty();
    for &i in order.iter() {
        bb = bb.union(&bounds[i as usize]);
        cb.grow(centroids[i as usize]);
    }
    let me = nodes.len();
    nodes.push(Node {
        bounds: bb,
        offset: start as u32,
        count: order.len() as u32,
        axis: 0,
    });
    let ext = cb.extent();
    let axis = if ext.x >= ext.y && ext.x >= ext.z {
        0
    } else if ext.y >= ext.z {
        1
    } else {
        2
    };
    if order.len() <= LEAF_SIZE || ext[axis] <= 0.0 {
        return me;
    }
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        centroids[a as usize][axis]
            .total_cmp(&centroids[b as usize][axis])
            .then(a.cmp(&b))
    });
    let (lo, hi) = order.split_at_mut(mid);
    build_node(nodes, lo, start, bounds, centroids);
    let right = build_node(nodes, hi, start + mid, bounds, centroids);
    nodes[me].offset = right as u32;
    nodes[me].count = 0;
    nodes[me].axis = axis as u8;
    me
}
