//! Shared geometric primitives.
//!
//! World convention: +z is up, the floor is the plane z = 0, and the mirror is
//! a vertical rectangle in a plane of constant y whose reflective side faces
//! +y. Rotations of placed objects are about the vertical axis.

mod aabb;
mod frustum;
mod plane;
mod polygon;
mod pose;
mod ray;

pub use aabb::{transformed_aabb, Aabb, Similarity};
pub use frustum::Frustum;
pub use plane::{reflect_point, reflection_transform, Plane};
pub use polygon::{convex_intersect, Polygon};
pub use pose::RigidPose;
pub use ray::{ray_triangle, Ray, TriangleHit};

pub type Vec3 = nalgebra::Vector3<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;
pub type Mat3 = nalgebra::Matrix3<f64>;
pub type Mat4 = nalgebra::Matrix4<f64>;

/// Minimum ray parameter accepted for secondary rays (self-intersection guard).
pub const EPS_RAY: f64 = 1e-4;

/// Tolerance for geometric predicates.
pub const EPS_GEOM: f64 = 1e-9;

/// Rotation about the world vertical axis.
pub fn rotation_z(angle: f64) -> Mat3 {
    let (s, c) = angle.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}
