//! Object placement: the visibility sampling region, unit-cube
//! normalization, position and rotation sampling, grounding, and
//! collision-resolved placement of a paired second object.

use std::f64::consts::{SQRT_2, TAU};

use serde::{Deserialize, Serialize};

use crate::assets::{Catalog, ObjectAsset, PairingTable};
use crate::error::{Error, Result};
use crate::geometry::{
    convex_intersect, rotation_z, transformed_aabb, Aabb, Frustum, Plane, Polygon, Similarity, Vec2, Vec3,
};
use crate::rng::Stream;
use crate::scene::{CameraPose, MirrorSpec};

/// Inward shrink of the sampling region: the circumradius of a unit cube's
/// footprint, so any rotation of a normalized object stays inside.
pub const REGION_MARGIN: f64 = 0.5 * SQRT_2;

/// Default bound on collision resamples in [`place_pair`].
pub const DEFAULT_MAX_ATTEMPTS: usize = 64;

/// Near and far distances of camera frusta used for region construction.
const CAMERA_NEAR: f64 = 0.01;
const CAMERA_FAR: f64 = 100.0;

/// Pose of one placed object: `world = Rz(rotation_angle) · (scale · v) + translation`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub asset_id: String,
    pub category: String,
    pub scale: f64,
    pub rotation_angle: f64,
    pub translation: Vec3,
    pub world_aabb: Aabb,
}

impl Placement {
    pub fn similarity(&self) -> Similarity {
        Similarity {
            scale: self.scale,
            angle: self.rotation_angle,
            translation: self.translation,
        }
    }

    /// Re-derives the world box from the asset's vertices.
    pub fn derive_aabb(&self, asset: &ObjectAsset) -> Result<Aabb> {
        transformed_aabb(&asset.vertices, &self.similarity())
    }
}

/// Whether grounding may also raise objects that sink below the floor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroundingMode {
    /// Lower floating objects and raise sunken ones.
    #[default]
    Symmetric,
    /// Only lower floating objects.
    LowerOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingRegion {
    /// Eroded region that positions are drawn from.
    pub polygon: Polygon,
    /// Intersection before erosion: every point here is visible directly
    /// and through the mirror from every camera.
    pub visible: Polygon,
    pub per_camera_polygons: Vec<Polygon>,
}

/// Scale that fits the asset's rest box into a unit cube.
pub fn normalize_scale(asset: &ObjectAsset) -> Result<f64> {
    let extent = asset.aabb()?.max_extent();
    if extent <= 1e-9 {
        return Err(Error::DegenerateMesh(extent));
    }
    Ok(1.0 / extent)
}

/// Camera frustum with a square image.
pub fn camera_frustum(camera: &CameraPose) -> Frustum {
    Frustum::perspective(&camera.pose, camera.vertical_fov, 1.0, CAMERA_NEAR, CAMERA_FAR)
}

/// Region of space whose mirror image the camera sees through the aperture:
/// the pyramid from the reflected eye through the aperture edges, on the
/// reflective side of the mirror, inside the reflected camera frustum.
pub fn mirror_frustum(mirror: &MirrorSpec, camera: &CameraPose) -> Frustum {
    let plane = mirror.plane;
    let virtual_eye = crate::geometry::reflect_point(&plane, camera.pose.translation);
    let corners = mirror.aperture_corners();
    let inside = mirror.aperture.center + plane.normal;
    let mut planes: Vec<Plane> = (0..4)
        .map(|i| Plane::through_points(virtual_eye, corners[i], corners[(i + 1) % 4], inside))
        .collect();
    planes.push(plane);
    planes.extend(camera_frustum(camera).reflected_by(&plane).planes);
    Frustum { planes }
}

pub fn compute_sampling_region(mirror: &MirrorSpec, rig: &[CameraPose], ground_z: f64) -> Result<SamplingRegion> {
    compute_sampling_region_with_margin(mirror, rig, ground_z, REGION_MARGIN)
}

pub fn compute_sampling_region_with_margin(
    mirror: &MirrorSpec,
    rig: &[CameraPose],
    ground_z: f64,
    margin: f64,
) -> Result<SamplingRegion> {
    if rig.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let per_camera: Vec<Polygon> = rig
        .iter()
        .map(|cam| {
            let direct = camera_frustum(cam).ground_section(ground_z);
            let reflected = mirror_frustum(mirror, cam).ground_section(ground_z);
            convex_intersect(&direct, &reflected)
        })
        .collect();
    let mut visible = per_camera[0].clone();
    for p in &per_camera[1..] {
        visible = convex_intersect(&visible, p);
    }
    let polygon = visible.eroded(margin);
    if polygon.area() <= 1e-9 {
        return Err(Error::EmptyRegion);
    }
    Ok(SamplingRegion {
        polygon,
        visible,
        per_camera_polygons: per_camera,
    })
}

/// Uniform point in the region: pick a fan triangle by area, then a uniform
/// barycentric point inside it.
pub fn sample_position(region: &Polygon, rng: &mut Stream) -> Result<Vec2> {
    let v = &region.vertices;
    let total = region.area();
    if v.len() < 3 || total <= 0.0 {
        return Err(Error::EmptyRegion);
    }
    let tri_area = |i: usize| 0.5 * (v[i] - v[0]).perp(&(v[i + 1] - v[0])).abs();
    let pick = rng.next_f64() * total;
    let r1 = rng.next_f64();
    let r2 = rng.next_f64();
    let mut acc = 0.0;
    let mut chosen = v.len() - 2;
    for i in 1..v.len() - 1 {
        acc += tri_area(i);
        if pick < acc {
            chosen = i;
            break;
        }
    }
    let (a, b, c) = (v[0], v[chosen], v[chosen + 1]);
    let s = r1.sqrt();
    Ok(a * (1.0 - s) + b * (s * (1.0 - r2)) + c * (s * r2))
}

/// Uniform angle in `[0, 2π)`.
pub fn sample_rotation(rng: &mut Stream) -> f64 {
    let a = rng.next_f64() * TAU;
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Lowest world z of the asset under scale and rotation, before translation.
fn lowest_z(asset: &ObjectAsset, scale: f64, angle: f64) -> f64 {
    let rot = rotation_z(angle);
    asset
        .vertices
        .iter()
        .map(|v| (rot * (scale * v)).z)
        .fold(f64::INFINITY, f64::min)
}

/// Moves the object vertically so its box rests on `ground_z`.
pub fn ground_object(
    placement: &Placement,
    asset: &ObjectAsset,
    ground_z: f64,
    mode: GroundingMode,
) -> Result<Placement> {
    let mut out = placement.clone();
    let low = lowest_z(asset, placement.scale, placement.rotation_angle);
    let gap = (low + placement.translation.z) - ground_z;
    let adjust = match mode {
        GroundingMode::Symmetric => gap != 0.0,
        GroundingMode::LowerOnly => gap > 0.0,
    };
    if adjust {
        out.translation.z = ground_z - low;
    }
    out.world_aabb = out.derive_aabb(asset)?;
    Ok(out)
}

/// Translation that puts the rotated rest-box center at `(x, y)` with the
/// object origin at height `z`.
fn centered_translation(asset_center: Vec3, scale: f64, angle: f64, at: Vec2, z: f64) -> Vec3 {
    let c = rotation_z(angle) * (scale * asset_center);
    Vec3::new(at.x - c.x, at.y - c.y, z)
}

/// Normalize, sample a position, sample a rotation, then ground.
pub fn place_object(
    asset: &ObjectAsset,
    region: &Polygon,
    rng: &mut Stream,
    ground_z: f64,
    mode: GroundingMode,
) -> Result<Placement> {
    let scale = normalize_scale(asset)?;
    let center = asset.aabb()?.center();
    let at = sample_position(region, rng)?;
    let angle = sample_rotation(rng);
    let mut p = Placement {
        asset_id: asset.id.clone(),
        category: asset.category.clone(),
        scale,
        rotation_angle: angle,
        translation: centered_translation(center, scale, angle, at, ground_z),
        world_aabb: Aabb::empty(),
    };
    p.world_aabb = p.derive_aabb(asset)?;
    ground_object(&p, asset, ground_z, mode)
}

/// True iff the boxes overlap with positive volume; touching faces do not collide.
pub fn aabb_collide(a: &Aabb, b: &Aabb) -> bool {
    (0..3).all(|i| a.max[i].min(b.max[i]) - a.min[i].max(b.min[i]) > 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairPlacement {
    pub primary: Placement,
    pub secondary: Placement,
    /// Number of secondary positions tried, including the first.
    pub attempts: usize,
}

pub struct PairRequest<'a> {
    pub catalog: &'a Catalog,
    pub pairing: &'a PairingTable,
    pub region: &'a Polygon,
    pub ground_z: f64,
    pub max_attempts: usize,
    pub mode: GroundingMode,
}

/// Places the primary object, draws a paired category and asset, places it,
/// and resamples only its position until the two boxes are disjoint.
pub fn place_pair(primary_asset: &ObjectAsset, req: &PairRequest<'_>, rng: &mut Stream) -> Result<PairPlacement> {
    if !req.pairing.has_pairing(&primary_asset.category) {
        return Err(Error::PairingUnavailable(primary_asset.category.clone()));
    }
    let primary = place_object(primary_asset, req.region, rng, req.ground_z, req.mode)?;
    let paired = req.pairing.paired_category(&primary_asset.category, rng)?.to_string();
    let secondary_asset = req.catalog.sample_asset(&paired, rng)?;
    let mut secondary = place_object(secondary_asset, req.region, rng, req.ground_z, req.mode)?;
    let center = secondary_asset.aabb()?.center();
    let mut attempts = 1;
    while aabb_collide(&primary.world_aabb, &secondary.world_aabb) {
        if attempts >= req.max_attempts {
            return Err(Error::PlacementFailed(attempts));
        }
        let at = sample_position(req.region, rng)?;
        let t = centered_translation(
            center,
            secondary.scale,
            secondary.rotation_angle,
            at,
            secondary.translation.z,
        );
        secondary.translation = t;
        secondary.world_aabb = secondary.derive_aabb(secondary_asset)?;
        attempts += 1;
    }
    Ok(PairPlacement {
        primary,
        secondary,
        attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assets::Albedo;

    fn box_asset(id: &str, category: &str, min: [f64; 3], max: [f64; 3]) -> ObjectAsset {
        let mut vertices = Vec::new();
        for i in 0..8 {
            vertices.push(Vec3::new(
                if i & 1 == 0 { min[0] } else { max[0] },
                if i & 2 == 0 { min[1] } else { max[1] },
                if i & 4 == 0 { min[2] } else { max[2] },
            ));
        }
        ObjectAsset {
            id: id.into(),
            category: category.into(),
            vertices,
            normals: None,
            uvs: None,
            triangles: vec![[0, 1, 2], [1, 3, 2], [4, 6, 5], [5, 6, 7]],
            albedo: Albedo::Color([0.5; 3]),
        }
    }

    fn square(side: f64) -> Polygon {
        Polygon::rectangle(Vec2::new(0.0, 0.0), Vec2::new(side, side))
    }

    #[test]
    fn normalization_examples() {
        let cube2 = box_asset("a", "c", [0.0; 3], [2.0; 3]);
        assert_eq!(normalize_scale(&cube2).unwrap(), 0.5);
        let slab = box_asset("a", "c", [0.0; 3], [0.5, 1.0, 4.0]);
        assert_eq!(normalize_scale(&slab).unwrap(), 0.25);
        let unit = box_asset("a", "c", [0.0; 3], [1.0; 3]);
        assert_eq!(normalize_scale(&unit).unwrap(), 1.0);
        let flat = box_asset("a", "c", [0.0; 3], [0.0; 3]);
        assert!(matches!(normalize_scale(&flat), Err(Error::DegenerateMesh(_))));
    }

    fn at_height(asset: &ObjectAsset, z: f64) -> Placement {
        let mut p = Placement {
            asset_id: asset.id.clone(),
            category: asset.category.clone(),
            scale: 1.0,
            rotation_angle: 0.0,
            translation: Vec3::new(0.0, 0.0, z),
            world_aabb: Aabb::empty(),
        };
        p.world_aabb = p.derive_aabb(asset).unwrap();
        p
    }

    #[test]
    fn grounding_lowers_floating_object() {
        let a = box_asset("a", "c", [0.0; 3], [1.0; 3]);
        let g = ground_object(&at_height(&a, 0.3), &a, 0.0, GroundingMode::LowerOnly).unwrap();
        assert!((g.translation.z - 0.0).abs() < 1e-12);
        assert_eq!(g.world_aabb.min.z, 0.0);
        // Relative to the floating pose the shift is −0.3.
        assert!((g.translation.z - 0.3 - -0.3).abs() < 1e-12);
    }

    #[test]
    fn grounding_keeps_resting_object() {
        let a = box_asset("a", "c", [0.0; 3], [1.0; 3]);
        let p = at_height(&a, 0.0);
        let g = ground_object(&p, &a, 0.0, GroundingMode::Symmetric).unwrap();
        assert_eq!(g, p);
    }

    #[test]
    fn grounding_raises_sunken_object_unless_strict() {
        let a = box_asset("a", "c", [0.0; 3], [1.0; 3]);
        let p = at_height(&a, -0.2);
        let g = ground_object(&p, &a, 0.0, GroundingMode::Symmetric).unwrap();
        assert!((g.translation.z - 0.2 - (p.translation.z)).abs() < 1e-12);
        assert_eq!(g.derive_aabb(&a).unwrap().min.z, 0.0);
        let strict = ground_object(&p, &a, 0.0, GroundingMode::LowerOnly).unwrap();
        assert_eq!(strict.translation.z, -0.2);
    }

    #[test]
    fn collision_examples() {
        let unit = Aabb::new(Vec3::zeros(), Vec3::repeat(1.0));
        assert!(!aabb_collide(&unit, &unit.translated(Vec3::repeat(2.0))));
        assert!(aabb_collide(&unit, &unit.translated(Vec3::repeat(0.5))));
        assert!(!aabb_collide(&unit, &unit.translated(Vec3::new(1.0, 0.0, 0.0))));
    }

    #[test]
    fn place_object_is_consistent() {
        let a = box_asset("cube", "c", [0.0; 3], [1.0; 3]);
        let region = square(4.0);
        let mut rng = Stream::new(7, "placement");
        let p = place_object(&a, &region, &mut rng, 0.0, GroundingMode::Symmetric).unwrap();
        assert_eq!(p.derive_aabb(&a).unwrap(), p.world_aabb);
        assert!(p.world_aabb.min.z.abs() <= 1e-9);
        let c = p.world_aabb.center();
        assert!(region.contains(Vec2::new(c.x, c.y), 1e-9));
    }

    #[test]
    fn sampled_points_are_inside() {
        let tri = Polygon::new(vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(3.0, 0.5),
            Vec2::new(1.0, 2.0),
            Vec2::new(-0.5, 1.0),
        ]);
        let mut rng = Stream::new(11, "pos");
        for _ in 0..2000 {
            let p = sample_position(&tri, &mut rng).unwrap();
            assert!(tri.contains(p, 1e-12));
        }
        assert!(matches!(
            sample_position(&Polygon::default(), &mut rng),
            Err(Error::EmptyRegion)
        ));
    }
}
