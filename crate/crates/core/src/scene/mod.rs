//! Scene description: mirror, area light, camera rig, and the serializable
//! [`SceneSpec`] that fully determines a render.

mod build;
mod rig;

use serde::{Deserialize, Serialize};

use crate::assets::Rgb;
use crate::geometry::{Plane, RigidPose, Vec2, Vec3};
use crate::placement::{GroundingMode, Placement, DEFAULT_MAX_ATTEMPTS};

pub use build::{build_scene, SceneBuilder, MIN_COVERAGE, VISIBILITY_ATTEMPTS};
pub use rig::{camera_rig, camera_rig_for, select_views, RIG_SIZE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MirrorKind {
    FullWall,
    TallRect,
}

/// Rectangle in the mirror plane, spanned by the plane's horizontal axis and
/// world vertical.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aperture {
    pub center: Vec3,
    pub half_width: f64,
    pub half_height: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MirrorSpec {
    pub kind: MirrorKind,
    /// Reflective side is the positive side of the plane.
    pub plane: Plane,
    pub aperture: Aperture,
    /// Width of a dark border around the aperture.
    pub frame: Option<f64>,
}

impl MirrorSpec {
    /// Unit vector along the aperture's width, pointing to the right of a
    /// viewer facing the reflective side: `z × normal`.
    pub fn horizontal_axis(&self) -> Vec3 {
        Vec3::z().cross(&self.plane.normal).normalize()
    }

    /// Corners counter-clockwise as seen from the reflective side.
    pub fn aperture_corners(&self) -> [Vec3; 4] {
        let h = self.horizontal_axis() * self.aperture.half_width;
        let v = Vec3::z() * self.aperture.half_height;
        let c = self.aperture.center;
        [c - h - v, c + h - v, c + h + v, c - h + v]
    }

    /// Whether a point of the mirror plane lies in the closed aperture.
    pub fn aperture_contains(&self, p: Vec3, tol: f64) -> bool {
        let d = p - self.aperture.center;
        d.dot(&self.horizontal_axis()).abs() <= self.aperture.half_width + tol
            && d.z.abs() <= self.aperture.half_height + tol
    }

    pub fn bottom(&self) -> f64 {
        self.aperture.center.z - self.aperture.half_height
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaLight {
    pub center: Vec3,
    pub half_extents: Vec2,
    /// Emitting side.
    pub normal: Vec3,
    pub radiance: Rgb,
}

impl AreaLight {
    /// In-plane axes `(u, v)` with `u` horizontal.
    pub fn axes(&self) -> (Vec3, Vec3) {
        let h = self.normal.cross(&Vec3::z());
        let u = if h.norm() > 1e-9 { h.normalize() } else { Vec3::x() };
        (u, self.normal.cross(&u))
    }

    pub fn area(&self) -> f64 {
        4.0 * self.half_extents.x * self.half_extents.y
    }

    /// Point at normalized coordinates `(a, b) ∈ [0, 1)²`.
    pub fn point(&self, a: f64, b: f64) -> Vec3 {
        let (u, v) = self.axes();
        self.center + u * ((2.0 * a - 1.0) * self.half_extents.x) + v * ((2.0 * b - 1.0) * self.half_extents.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraPose {
    pub pose: RigidPose,
    /// Radians.
    pub vertical_fov: f64,
    pub index: usize,
}

/// Everything needed to re-render a scene, given the catalog it was drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SceneSpec {
    pub scene_id: String,
    pub scene_index: u64,
    pub seed: u64,
    pub mirror: MirrorSpec,
    pub ground_z: f64,
    pub floor_texture_id: String,
    pub environment_id: String,
    pub light: AreaLight,
    pub placements: Vec<Placement>,
    pub views: [usize; 3],
    /// Poses of `views`, in the same order.
    pub cameras: Vec<CameraPose>,
    pub resolution: u32,
}

impl SceneSpec {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    pub fn from_json(text: &str) -> crate::Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::json("parsing scene", e))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RigConfig {
    /// Horizontal distance from the aperture center.
    pub radius: f64,
    /// Half-span of camera azimuths around the mirror normal, degrees.
    pub azimuth_half_span_deg: f64,
    /// Camera heights, cycled over the rig.
    pub heights: Vec<f64>,
    pub vertical_fov_deg: f64,
}

impl Default for RigConfig {
    fn default() -> Self {
        RigConfig {
            radius: 6.0,
            azimuth_half_span_deg: 14.0,
            heights: vec![2.2, 2.8, 3.4],
            vertical_fov_deg: 60.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorConfig {
    pub width: f64,
    pub height: f64,
    /// Height of the aperture's bottom edge above the floor.
    #[serde(default)]
    pub sill: f64,
    #[serde(default)]
    pub frame: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LightConfig {
    pub distance: f64,
    pub elevation_deg: f64,
    pub half_extent: f64,
    pub radiance: Rgb,
}

impl Default for LightConfig {
    fn default() -> Self {
        LightConfig {
            distance: 2.5,
            elevation_deg: 45.0,
            half_extent: 0.5,
            radiance: [14.0, 13.5, 12.5],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SceneConfig {
    pub rig: RigConfig,
    pub full_wall: MirrorConfig,
    pub tall_rect: MirrorConfig,
    pub light: LightConfig,
    pub ground_z: f64,
    pub multi_object_prob: f64,
    pub max_attempts: usize,
    pub grounding: GroundingMode,
    pub resolution: u32,
}

impl Default for SceneConfig {
    fn default() -> Self {
        SceneConfig {
            rig: RigConfig::default(),
            full_wall: MirrorConfig {
                width: 5.0,
                height: 3.0,
                sill: 0.0,
                frame: None,
            },
            tall_rect: MirrorConfig {
                width: 3.0,
                height: 3.4,
                sill: 0.0,
                frame: Some(0.05),
            },
            light: LightConfig::default(),
            ground_z: 0.0,
            multi_object_prob: 0.3,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            grounding: GroundingMode::Symmetric,
            resolution: 512,
        }
    }
}

impl SceneConfig {
    /// The mirror of one kind, in the plane y = 0 facing +y.
    pub fn mirror(&self, kind: MirrorKind) -> MirrorSpec {
        let m = match kind {
            MirrorKind::FullWall => &self.full_wall,
            MirrorKind::TallRect => &self.tall_rect,
        };
        MirrorSpec {
            kind,
            plane: Plane::new(Vec3::y(), 0.0),
            aperture: Aperture {
                center: Vec3::new(0.0, 0.0, self.ground_z + m.sill + 0.5 * m.height),
                half_width: 0.5 * m.width,
                half_height: 0.5 * m.height,
            },
            frame: m.frame,
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let bad = |msg: String| Err(crate::Error::FatalConfig(msg));
        if !(0.0..=1.0).contains(&self.multi_object_prob) {
            return bad(format!(
                "multi_object_prob {} is outside [0, 1]",
                self.multi_object_prob
            ));
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be at least 1".into());
        }
        if self.resolution == 0 {
            return bad("resolution must be positive".into());
        }
        for (name, m) in [("full_wall", &self.full_wall), ("tall_rect", &self.tall_rect)] {
            if !(m.width > 0.0 && m.height > 0.0 && m.sill >= 0.0) {
                return bad(format!("{name} mirror needs positive size and a non-negative sill"));
            }
            if m.frame.is_some_and(|f| f < 0.0) {
                return bad(format!("{name} frame width is negative"));
            }
        }
        let r = &self.rig;
        if !(r.radius > 0.0 && r.heights.iter().all(|h| *h > 0.0) && !r.heights.is_empty()) {
            return bad("rig needs a positive radius and positive heights".into());
        }
        if !(r.vertical_fov_deg > 0.0 && r.vertical_fov_deg < 180.0) {
            return bad("rig vertical_fov_deg must be in (0, 180)".into());
        }
        if !(r.azimuth_half_span_deg >= 0.0 && r.azimuth_half_span_deg < 90.0) {
            return bad("rig azimuth_half_span_deg must be in [0, 90)".into());
        }
        let l = &self.light;
        if !(l.distance > 0.0 && l.half_extent > 0.0 && l.radiance.iter().all(|c| c.is_finite() && *c >= 0.0)) {
            return bad("light needs positive distance and size and finite non-negative radiance".into());
        }
        Ok(())
    }
}
