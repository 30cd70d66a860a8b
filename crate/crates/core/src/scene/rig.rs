use crate::geometry::{RigidPose, Vec3};
use crate::rng::Stream;

use super::{CameraPose, MirrorKind, RigConfig, SceneConfig};

pub const RIG_SIZE: usize = 19;

/// The default rig, aimed at the default mirror.
pub fn camera_rig() -> Vec<CameraPose> {
    let cfg = SceneConfig::default();
    camera_rig_for(&cfg.rig, cfg.mirror(MirrorKind::FullWall).aperture.center)
}

/// Nineteen cameras on a horizontal arc around `target`'s ground projection,
/// on the +y side, azimuths evenly spaced over ±half-span, heights cycling
/// through the configured list, each looking at `target`.
pub fn camera_rig_for(rig: &RigConfig, target: Vec3) -> Vec<CameraPose> {
    let span = rig.azimuth_half_span_deg.to_radians();
    (0..RIG_SIZE)
        .map(|i| {
            let phi = -span + 2.0 * span * i as f64 / (RIG_SIZE - 1) as f64;
            let height = rig.heights[i % rig.heights.len()];
            let eye = Vec3::new(
                target.x + rig.radius * phi.sin(),
                target.y + rig.radius * phi.cos(),
                height,
            );
            CameraPose {
                pose: RigidPose::look_at(eye, target, Vec3::z()),
                vertical_fov: rig.vertical_fov_deg.to_radians(),
                index: i,
            }
        })
        .collect()
}

/// Three distinct rig indices, uniformly without replacement.
pub fn select_views(rng: &mut Stream) -> [usize; 3] {
    let v = rng.choose_distinct(RIG_SIZE, 3);
    [v[0], v[1], v[2]]
}
