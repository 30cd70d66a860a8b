//! Deterministic Whitted-style ray tracer.
//!
//! A [`PreparedScene`] holds world-space triangles in a BVH: a textured
//! floor, a back wall just behind the mirror plane, the mirror quad, an
//! optional dark frame, and the placed objects. [`render`] produces the six
//! ground-truth passes for one camera; [`render_reflection_oracle`] renders
//! the same scene from the mirrored camera so mirror pixels can be checked.
//!
//! Sampling is fully deterministic: pixel samples are the centers of an
//! `n × n` grid, and area-light samples are a Hammersley set shifted by a
//! hash of the pixel and sample index.

mod bvh;
mod camera;
mod environment;
mod io;
mod prepared;
mod trace;

use serde::{Deserialize, Serialize};

pub use camera::Camera;
pub use environment::{Environment, BUILTIN_ENVIRONMENTS};
pub use io::{
    encode_passes, read_id_png, read_mask_png, read_pfm, read_rgb_png, write_pfm, PassFiles, Pfm, PASS_NAMES,
};
pub use prepared::{builtin_floor, Hit, PreparedScene, SceneGeometry, SurfaceKind, BUILTIN_FLOOR};
pub use trace::{
    direct_irradiance, object_coverage, render, render_reflection_oracle, render_spec, shade, OracleRender,
    ShadeContext,
};

use crate::error::{Error, Result};

pub const SKY_ID: u16 = 0;
pub const FLOOR_ID: u16 = 1;
pub const WALL_ID: u16 = 2;
pub const MIRROR_ID: u16 = 3;
pub const FRAME_ID: u16 = 4;
/// Instance id of the first placed object; the k-th object gets `OBJECT_ID_BASE + k`.
pub const OBJECT_ID_BASE: u16 = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSettings {
    pub width: u32,
    pub height: u32,
    /// Perfect square; the pixel is split into a `√n × √n` grid.
    pub samples_per_pixel: u32,
    pub shadow_samples: u32,
    pub max_bounce: u32,
    pub gamma: f64,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            width: 512,
            height: 512,
            samples_per_pixel: 4,
            shadow_samples: 16,
            max_bounce: 3,
            gamma: 2.2,
        }
    }
}

impl RenderSettings {
    pub fn square(resolution: u32) -> Self {
        RenderSettings {
            width: resolution,
            height: resolution,
            ..Default::default()
        }
    }

    pub fn grid_size(&self) -> u32 {
        (self.samples_per_pixel as f64).sqrt().round() as u32
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid_size();
        if self.width == 0 || self.height == 0 {
            return Err(Error::FatalConfig("resolution must be positive".into()));
        }
        if self.samples_per_pixel == 0 || n * n != self.samples_per_pixel {
            return Err(Error::FatalConfig(format!(
                "samples_per_pixel {} is not a positive perfect square",
                self.samples_per_pixel
            )));
        }
        if self.shadow_samples == 0 {
            return Err(Error::FatalConfig("shadow_samples must be at least 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::FatalConfig("gamma must be positive".into()));
        }
        Ok(())
    }
}

/// Per-view ground truth, row-major with row 0 at the top.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderPasses {
    pub width: u32,
    pub height: u32,
    pub rgb: Vec<[u8; 3]>,
    /// Camera-space depth along the view axis; `+inf` where the sky is seen.
    pub depth: Vec<f32>,
    /// World-space unit normal facing the camera; zero for sky.
    pub normal: Vec<[f32; 3]>,
    pub instance: Vec<u16>,
    pub reflected_instance: Vec<u16>,
    /// 1 where the mirror is the first surface hit, else 0.
    pub mirror_mask: Vec<u8>,
}

impl RenderPasses {
    pub fn pixel_count(&self) -> usize {
        (self.width * self.height) as usize
    }

    /// Fraction of pixels with `instance == id`.
    pub fn coverage(&self, id: u16) -> f64 {
        self.instance.iter().filter(|&&i| i == id).count() as f64 / self.pixel_count() as f64
    }

    /// Fraction of pixels with `reflected_instance == id`.
    pub fn reflected_coverage(&self, id: u16) -> f64 {
        self.reflected_instance.iter().filter(|&&i| i == id).count() as f64 / self.pixel_count() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings_validation() {
        assert!(RenderSettings::default().validate().is_ok());
        let s = RenderSettings {
            samples_per_pixel: 3,
            ..Default::default()
        };
        assert!(s.validate().is_err());
        let s = RenderSettings {
            samples_per_pixel: 9,
            ..Default::default()
        };
        assert_eq!(s.grid_size(), 3);
    }
}
