use std::path::Path;
use std::sync::Arc;

use image::RgbImage;

use crate::error::{Error, Result};
use crate::geometry::{Aabb, Vec2, Vec3};

/// Linear RGB in `[0, 1]`.
pub type Rgb = [f64; 3];

/// Gamma used to linearize 8-bit texture files.
const TEXTURE_GAMMA: f64 = 2.2;

/// A decoded image with linear texels, sampled with wrap-around addressing.
#[derive(Clone, Debug)]
pub struct Texture {
    pub width: u32,
    pub height: u32,
    texels: Vec<Rgb>,
}

impl Texture {
    pub fn from_image(img: &RgbImage) -> Self {
        let texels = img
            .pixels()
            .map(|p| {
                [
                    (p[0] as f64 / 255.0).powf(TEXTURE_GAMMA),
                    (p[1] as f64 / 255.0).powf(TEXTURE_GAMMA),
                    (p[2] as f64 / 255.0).powf(TEXTURE_GAMMA),
                ]
            })
            .collect();
        Texture {
            width: img.width(),
            height: img.height(),
            texels,
        }
    }

    pub fn load_png(path: &Path) -> Result<Self> {
        let img = image::open(path)
            .map_err(|e| Error::image(format!("reading texture {}", path.display()), e))?
            .to_rgb8();
        if img.width() == 0 || img.height() == 0 {
            return Err(Error::InvalidCatalog(format!("texture {} is empty", path.display())));
        }
        Ok(Texture::from_image(&img))
    }

    #[inline]
    fn texel(&self, x: i64, y: i64) -> Rgb {
        let w = self.width as i64;
        let h = self.height as i64;
        let xi = x.rem_euclid(w) as usize;
        let yi = y.rem_euclid(h) as usize;
        self.texels[yi * self.width as usize + xi]
    }

    /// Bilinear lookup; `(0, 0)` is the top-left corner and the image repeats.
    pub fn sample(&self, u: f64, v: f64) -> Rgb {
        let x = u * self.width as f64 - 0.5;
        let y = v * self.height as f64 - 0.5;
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let (x0, y0) = (x0 as i64, y0 as i64);
        let a = self.texel(x0, y0);
        let b = self.texel(x0 + 1, y0);
        let c = self.texel(x0, y0 + 1);
        let d = self.texel(x0 + 1, y0 + 1);
        let mut out = [0.0; 3];
        for i in 0..3 {
            let top = a[i] + (b[i] - a[i]) * fx;
            let bottom = c[i] + (d[i] - c[i]) * fx;
            out[i] = top + (bottom - top) * fy;
        }
        out
    }

    pub fn mean(&self) -> Rgb {
        let mut acc = [0.0; 3];
        for t in &self.texels {
            for i in 0..3 {
                acc[i] += t[i];
            }
        }
        let n = self.texels.len() as f64;
        acc.map(|x| x / n)
    }
}

/// Surface color of an object: flat, or a diffuse map addressed by UVs.
#[derive(Clone, Debug)]
pub enum Albedo {
    Color(Rgb),
    Texture(Arc<Texture>),
}

/// A triangle mesh with a semantic label.
#[derive(Clone, Debug)]
pub struct ObjectAsset {
    pub id: String,
    pub category: String,
    pub vertices: Vec<Vec3>,
    /// Per-vertex unit normals; when absent, flat face normals are used.
    pub normals: Option<Vec<Vec3>>,
    pub uvs: Option<Vec<Vec2>>,
    pub triangles: Vec<[u32; 3]>,
    pub albedo: Albedo,
}

impl ObjectAsset {
    /// Rest-pose bounding box.
    pub fn aabb(&self) -> Result<Aabb> {
        Aabb::from_points(&self.vertices).ok_or(Error::EmptyMesh)
    }

    pub fn triangle(&self, i: usize) -> [&Vec3; 3] {
        let [a, b, c] = self.triangles[i];
        [
            &self.vertices[a as usize],
            &self.vertices[b as usize],
            &self.vertices[c as usize],
        ]
    }

    pub fn face_normals(&self) -> Vec<Vec3> {
        (0..self.triangles.len())
            .map(|i| {
                let [a, b, c] = self.triangle(i);
                let n = (b - a).cross(&(c - a));
                let len = n.norm();
                if len > 0.0 {
                    n / len
                } else {
                    Vec3::z()
                }
            })
            .collect()
    }

    /// Checks index ranges, triangle count and normal lengths.
    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::EmptyMesh);
        }
        if self.triangles.is_empty() {
            return Err(Error::InvalidCatalog(format!("asset `{}` has no triangles", self.id)));
        }
        let n = self.vertices.len() as u32;
        if self.triangles.iter().flatten().any(|&i| i >= n) {
            return Err(Error::InvalidCatalog(format!(
                "asset `{}` has out-of-range indices",
                self.id
            )));
        }
        if let Some(normals) = &self.normals {
            if normals.len() != self.vertices.len() || normals.iter().any(|v| (v.norm() - 1.0).abs() > 1e-3) {
                return Err(Error::InvalidCatalog(format!(
                    "asset `{}` has invalid normals",
                    self.id
                )));
            }
        }
        if let Some(uvs) = &self.uvs {
            if uvs.len() != self.vertices.len() {
                return Err(Error::InvalidCatalog(format!("asset `{}` has invalid uvs", self.id)));
            }
        }
        Ok(())
    }
}
