use std::path::Path;

use image::imageops::{self, FilterType};
use image::{Rgb, RgbImage};

use super::manifest::{Manifest, ManifestRow};
use crate::error::{Error, Result};
use crate::render::{read_id_png, read_mask_png, read_pfm, read_rgb_png};
use crate::rng::{mix64, Stream};

/// Side of one thumbnail in pixels.
pub const CONTACT_THUMB: u32 = 128;

fn from_pixels(w: u32, h: u32, px: impl Iterator<Item = [u8; 3]>) -> RgbImage {
    RgbImage::from_raw(w, h, px.flatten().collect()).expect("pixel count matches size")
}

/// Near depths bright, far depths dark, sky black.
fn depth_image(w: u32, h: u32, depth: &[f32]) -> RgbImage {
    let finite = depth.iter().copied().filter(|d| d.is_finite());
    let (lo, hi) = finite.fold((f32::INFINITY, f32::NEG_INFINITY), |(a, b), d| (a.min(d), b.max(d)));
    let span = (hi - lo).max(1e-6);
    from_pixels(
        w,
        h,
        depth.iter().map(|&d| {
            if !d.is_finite() {
                return [0, 0, 0];
            }
            let t = 1.0 - (d - lo) / span;
            [
                (255.0 * t) as u8,
                (200.0 * t + 30.0 * (1.0 - t)) as u8,
                (120.0 * (1.0 - t) + 40.0) as u8,
            ]
        }),
    )
}

fn id_color(id: u16) -> [u8; 3] {
    if id == 0 {
        return [0, 0, 0];
    }
    let h = mix64(u64::from(id));
    [(h >> 8) as u8 | 0x40, (h >> 24) as u8 | 0x40, (h >> 40) as u8 | 0x40]
}

fn row_images(m: &Manifest, row: &ManifestRow) -> Result<Vec<RgbImage>> {
    let (w, h, rgb) = read_rgb_png(&m.resolve(row.file("rgb")?))?;
    let depth = read_pfm(&m.resolve(row.file("depth")?))?;
    let normal = read_pfm(&m.resolve(row.file("normal")?))?;
    let (_, _, inst) = read_id_png(&m.resolve(row.file("instance")?))?;
    let (_, _, refl) = read_id_png(&m.resolve(row.file("reflected_instance")?))?;
    let (_, _, mask) = read_mask_png(&m.resolve(row.file("mirror_mask")?))?;
    let normals = normal
        .data
        .chunks_exact(3)
        .map(|n| [0, 1, 2].map(|k| ((n[k] * 0.5 + 0.5).clamp(0.0, 1.0) * 255.0).round() as u8));
    Ok(vec![
        from_pixels(w, h, rgb.into_iter()),
        depth_image(w, h, &depth.data),
        from_pixels(w, h, normals),
        from_pixels(w, h, inst.into_iter().map(id_color)),
        from_pixels(w, h, refl.into_iter().map(id_color)),
        from_pixels(w, h, mask.into_iter().map(|v| [v * 255; 3])),
    ])
}

/// Writes a `k × 6` grid (rgb, depth, normal, instance, reflected instance,
/// mirror mask) of `k` rows drawn without replacement under `seed`, in
/// manifest order.
pub fn contact_sheet(manifest_path: &Path, out_png: &Path, k: usize, seed: u64) -> Result<()> {
    let m = Manifest::load(manifest_path)?;
    if m.rows.is_empty() {
        return Err(Error::ManifestCorrupt("manifest has no rows".into()));
    }
    if k == 0 || k > m.rows.len() {
        return Err(Error::FatalConfig(format!(
            "cannot pick {k} rows from {}",
            m.rows.len()
        )));
    }
    let mut picks = Stream::new(seed, "contact_sheet").choose_distinct(m.rows.len(), k);
    picks.sort_unstable();

    let t = CONTACT_THUMB;
    let mut sheet = RgbImage::from_pixel(6 * t, k as u32 * t, Rgb([24, 24, 24]));
    for (r, &i) in picks.iter().enumerate() {
        for (c, img) in row_images(&m, &m.rows[i])?.into_iter().enumerate() {
            let filter = if c >= 3 {
                FilterType::Nearest
            } else {
                FilterType::Triangle
            };
            let thumb = imageops::resize(&img, t, t, filter);
            imageops::replace(&mut sheet, &thumb, i64::from(c as u32 * t), i64::from(r as u32 * t));
        }
    }
    if let Some(dir) = out_png.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    }
    sheet
        .save_with_format(out_png, image::ImageFormat::Png)
        .map_err(|e| Error::image(format!("writing {}", out_png.display()), e))
}
