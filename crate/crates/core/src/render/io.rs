//! Pass files.
//!
//! | pass | file | encoding |
//! |------|------|----------|
//! | `rgb` | `{base}_rgb.png` | 8-bit RGB |
//! | `depth` | `{base}_depth.pfm` | `Pf`, one f32 per pixel, `inf` for sky |
//! | `normal` | `{base}_normal.pfm` | `PF`, three f32 per pixel |
//! | `instance` | `{base}_instance.png` | 16-bit grayscale |
//! | `reflected_instance` | `{base}_reflected_instance.png` | 16-bit grayscale |
//! | `mirror_mask` | `{base}_mirror_mask.png` | 8-bit grayscale, 0 or 255 |
//!
//! PFM files start with the ASCII header `PF\n` (color) or `Pf\n`
//! (grayscale), then `{width} {height}\n`, then `-1.0\n`; the negative
//! scale marks little-endian floats. Rows are stored bottom to top.

use std::io::Write;
use std::path::{Path, PathBuf};

use image::{ImageBuffer, Luma, Rgb as Px};

use super::RenderPasses;
use crate::error::{Error, Result};

pub const PASS_NAMES: [&str; 6] = [
    "rgb",
    "depth",
    "normal",
    "instance",
    "reflected_instance",
    "mirror_mask",
];

/// Paths written by [`encode_passes`], in [`PASS_NAMES`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct PassFiles {
    pub paths: Vec<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pfm {
    pub width: u32,
    pub height: u32,
    pub channels: usize,
    /// Row-major, top row first.
    pub data: Vec<f32>,
}

pub fn write_pfm(path: &Path, pfm: &Pfm) -> Result<()> {
    let tag = match pfm.channels {
        1 => "Pf",
        3 => "PF",
        c => return Err(Error::ShapeMismatch(format!("PFM needs 1 or 3 channels, got {c}"))),
    };
    let row = pfm.width as usize * pfm.channels;
    if pfm.data.len() != row * pfm.height as usize {
        return Err(Error::ShapeMismatch("PFM data length".into()));
    }
    let mut bytes = format!("{tag}\n{} {}\n-1.0\n", pfm.width, pfm.height).into_bytes();
    bytes.reserve(pfm.data.len() * 4);
    for r in pfm.data.chunks(row.max(1)).rev() {
        for v in r {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    write_file(path, &bytes)
}

pub fn read_pfm(path: &Path) -> Result<Pfm> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let bad = |m: &str| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: m.to_string(),
    };
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated PFM header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII PFM header"))?);
    }
    pos += 1;
    let channels = match fields[0] {
        "PF" => 3,
        "Pf" => 1,
        _ => return Err(bad("not a PFM file")),
    };
    let width: u32 = fields[1].parse().map_err(|_| bad("bad PFM width"))?;
    let height: u32 = fields[2].parse().map_err(|_| bad("bad PFM height"))?;
    let scale: f64 = fields[3].parse().map_err(|_| bad("bad PFM scale"))?;
    let row = width as usize * channels;
    let body = bytes.get(pos..).unwrap_or_default();
    if body.len() != row * height as usize * 4 {
        return Err(bad("PFM size does not match header"));
    }
    let floats: Vec<f32> = body
        .chunks_exact(4)
        .map(|b| {
            let a = [b[0], b[1], b[2], b[3]];
            if scale < 0.0 {
                f32::from_le_bytes(a)
            } else {
                f32::from_be_bytes(a)
            }
        })
        .collect();
    let mut data = Vec::with_capacity(floats.len());
    for r in floats.chunks(row.max(1)).rev() {
        data.extend_from_slice(r);
    }
    Ok(Pfm {
        width,
        height,
        channels,
        data,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    f.write_all(bytes)
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn save<P: image::PixelWithColorType>(img: &ImageBuffer<P, Vec<P::Subpixel>>, path: &Path) -> Result<()>
where
    [P::Subpixel]: image::EncodableLayout,
{
    img.save_with_format(path, image::ImageFormat::Png)
        .map_err(|e| Error::image(format!("writing {}", path.display()), e))
}

/// Writes the six pass files for one view into `out_dir`.
pub fn encode_passes(passes: &RenderPasses, out_dir: &Path, basename: &str) -> Result<PassFiles> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(format!("creating {}", out_dir.display()), e))?;
    let (w, h) = (passes.width, passes.height);
    let n = passes.pixel_count();
    let lens = [
        passes.rgb.len(),
        passes.depth.len(),
        passes.normal.len(),
        passes.instance.len(),
        passes.reflected_instance.len(),
        passes.mirror_mask.len(),
    ];
    if lens.iter().any(|&l| l != n) {
        return Err(Error::ShapeMismatch("render passes have inconsistent sizes".into()));
    }
    let path = |pass: &str, ext: &str| out_dir.join(format!("{basename}_{pass}.{ext}"));
    let paths = vec![
        path("rgb", "png"),
        path("depth", "pfm"),
        path("normal", "pfm"),
        path("instance", "png"),
        path("reflected_instance", "png"),
        path("mirror_mask", "png"),
    ];

    let rgb: ImageBuffer<Px<u8>, Vec<u8>> =
        ImageBuffer::from_raw(w, h, passes.rgb.iter().flatten().copied().collect()).expect("rgb size");
    save(&rgb, &paths[0])?;
    write_pfm(
        &paths[1],
        &Pfm {
            width: w,
            height: h,
            channels: 1,
            data: passes.depth.clone(),
        },
    )?;
    write_pfm(
        &paths[2],
        &Pfm {
            width: w,
            height: h,
            channels: 3,
            data: passes.normal.iter().flatten().copied().collect(),
        },
    )?;
    let inst: ImageBuffer<Luma<u16>, Vec<u16>> = ImageBuffer::from_raw(w, h, passes.instance.clone()).expect("size");
    save(&inst, &paths[3])?;
    let refl: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_raw(w, h, passes.reflected_instance.clone()).expect("size");
    save(&refl, &paths[4])?;
    let mask: ImageBuffer<Luma<u8>, Vec<u8>> = ImageBuffer::from_raw(
        w,
        h,
        passes
            .mirror_mask
            .iter()
            .map(|&m| if m > 0 { 255 } else { 0 })
            .collect(),
    )
    .expect("size");
    save(&mask, &paths[5])?;
    Ok(PassFiles { paths })
}

fn open(path: &Path) -> Result<image::DynamicImage> {
    image::open(path).map_err(|e| Error::image(format!("reading {}", path.display()), e))
}

/// Reads an RGB PNG as `(width, height, pixels)`.
pub fn read_rgb_png(path: &Path) -> Result<(u32, u32, Vec<[u8; 3]>)> {
    let img = open(path)?.to_rgb8();
    let px = img.pixels().map(|p| p.0).collect();
    Ok((img.width(), img.height(), px))
}

/// Reads a 16-bit id PNG.
pub fn read_id_png(path: &Path) -> Result<(u32, u32, Vec<u16>)> {
    let img = open(path)?.to_luma16();
    Ok((img.width(), img.height(), img.into_raw()))
}

/// Reads a mask PNG as 0/1 values.
pub fn read_mask_png(path: &Path) -> Result<(u32, u32, Vec<u8>)> {
    let img = open(path)?.to_luma8();
    Ok((
        img.width(),
        img.height(),
        img.pixels().map(|p| u8::from(p.0[0] > 127)).collect(),
    ))
}
