//! Image metrics restricted to a mask: PSNR, SSIM, and the agreement
//! between a render's mirror region and its reflection oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::render::RenderPasses;

/// Returned by [`psnr`] when the masked images are identical.
pub const PSNR_CAP: f64 = 99.0;

/// Per-channel tolerance of [`oracle_match`], in 8-bit steps.
pub const MATCH_TOLERANCE: u8 = 2;

/// Pixels this close (Chebyshev distance) to a pixel outside the mirror mask
/// are left out of [`oracle_match`]: the mask edge plus a one-pixel band.
pub const MATCH_EROSION: u32 = 2;

/// Two RGB images and the mask selecting the pixels to compare.
#[derive(Clone, Copy, Debug)]
pub struct MaskedPair<'a> {
    pub width: u32,
    pub height: u32,
    pub a: &'a [[u8; 3]],
    pub b: &'a [[u8; 3]],
    pub mask: &'a [bool],
}

impl<'a> MaskedPair<'a> {
    pub fn new(width: u32, height: u32, a: &'a [[u8; 3]], b: &'a [[u8; 3]], mask: &'a [bool]) -> Result<Self> {
        let n = width as usize * height as usize;
        if a.len() != n || b.len() != n || mask.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n} pixels, got {} / {} / {} (a / b / mask)",
                a.len(),
                b.len(),
                mask.len()
            )));
        }
        if !mask.iter().any(|&m| m) {
            return Err(Error::EmptyMask);
        }
        Ok(MaskedPair {
            width,
            height,
            a,
            b,
            mask,
        })
    }
}

/// PSNR in dB over masked pixels, all channels weighted equally.
pub fn psnr(pair: &MaskedPair<'_>) -> f64 {
    let mut sum = 0.0;
    let mut count = 0usize;
    for ((pa, pb), &m) in pair.a.iter().zip(pair.b).zip(pair.mask) {
        if m {
            for k in 0..3 {
                let d = pa[k] as f64 - pb[k] as f64;
                sum += d * d;
            }
            count += 3;
        }
    }
    let mse = sum / count as f64;
    if mse < 1e-10 {
        return PSNR_CAP;
    }
    20.0 * 255f64.log10() - 10.0 * mse.log10()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SsimParams {
    /// Odd window side length.
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
        }
    }
}

fn luma(p: &[u8; 3]) -> f64 {
    0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64
}

/// Mean SSIM of the luma channels over windows centered on masked pixels.
///
/// Window statistics use the Gaussian weights of masked pixels only,
/// renormalized, so pixels outside the mask never influence the result.
pub fn ssim(pair: &MaskedPair<'_>, params: &SsimParams) -> f64 {
    let (w, h) = (pair.width as i64, pair.height as i64);
    let ya: Vec<f64> = pair.a.iter().map(luma).collect();
    let yb: Vec<f64> = pair.b.iter().map(luma).collect();
    let r = (params.window / 2) as i64;
    let kernel: Vec<f64> = (-r..=r)
        .map(|d| (-((d * d) as f64) / (2.0 * params.sigma * params.sigma)).exp())
        .collect();
    let c1 = (params.k1 * params.dynamic_range).powi(2);
    let c2 = (params.k2 * params.dynamic_range).powi(2);

    let mut total = 0.0;
    let mut windows = 0usize;
    for cy in 0..h {
        for cx in 0..w {
            if !pair.mask[(cy * w + cx) as usize] {
                continue;
            }
            let (mut sw, mut sa, mut sb, mut saa, mut sbb, mut sab) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
            for dy in -r..=r {
                let y = cy + dy;
                if y < 0 || y >= h {
                    continue;
                }
                for dx in -r..=r {
                    let x = cx + dx;
                    if x < 0 || x >= w {
                        continue;
                    }
                    let i = (y * w + x) as usize;
                    if !pair.mask[i] {
                        continue;
                    }
                    let k = kernel[(dy + r) as usize] * kernel[(dx + r) as usize];
                    let (a, b) = (ya[i], yb[i]);
                    sw += k;
                    sa += k * a;
                    sb += k * b;
                    saa += k * a * a;
                    sbb += k * b * b;
                    sab += k * a * b;
                }
            }
            let (ma, mb) = (sa / sw, sb / sw);
            let va = (saa / sw - ma * ma).max(0.0);
            let vb = (sbb / sw - mb * mb).max(0.0);
            let cov = sab / sw - ma * mb;
            total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
            windows += 1;
        }
    }
    total / windows as f64
}

/// Removes every pixel within Chebyshev distance `radius` of an unset pixel
/// or of the image border.
pub fn erode_mask(mask: &[bool], width: u32, height: u32, radius: u32) -> Vec<bool> {
    let (w, h, r) = (width as i64, height as i64, radius as i64);
    let mut out = vec![false; mask.len()];
    for y in 0..h {
        for x in 0..w {
            if !mask[(y * w + x) as usize] {
                continue;
            }
            let mut keep = true;
            'scan: for yy in y - r..=y + r {
                for xx in x - r..=x + r {
                    if yy < 0 || yy >= h || xx < 0 || xx >= w || !mask[(yy * w + xx) as usize] {
                        keep = false;
                        break 'scan;
                    }
                }
            }
            out[(y * w + x) as usize] = keep;
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleMatch {
    /// Fraction of compared pixels within [`MATCH_TOLERANCE`] on every channel.
    pub match_rate: f64,
    /// Largest per-channel difference among compared pixels.
    pub max_error: u8,
    /// Number of compared pixels.
    pub pixels: usize,
}

/// Compares the main render's mirror region with the oracle image over
/// valid pixels inside the eroded mirror mask.
pub fn oracle_match(main: &RenderPasses, oracle_rgb: &[[u8; 3]], validity: &[bool]) -> Result<OracleMatch> {
    oracle_match_images(
        main.width,
        main.height,
        &main.rgb,
        &main.mirror_mask,
        oracle_rgb,
        validity,
    )
}

/// [`oracle_match`] on raw images, e.g. read back from pass files.
pub fn oracle_match_images(
    width: u32,
    height: u32,
    rgb: &[[u8; 3]],
    mirror_mask: &[u8],
    oracle_rgb: &[[u8; 3]],
    validity: &[bool],
) -> Result<OracleMatch> {
    let n = width as usize * height as usize;
    if oracle_rgb.len() != n || validity.len() != n || rgb.len() != n || mirror_mask.len() != n {
        return Err(Error::ShapeMismatch("oracle and render sizes differ".into()));
    }
    let mask: Vec<bool> = mirror_mask.iter().map(|&m| m > 0).collect();
    let eroded = erode_mask(&mask, width, height, MATCH_EROSION);
    let mut pixels = 0usize;
    let mut matched = 0usize;
    let mut max_error = 0u8;
    for i in 0..n {
        if !(eroded[i] && validity[i]) {
            continue;
        }
        let err = (0..3).map(|k| rgb[i][k].abs_diff(oracle_rgb[i][k])).max().unwrap_or(0);
        max_error = max_error.max(err);
        pixels += 1;
        if err <= MATCH_TOLERANCE {
            matched += 1;
        }
    }
    if pixels == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(OracleMatch {
        match_rate: matched as f64 / pixels as f64,
        max_error,
        pixels,
    })
}

/// Metric values of one image pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMetrics {
    pub sample: usize,
    pub scene_id: String,
    pub view: usize,
    pub psnr: f64,
    pub ssim: f64,
    pub oracle_match: Option<f64>,
}

/// Per-image metrics averaged over a set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsSummary {
    pub count: usize,
    pub psnr: f64,
    pub ssim: f64,
    /// Mean over samples that have an oracle match value.
    pub oracle_match: Option<f64>,
}

/// Means of the per-sample values; each image counts once regardless of
/// its mask size.
pub fn aggregate(samples: &[SampleMetrics]) -> Result<MetricsSummary> {
    if samples.is_empty() {
        return Err(Error::EmptyMask);
    }
    let n = samples.len() as f64;
    let oracle: Vec<f64> = samples.iter().filter_map(|s| s.oracle_match).collect();
    Ok(MetricsSummary {
        count: samples.len(),
        psnr: samples.iter().map(|s| s.psnr).sum::<f64>() / n,
        ssim: samples.iter().map(|s| s.ssim).sum::<f64>() / n,
        oracle_match: (!oracle.is_empty()).then(|| oracle.iter().sum::<f64>() / oracle.len() as f64),
    })
}
