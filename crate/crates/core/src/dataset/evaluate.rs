use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::{Manifest, ManifestRow};
use crate::assets::Catalog;
use crate::error::{Error, Result};
use crate::metrics::{
    aggregate, oracle_match_images, psnr, ssim, MaskedPair, MetricsSummary, SampleMetrics, SsimParams,
};
use crate::render::{read_mask_png, read_rgb_png, render_reflection_oracle, PreparedScene, RenderSettings};
use crate::scene::SceneSpec;

/// Per-sample metrics and their means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub samples: Vec<SampleMetrics>,
    pub mean: MetricsSummary,
}

fn against_prediction(m: &Manifest, row: &ManifestRow, predictions: &Path) -> Result<SampleMetrics> {
    let rgb = row.file("rgb")?;
    let (w, h, truth) = read_rgb_png(&m.resolve(rgb))?;
    let (_, _, mask) = read_mask_png(&m.resolve(row.file("mirror_mask")?))?;
    let (pw, ph, pred) = read_rgb_png(&predictions.join(&rgb.path))?;
    if (pw, ph) != (w, h) {
        return Err(Error::ShapeMismatch(format!(
            "prediction for sample {} is {pw}x{ph}, expected {w}x{h}",
            row.sample
        )));
    }
    let mask: Vec<bool> = mask.iter().map(|&v| v > 0).collect();
    let pair = MaskedPair::new(w, h, &pred, &truth, &mask)?;
    Ok(SampleMetrics {
        sample: row.sample,
        scene_id: row.scene_id.clone(),
        view: row.view,
        psnr: psnr(&pair),
        ssim: ssim(&pair, &SsimParams::default()),
        oracle_match: row.oracle.map(|o| o.match_rate),
    })
}

fn against_oracle(m: &Manifest, row: &ManifestRow, scene: &PreparedScene, spec: &SceneSpec) -> Result<SampleMetrics> {
    let (w, h, rgb) = read_rgb_png(&m.resolve(row.file("rgb")?))?;
    let (_, _, mask) = read_mask_png(&m.resolve(row.file("mirror_mask")?))?;
    let c = &m.header.config;
    let settings = RenderSettings {
        width: w,
        height: h,
        samples_per_pixel: c.samples_per_pixel,
        shadow_samples: c.shadow_samples,
        max_bounce: c.max_bounce,
        gamma: c.gamma,
    };
    let view = spec
        .cameras
        .get(row.view)
        .ok_or_else(|| Error::ManifestCorrupt(format!("sample {} names a missing view", row.sample)))?;
    let oracle = render_reflection_oracle(scene, view, &settings)?;
    let region: Vec<bool> = mask.iter().zip(&oracle.valid).map(|(&m, &v)| m > 0 && v).collect();
    let pair = MaskedPair::new(w, h, &rgb, &oracle.rgb, &region)?;
    let matched = oracle_match_images(w, h, &rgb, &mask, &oracle.rgb, &oracle.valid)?;
    Ok(SampleMetrics {
        sample: row.sample,
        scene_id: row.scene_id.clone(),
        view: row.view,
        psnr: psnr(&pair),
        ssim: ssim(&pair, &SsimParams::default()),
        oracle_match: Some(matched.match_rate),
    })
}

/// Masked-region PSNR and SSIM for every sample of a dataset, averaged
/// over samples.
///
/// With `predictions`, each sample's RGB is compared with the image at the
/// same relative path under that directory, and the oracle match stored at
/// generation is reported. Without, the RGB is compared with a fresh
/// reflection oracle render over valid mirror pixels.
pub fn evaluate_metrics(
    manifest_path: &Path,
    predictions: Option<&Path>,
    catalog: Option<&Path>,
) -> Result<MetricsReport> {
    let m = Manifest::load(manifest_path)?;
    if m.rows.is_empty() {
        return Err(Error::ManifestCorrupt("manifest has no rows".into()));
    }
    let samples: Vec<SampleMetrics> = match predictions {
        Some(dir) => m
            .rows
            .par_iter()
            .map(|r| against_prediction(&m, r, dir))
            .collect::<Result<_>>()?,
        None => {
            let catalog_path = catalog
                .map(Path::to_path_buf)
                .unwrap_or_else(|| m.header.config.catalog_path());
            let catalog = Catalog::load(&catalog_path)
                .map_err(|e| Error::FatalConfig(format!("cannot load catalog {}: {e}", catalog_path.display())))?;
            let mut scenes: BTreeMap<&str, (SceneSpec, PreparedScene)> = BTreeMap::new();
            for r in &m.rows {
                if !scenes.contains_key(r.scene_id.as_str()) {
                    let path = m.resolve(&r.scene_file);
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
                    let spec = SceneSpec::from_json(&text)?;
                    let prepared = PreparedScene::new(&spec, &catalog)?;
                    scenes.insert(&r.scene_id, (spec, prepared));
                }
            }
            m.rows
                .par_iter()
                .map(|r| {
                    let (spec, prepared) = &scenes[r.scene_id.as_str()];
                    against_oracle(&m, r, prepared, spec)
                })
                .collect::<Result<_>>()?
        }
    };
    let mean = aggregate(&samples)?;
    Ok(MetricsReport { samples, mean })
}
