use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::manifest::{sha256_file, Manifest, ManifestRow};
use crate::assets::Catalog;
use crate::error::{Error, Result};
use crate::metrics::oracle_match_images;
use crate::render::{
    read_id_png, read_mask_png, read_rgb_png, render_reflection_oracle, PreparedScene, RenderSettings, OBJECT_ID_BASE,
};
use crate::scene::{SceneSpec, MIN_COVERAGE};

/// Largest allowed distance between an object's lowest point and the floor.
pub const GROUNDING_TOLERANCE: f64 = 1e-6;

/// Smallest oracle match rate a view must reach.
pub const ORACLE_MIN_MATCH: f64 = 0.99;

/// Check names, in report order.
pub const CHECKS: [&str; 6] = ["structure", "digest", "grounding", "disjoint", "visibility", "oracle"];

/// Lowest point of each placed object minus the floor height.
pub fn grounding_gaps(spec: &SceneSpec, catalog: &Catalog) -> Result<Vec<f64>> {
    spec.placements
        .iter()
        .map(|p| {
            let asset = catalog.asset(&p.asset_id)?;
            let xf = p.similarity();
            let low = asset
                .vertices
                .iter()
                .map(|v| xf.apply(v).z)
                .fold(f64::INFINITY, f64::min);
            Ok(low - spec.ground_z)
        })
        .collect()
}

/// Pairs of placements whose re-derived boxes overlap with positive volume.
pub fn overlapping_pairs(spec: &SceneSpec, catalog: &Catalog) -> Result<Vec<(usize, usize, f64)>> {
    let boxes = spec
        .placements
        .iter()
        .map(|p| p.derive_aabb(catalog.asset(&p.asset_id)?))
        .collect::<Result<Vec<_>>>()?;
    let mut out = Vec::new();
    for i in 0..boxes.len() {
        for j in i + 1..boxes.len() {
            let v = boxes[i].overlap_volume(&boxes[j]);
            if v > 0.0 {
                out.push((i, j, v));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub scene_id: String,
    /// Manifest sample number, for per-view checks.
    pub sample: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub rows: usize,
    pub scenes: usize,
    /// Grounding, disjoint and structure count scenes; the others count rows.
    pub checks: BTreeMap<String, CheckSummary>,
    pub failures: Vec<Failure>,
    pub ok: bool,
}

impl ValidationReport {
    pub fn failed_checks(&self) -> BTreeSet<&str> {
        self.failures.iter().map(|f| f.check.as_str()).collect()
    }
}

struct Outcome {
    check: &'static str,
    failure: Option<(Option<usize>, String)>,
}

fn pass(check: &'static str) -> Outcome {
    Outcome { check, failure: None }
}

fn fail(check: &'static str, sample: Option<usize>, detail: String) -> Outcome {
    Outcome {
        check,
        failure: Some((sample, detail)),
    }
}

fn check_digest(m: &Manifest, row: &ManifestRow) -> Outcome {
    let mut bad = Vec::new();
    for f in row.all_files() {
        match sha256_file(&m.resolve(f)) {
            Ok(d) if d == f.sha256 => {}
            Ok(_) => bad.push(format!("{}: digest mismatch", f.path)),
            Err(_) => bad.push(format!("{}: missing", f.path)),
        }
    }
    if bad.is_empty() {
        pass("digest")
    } else {
        fail("digest", Some(row.sample), bad.join("; "))
    }
}

fn check_visibility(m: &Manifest, row: &ManifestRow, count: usize) -> Result<Outcome> {
    let (_, _, inst) = read_id_png(&m.resolve(row.file("instance")?))?;
    let (_, _, refl) = read_id_png(&m.resolve(row.file("reflected_instance")?))?;
    let n = inst.len().max(1) as f64;
    let mut bad = Vec::new();
    for k in 0..count {
        let id = OBJECT_ID_BASE + k as u16;
        let direct = inst.iter().filter(|&&i| i == id).count() as f64 / n;
        let reflected = refl.iter().filter(|&&i| i == id).count() as f64 / n;
        if direct < MIN_COVERAGE || reflected < MIN_COVERAGE {
            bad.push(format!(
                "object {k}: coverage {direct:.4} direct, {reflected:.4} reflected"
            ));
        }
    }
    Ok(if bad.is_empty() {
        pass("visibility")
    } else {
        fail("visibility", Some(row.sample), bad.join("; "))
    })
}

fn check_oracle(m: &Manifest, row: &ManifestRow, scene: &PreparedScene, spec: &SceneSpec) -> Result<Outcome> {
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
    let Some(view) = spec.cameras.get(row.view) else {
        return Ok(fail(
            "oracle",
            Some(row.sample),
            format!("scene has no view {}", row.view),
        ));
    };
    let oracle = render_reflection_oracle(scene, view, &settings)?;
    Ok(
        match oracle_match_images(w, h, &rgb, &mask, &oracle.rgb, &oracle.valid) {
            Ok(r) if r.match_rate >= ORACLE_MIN_MATCH => pass("oracle"),
            Ok(r) => fail(
                "oracle",
                Some(row.sample),
                format!("match rate {:.4}, max error {}", r.match_rate, r.max_error),
            ),
            Err(e) => fail("oracle", Some(row.sample), e.to_string()),
        },
    )
}

fn check_scene(m: &Manifest, catalog: &Catalog, rows: &[&ManifestRow]) -> Vec<Outcome> {
    let mut out: Vec<Outcome> = rows.iter().map(|r| check_digest(m, r)).collect();
    let first = rows[0];
    let spec = std::fs::read_to_string(m.resolve(&first.scene_file))
        .map_err(|e| e.to_string())
        .and_then(|t| SceneSpec::from_json(&t).map_err(|e| e.to_string()));
    let spec = match spec {
        Ok(s) => s,
        Err(e) => {
            let detail = format!("scene file unreadable: {e}");
            for check in ["structure", "grounding", "disjoint"] {
                out.push(fail(check, None, detail.clone()));
            }
            for r in rows {
                out.push(fail("visibility", Some(r.sample), detail.clone()));
                out.push(fail("oracle", Some(r.sample), detail.clone()));
            }
            return out;
        }
    };

    let views: BTreeSet<usize> = rows.iter().map(|r| r.view).collect();
    let structure_ok = rows.len() == spec.cameras.len()
        && views.len() == rows.len()
        && rows
            .iter()
            .all(|r| r.placements.len() == spec.placements.len() && r.scene_file == first.scene_file);
    out.push(if structure_ok {
        pass("structure")
    } else {
        fail(
            "structure",
            None,
            format!("{} rows for {} views", rows.len(), spec.cameras.len()),
        )
    });

    out.push(match grounding_gaps(&spec, catalog) {
        Ok(g) if g.iter().all(|d| d.abs() <= GROUNDING_TOLERANCE) => pass("grounding"),
        Ok(g) => fail("grounding", None, format!("lowest point minus floor per object: {g:?}")),
        Err(e) => fail("grounding", None, e.to_string()),
    });
    out.push(match overlapping_pairs(&spec, catalog) {
        Ok(p) if p.is_empty() => pass("disjoint"),
        Ok(p) => fail("disjoint", None, format!("overlapping boxes (i, j, volume): {p:?}")),
        Err(e) => fail("disjoint", None, e.to_string()),
    });

    let prepared = PreparedScene::new(&spec, catalog);
    for r in rows {
        out.push(
            check_visibility(m, r, spec.placements.len())
                .unwrap_or_else(|e| fail("visibility", Some(r.sample), e.to_string())),
        );
        out.push(match &prepared {
            Ok(p) => check_oracle(m, r, p, &spec).unwrap_or_else(|e| fail("oracle", Some(r.sample), e.to_string())),
            Err(e) => fail("oracle", Some(r.sample), e.to_string()),
        });
    }
    out
}

/// Re-derives every check from the files of a finished dataset. `catalog`
/// overrides the catalog recorded in the manifest header.
pub fn validate(manifest_path: &Path, catalog: Option<&Path>) -> Result<ValidationReport> {
    let m = Manifest::load(manifest_path)?;
    let catalog_path = catalog
        .map(Path::to_path_buf)
        .unwrap_or_else(|| m.header.config.catalog_path());
    let catalog = Catalog::load(&catalog_path)
        .map_err(|e| Error::FatalConfig(format!("cannot load catalog {}: {e}", catalog_path.display())))?;

    let mut groups: Vec<(String, Vec<&ManifestRow>)> = Vec::new();
    for r in &m.rows {
        match groups.last_mut() {
            Some((id, rows)) if *id == r.scene_id => rows.push(r),
            _ => groups.push((r.scene_id.clone(), vec![r])),
        }
    }
    let outcomes: Vec<(String, Vec<Outcome>)> = groups
        .par_iter()
        .map(|(id, rows)| (id.clone(), check_scene(&m, &catalog, rows)))
        .collect();

    let mut checks: BTreeMap<String, CheckSummary> = CHECKS
        .iter()
        .map(|c| (c.to_string(), CheckSummary::default()))
        .collect();
    let mut failures = Vec::new();
    for (scene_id, list) in outcomes {
        for o in list {
            let s = checks.entry(o.check.to_string()).or_default();
            match o.failure {
                None => s.passed += 1,
                Some((sample, detail)) => {
                    s.failed += 1;
                    failures.push(Failure {
                        check: o.check.to_string(),
                        scene_id: scene_id.clone(),
                        sample,
                        detail,
                    });
                }
            }
        }
    }
    Ok(ValidationReport {
        rows: m.rows.len(),
        scenes: groups.len(),
        checks,
        ok: failures.is_empty(),
        failures,
    })
}
