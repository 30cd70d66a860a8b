use std::collections::BTreeMap;
use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;

use super::manifest::{sha256_file, FileRecord, Manifest, ManifestHeader, ManifestRow, SkippedScene, ValidationFlags};
use super::validate::{grounding_gaps, overlapping_pairs, GROUNDING_TOLERANCE, ORACLE_MIN_MATCH};
use super::GenerationConfig;
use crate::assets::Catalog;
use crate::error::{Error, Result};
use crate::metrics::oracle_match;
use crate::render::{
    encode_passes, render, render_reflection_oracle, PreparedScene, RenderSettings, OBJECT_ID_BASE, PASS_NAMES,
};
use crate::scene::{SceneBuilder, SceneSpec, MIN_COVERAGE};

/// Present in the output directory while generation is running.
pub const PARTIAL_SENTINEL: &str = ".partial";

fn io(context: String) -> impl FnOnce(std::io::Error) -> Error {
    move |e| Error::io(context, e)
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| Error::FatalConfig(format!("cannot start worker pool: {e}")))
}

fn record(root: &Path, path: &Path) -> Result<FileRecord> {
    let rel = path.strip_prefix(root).unwrap_or(path);
    let parts: Vec<String> = rel
        .components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect();
    Ok(FileRecord {
        path: parts.join("/"),
        sha256: sha256_file(path)?,
    })
}

/// Renders the three views of `spec`, writes their passes and `scene.json`,
/// and returns the scene's manifest rows with `sample` left at zero.
fn write_scene(
    spec: &SceneSpec,
    catalog: &Catalog,
    settings: &RenderSettings,
    root: &Path,
) -> Result<Vec<ManifestRow>> {
    let dir = root.join("scenes").join(&spec.scene_id);
    std::fs::create_dir_all(&dir).map_err(io(format!("creating {}", dir.display())))?;
    let scene_path = dir.join("scene.json");
    std::fs::write(&scene_path, spec.to_json() + "\n").map_err(io(format!("writing {}", scene_path.display())))?;
    let scene_file = record(root, &scene_path)?;

    let scene = PreparedScene::new(spec, catalog)?;
    let grounded = grounding_gaps(spec, catalog)?
        .iter()
        .all(|g| g.abs() <= GROUNDING_TOLERANCE);
    let disjoint = overlapping_pairs(spec, catalog)?.is_empty();
    let placements: Vec<_> = spec.placements.iter().map(Into::into).collect();

    let mut rows = Vec::with_capacity(spec.cameras.len());
    for (slot, view) in spec.cameras.iter().enumerate() {
        let passes = render(&scene, view, settings);
        let oracle = render_reflection_oracle(&scene, view, settings)?;
        let matched = oracle_match(&passes, &oracle.rgb, &oracle.valid).ok();
        let coverage: Vec<[f64; 2]> = (0..spec.placements.len())
            .map(|k| {
                let id = OBJECT_ID_BASE + k as u16;
                [passes.coverage(id), passes.reflected_coverage(id)]
            })
            .collect();
        let files = encode_passes(&passes, &dir, &format!("view{slot}"))?;
        let mut map = BTreeMap::new();
        for (name, path) in PASS_NAMES.iter().zip(&files.paths) {
            map.insert(name.to_string(), record(root, path)?);
        }
        rows.push(ManifestRow {
            sample: 0,
            scene_id: spec.scene_id.clone(),
            scene_index: spec.scene_index,
            view: slot,
            rig_index: view.index,
            mirror_kind: spec.mirror.kind,
            scene_file: scene_file.clone(),
            files: map,
            placements: placements.clone(),
            validation: ValidationFlags {
                grounding: grounded,
                disjoint,
                visibility: coverage.iter().all(|c| c[0] >= MIN_COVERAGE && c[1] >= MIN_COVERAGE),
                oracle: matched.is_some_and(|m| m.match_rate >= ORACLE_MIN_MATCH),
            },
            coverage,
            oracle: matched,
        });
    }
    Ok(rows)
}

fn prepare_output(root: &Path) -> Result<()> {
    std::fs::create_dir_all(root).map_err(io(format!("creating {}", root.display())))?;
    let manifest = root.join(super::MANIFEST_FILE);
    if manifest.exists() {
        std::fs::remove_file(&manifest).map_err(io(format!("removing {}", manifest.display())))?;
    }
    let sentinel = root.join(PARTIAL_SENTINEL);
    std::fs::write(&sentinel, b"").map_err(io(format!("writing {}", sentinel.display())))
}

fn finish(root: &Path, header: ManifestHeader, per_scene: Vec<Vec<ManifestRow>>) -> Result<Manifest> {
    let mut rows: Vec<ManifestRow> = per_scene.into_iter().flatten().collect();
    for (k, r) in rows.iter_mut().enumerate() {
        r.sample = k;
    }
    let manifest = Manifest {
        root: root.to_path_buf(),
        header,
        rows,
    };
    manifest.save()?;
    let sentinel = root.join(PARTIAL_SENTINEL);
    std::fs::remove_file(&sentinel).map_err(io(format!("removing {}", sentinel.display())))?;
    Ok(manifest)
}

/// Builds and renders scenes `0..num_scenes`. Scenes whose placement fails
/// are skipped and listed in the header; the remaining rows are numbered
/// densely. Output is identical for any worker count.
pub fn generate(config: &GenerationConfig) -> Result<Manifest> {
    config.validate()?;
    let (catalog, pairing) = config.load_assets()?;
    let builder = SceneBuilder::new(&config.scene_config(), &catalog, &pairing).map_err(|e| match e {
        Error::EmptyRegion => Error::FatalConfig("sampling region is empty for this rig and mirror".into()),
        e => e,
    })?;
    let settings = config.render_settings();
    let root = config.out_dir.clone();
    prepare_output(&root)?;

    let results: Vec<Result<std::result::Result<Vec<ManifestRow>, SkippedScene>>> =
        pool(config.workers)?.install(|| {
            (0..config.num_scenes)
                .into_par_iter()
                .map(|i| match builder.build(i, config.global_seed) {
                    Ok(spec) => {
                        let rows = write_scene(&spec, &catalog, &settings, &root)?;
                        info!("scene {} written ({} objects)", spec.scene_id, spec.placements.len());
                        Ok(Ok(rows))
                    }
                    Err(e @ (Error::PlacementFailed(_) | Error::NotVisible(_))) => {
                        warn!("scene {i:06} skipped: {e}");
                        Ok(Err(SkippedScene {
                            scene_index: i,
                            reason: e.to_string(),
                        }))
                    }
                    Err(e) => Err(e),
                })
                .collect()
        });

    let mut scenes = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r? {
            Ok(rows) => scenes.push(rows),
            Err(s) => skipped.push(s),
        }
    }
    let mut header_config = config.clone();
    header_config.catalog =
        Some(std::fs::canonicalize(config.catalog_path()).unwrap_or_else(|_| config.catalog_path()));
    let header = ManifestHeader::new(&header_config, config.num_scenes, scenes.len() as u64, skipped);
    let manifest = finish(&root, header, scenes)?;
    info!("{} rows written to {}", manifest.rows.len(), root.display());
    Ok(manifest)
}

/// Renders given scenes into `config.out_dir` with a manifest, exactly as
/// [`generate`] would. Used to build datasets from hand-edited scenes.
pub fn write_scenes(config: &GenerationConfig, specs: &[SceneSpec]) -> Result<Manifest> {
    config.validate()?;
    let (catalog, _) = config.load_assets()?;
    let settings = config.render_settings();
    let root = config.out_dir.clone();
    prepare_output(&root)?;
    let scenes: Vec<Vec<ManifestRow>> = pool(config.workers)?.install(|| {
        specs
            .par_iter()
            .map(|s| write_scene(s, &catalog, &settings, &root))
            .collect::<Result<_>>()
    })?;
    let mut header_config = config.clone();
    header_config.catalog =
        Some(std::fs::canonicalize(config.catalog_path()).unwrap_or_else(|_| config.catalog_path()));
    let header = ManifestHeader::new(&header_config, specs.len() as u64, specs.len() as u64, Vec::new());
    finish(&root, header, scenes)
}
