//! End-to-end dataset generation, the manifest, validation of finished
//! datasets, metric evaluation and contact sheets.
//!
//! Layout of a dataset directory:
//!
//! ```text
//! out/manifest.jsonl                  header line, then one row per (scene, view)
//! out/scenes/{scene_id}/scene.json    the SceneSpec
//! out/scenes/{scene_id}/view{v}_{pass}.{png|pfm}
//! ```
//!
//! `out/.partial` exists while generation runs; the manifest is written last.

mod config;
mod contact;
mod evaluate;
mod generate;
mod manifest;
mod validate;

pub use config::GenerationConfig;
pub use contact::{contact_sheet, CONTACT_THUMB};
pub use evaluate::{evaluate_metrics, MetricsReport};
pub use generate::{generate, write_scenes, PARTIAL_SENTINEL};
pub use manifest::{
    sha256_file, FileRecord, Manifest, ManifestHeader, ManifestRow, PlacementSummary, SkippedScene, ValidationFlags,
    MANIFEST_FILE,
};
pub use validate::{
    grounding_gaps, overlapping_pairs, validate, CheckSummary, Failure, ValidationReport, CHECKS, GROUNDING_TOLERANCE,
    ORACLE_MIN_MATCH,
};
