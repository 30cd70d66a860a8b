use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::GenerationConfig;
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::metrics::OracleMatch;
use crate::placement::Placement;
use crate::scene::MirrorKind;

pub const MANIFEST_FILE: &str = "manifest.jsonl";
const FORMAT_VERSION: u32 = 1;

/// First line of the manifest. Only this line carries a timestamp.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestHeader {
    pub format: u32,
    pub config_digest: String,
    pub code_version: String,
    pub created: String,
    pub config: GenerationConfig,
    pub scenes_attempted: u64,
    pub scenes_written: u64,
    pub skipped: Vec<SkippedScene>,
}

impl ManifestHeader {
    pub fn new(config: &GenerationConfig, attempted: u64, written: u64, skipped: Vec<SkippedScene>) -> Self {
        ManifestHeader {
            format: FORMAT_VERSION,
            config_digest: config.digest(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            created: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config: config.clone(),
            scenes_attempted: attempted,
            scenes_written: written,
            skipped,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedScene {
    pub scene_index: u64,
    pub reason: String,
}

/// A file of the dataset, relative to the dataset root with `/` separators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementSummary {
    pub asset_id: String,
    pub category: String,
    pub scale: f64,
    pub rotation_angle: f64,
    pub translation: [f64; 3],
    pub aabb_min: [f64; 3],
    pub aabb_max: [f64; 3],
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

impl From<&Placement> for PlacementSummary {
    fn from(p: &Placement) -> Self {
        PlacementSummary {
            asset_id: p.asset_id.clone(),
            category: p.category.clone(),
            scale: p.scale,
            rotation_angle: p.rotation_angle,
            translation: arr(&p.translation),
            aabb_min: arr(&p.world_aabb.min),
            aabb_max: arr(&p.world_aabb.max),
        }
    }
}

/// Outcome of each check at generation time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationFlags {
    pub grounding: bool,
    pub disjoint: bool,
    pub visibility: bool,
    pub oracle: bool,
}

impl ValidationFlags {
    pub fn all(&self) -> bool {
        self.grounding && self.disjoint && self.visibility && self.oracle
    }
}

/// One rendered view of one scene.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestRow {
    /// Position among all rows; dense even when scenes were skipped.
    pub sample: usize,
    pub scene_id: String,
    pub scene_index: u64,
    /// Slot among the scene's three views.
    pub view: usize,
    /// Index of the view's pose in the camera rig.
    pub rig_index: usize,
    pub mirror_kind: MirrorKind,
    pub scene_file: FileRecord,
    /// Pass name to file.
    pub files: BTreeMap<String, FileRecord>,
    pub placements: Vec<PlacementSummary>,
    /// Per placement: fraction of pixels covered directly and in the mirror.
    pub coverage: Vec<[f64; 2]>,
    pub oracle: Option<OracleMatch>,
    pub validation: ValidationFlags,
}

impl ManifestRow {
    /// Every file of the row, scene file first.
    pub fn all_files(&self) -> impl Iterator<Item = &FileRecord> {
        std::iter::once(&self.scene_file).chain(self.files.values())
    }

    pub fn file(&self, pass: &str) -> Result<&FileRecord> {
        self.files
            .get(pass)
            .ok_or_else(|| Error::ManifestCorrupt(format!("row {} has no `{pass}` file", self.sample)))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    /// Directory the manifest and the relative file paths live in.
    pub root: PathBuf,
    pub header: ManifestHeader,
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    /// Reads `manifest.jsonl`, or the one inside a dataset directory.
    pub fn load(path: &Path) -> Result<Self> {
        let file = if path.is_dir() {
            path.join(MANIFEST_FILE)
        } else {
            path.to_path_buf()
        };
        let f = std::fs::File::open(&file).map_err(|e| Error::io(format!("opening {}", file.display()), e))?;
        let mut lines = BufReader::new(f).lines();
        let corrupt = |line: usize, m: String| Error::ManifestCorrupt(format!("{}:{line}: {m}", file.display()));
        let first = lines
            .next()
            .ok_or_else(|| corrupt(1, "empty manifest".into()))?
            .map_err(|e| Error::io(format!("reading {}", file.display()), e))?;
        let header: ManifestHeader =
            serde_json::from_str(&first).map_err(|e| corrupt(1, format!("bad header: {e}")))?;
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line.map_err(|e| Error::io(format!("reading {}", file.display()), e))?;
            if line.trim().is_empty() {
                continue;
            }
            let row: ManifestRow = serde_json::from_str(&line).map_err(|e| corrupt(k + 2, format!("bad row: {e}")))?;
            rows.push(row);
        }
        Ok(Manifest {
            root: file.parent().map(Path::to_path_buf).unwrap_or_default(),
            header,
            rows,
        })
    }

    /// Writes the manifest to `root/manifest.jsonl` through a temporary file
    /// and a rename, so readers never see a partial manifest.
    pub fn save(&self) -> Result<PathBuf> {
        let path = self.root.join(MANIFEST_FILE);
        let tmp = self.root.join(format!("{MANIFEST_FILE}.tmp"));
        let mut text = serde_json::to_string(&self.header).map_err(|e| Error::json("encoding manifest header", e))?;
        text.push('\n');
        for r in &self.rows {
            text.push_str(&serde_json::to_string(r).map_err(|e| Error::json("encoding manifest row", e))?);
            text.push('\n');
        }
        let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(format!("creating {}", tmp.display()), e))?;
        f.write_all(text.as_bytes())
            .and_then(|_| f.sync_all())
            .map_err(|e| Error::io(format!("writing {}", tmp.display()), e))?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::io(format!("renaming to {}", path.display()), e))?;
        Ok(path)
    }

    pub fn resolve(&self, record: &FileRecord) -> PathBuf {
        self.root.join(record.path.replace('/', std::path::MAIN_SEPARATOR_STR))
    }

    /// Distinct scene ids in row order.
    pub fn scene_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = Vec::new();
        for r in &self.rows {
            if ids.last() != Some(&r.scene_id.as_str()) {
                ids.push(&r.scene_id);
            }
        }
        ids
    }
}

/// Hex SHA-256 of a file's contents.
pub fn sha256_file(path: &Path) -> Result<String> {
    let mut f = std::fs::File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = f
            .read(&mut buf)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}
