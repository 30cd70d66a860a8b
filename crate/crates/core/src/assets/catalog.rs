//! Directory-based asset catalog.
//!
//! `catalog.json` is an array of entries:
//!
//! ```json
//! [
//!   {"id": "fx_chair_01", "path": "meshes/chair_01.obj", "category": "chair", "base_color": [0.7, 0.3, 0.2]},
//!   {"id": "fx_cabinet_02", "path": "meshes/cabinet_02.obj", "category": "cabinet", "texture": "textures/wood.png"},
//!   {"id": "floor_checker", "path": "textures/checker.png", "category": "floor", "tiling": 0.5},
//!   {"id": "env_studio", "path": "env/studio.png", "category": "environment"}
//! ]
//! ```
//!
//! Paths are relative to the directory holding `catalog.json`. Entries in
//! the reserved categories `floor` and `environment` are textures; every
//! other entry is an OBJ mesh.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::mesh::{Albedo, ObjectAsset, Rgb, Texture};
use super::obj::load_obj;
use crate::error::{Error, Result};
use crate::rng::Stream;

pub const FLOOR_CATEGORY: &str = "floor";
pub const ENVIRONMENT_CATEGORY: &str = "environment";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub path: String,
    pub category: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_color: Option<Rgb>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub texture: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiling: Option<f64>,
}

/// A repeating floor texture; `tiling` is repeats per world unit.
#[derive(Clone, Debug)]
pub struct FloorTexture {
    pub id: String,
    pub texture: Arc<Texture>,
    pub tiling: f64,
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub root: PathBuf,
    pub assets: BTreeMap<String, ObjectAsset>,
    pub by_category: BTreeMap<String, Vec<String>>,
    pub floors: BTreeMap<String, FloorTexture>,
    pub environments: BTreeMap<String, Arc<Texture>>,
}

impl Catalog {
    /// Loads `catalog.json` (or a directory containing one) and every file it references.
    pub fn load(path: &Path) -> Result<Self> {
        let index = if path.is_dir() {
            path.join("catalog.json")
        } else {
            path.to_path_buf()
        };
        let text = std::fs::read_to_string(&index)
            .map_err(|e| Error::io(format!("reading catalog {}", index.display()), e))?;
        let entries: Vec<CatalogEntry> =
            serde_json::from_str(&text).map_err(|e| Error::json(format!("parsing {}", index.display()), e))?;
        let root = index.parent().unwrap_or(Path::new(".")).to_path_buf();
        Catalog::from_entries(&root, &entries)
    }

    pub fn from_entries(root: &Path, entries: &[CatalogEntry]) -> Result<Self> {
        let mut cat = Catalog {
            root: root.to_path_buf(),
            ..Default::default()
        };
        let mut textures: BTreeMap<PathBuf, Arc<Texture>> = BTreeMap::new();
        let mut load_texture = |rel: &str| -> Result<Arc<Texture>> {
            let p = root.join(rel);
            if let Some(t) = textures.get(&p) {
                return Ok(t.clone());
            }
            let t = Arc::new(Texture::load_png(&p)?);
            textures.insert(p, t.clone());
            Ok(t)
        };

        for e in entries {
            if e.id.is_empty() || e.category.trim().is_empty() {
                return Err(Error::InvalidCatalog(format!(
                    "entry `{}` needs an id and a category",
                    e.id
                )));
            }
            let taken = cat.assets.contains_key(&e.id)
                || cat.floors.contains_key(&e.id)
                || cat.environments.contains_key(&e.id);
            if taken {
                return Err(Error::InvalidCatalog(format!("duplicate id `{}`", e.id)));
            }
            match e.category.as_str() {
                FLOOR_CATEGORY => {
                    let tiling = e.tiling.unwrap_or(1.0);
                    if !(tiling > 0.0 && tiling.is_finite()) {
                        return Err(Error::InvalidCatalog(format!("floor `{}` needs tiling > 0", e.id)));
                    }
                    let texture = load_texture(&e.path)?;
                    cat.floors.insert(
                        e.id.clone(),
                        FloorTexture {
                            id: e.id.clone(),
                            texture,
                            tiling,
                        },
                    );
                }
                ENVIRONMENT_CATEGORY => {
                    let texture = load_texture(&e.path)?;
                    cat.environments.insert(e.id.clone(), texture);
                }
                _ => {
                    let mut asset = load_obj(&root.join(&e.path))?;
                    asset.id = e.id.clone();
                    asset.category = e.category.clone();
                    asset.albedo = match (&e.texture, e.base_color) {
                        (Some(t), _) => {
                            if asset.uvs.is_none() {
                                return Err(Error::InvalidCatalog(format!(
                                    "asset `{}` has a texture but no uvs",
                                    e.id
                                )));
                            }
                            Albedo::Texture(load_texture(t)?)
                        }
                        (None, Some(c)) => {
                            if c.iter().any(|x| !(0.0..=1.0).contains(x)) {
                                return Err(Error::InvalidCatalog(format!("asset `{}` color out of range", e.id)));
                            }
                            Albedo::Color(c)
                        }
                        (None, None) => asset.albedo,
                    };
                    asset.validate()?;
                    cat.by_category
                        .entry(e.category.clone())
                        .or_default()
                        .push(e.id.clone());
                    cat.assets.insert(e.id.clone(), asset);
                }
            }
        }
        for ids in cat.by_category.values_mut() {
            ids.sort();
        }
        Ok(cat)
    }

    pub fn asset(&self, id: &str) -> Result<&ObjectAsset> {
        self.assets.get(id).ok_or_else(|| Error::UnknownAsset(id.to_string()))
    }

    pub fn semantic_category(&self, asset_id: &str) -> Result<&str> {
        Ok(&self.asset(asset_id)?.category)
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.by_category.keys().map(String::as_str)
    }

    /// Uniform draw over the ids of one category.
    pub fn sample_asset(&self, category: &str, rng: &mut Stream) -> Result<&ObjectAsset> {
        let ids = self
            .by_category
            .get(category)
            .filter(|ids| !ids.is_empty())
            .ok_or_else(|| Error::EmptyCategory(category.to_string()))?;
        let i = rng.below(ids.len() as u64) as usize;
        self.asset(&ids[i])
    }
}

/// Free-function form of [`Catalog::semantic_category`].
pub fn semantic_category<'a>(asset_id: &str, catalog: &'a Catalog) -> Result<&'a str> {
    catalog.semantic_category(asset_id)
}

/// Free-function form of [`Catalog::sample_asset`].
pub fn sample_asset<'a>(category: &str, catalog: &'a Catalog, rng: &mut Stream) -> Result<&'a ObjectAsset> {
    catalog.sample_asset(category, rng)
}

/// Categories that may share a scene with a given category.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PairingTable {
    pub pairs: BTreeMap<String, Vec<String>>,
}

const DEFAULT_PAIRS: &[(&str, &str)] = &[
    ("chair", "table"),
    ("sofa", "table"),
    ("bed", "lamp"),
    ("stool", "lamp"),
    ("cabinet", "rug"),
    ("cart", "shelf"),
];

impl PairingTable {
    /// Symmetric default table. Pairs whose categories are missing from
    /// `catalog` are dropped.
    pub fn default_for(catalog: &Catalog) -> Self {
        let mut pairs: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (a, b) in DEFAULT_PAIRS {
            if !catalog.by_category.contains_key(*a) || !catalog.by_category.contains_key(*b) {
                continue;
            }
            pairs.entry(a.to_string()).or_default().push(b.to_string());
            pairs.entry(b.to_string()).or_default().push(a.to_string());
        }
        for v in pairs.values_mut() {
            v.sort();
            v.dedup();
        }
        PairingTable { pairs }
    }

    /// Reads a JSON object `{category: [paired categories]}` and checks it against `catalog`.
    pub fn load(path: &Path, catalog: &Catalog) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(format!("reading pairing {}", path.display()), e))?;
        let table: PairingTable =
            serde_json::from_str(&text).map_err(|e| Error::json(format!("parsing {}", path.display()), e))?;
        table.validate(catalog)?;
        Ok(table)
    }

    pub fn validate(&self, catalog: &Catalog) -> Result<()> {
        for (cat, list) in &self.pairs {
            if list.is_empty() {
                return Err(Error::InvalidCatalog(format!("pairing for `{cat}` is empty")));
            }
            for c in std::iter::once(cat).chain(list) {
                if !catalog.by_category.contains_key(c) {
                    return Err(Error::InvalidCatalog(format!(
                        "pairing references unknown category `{c}`"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn has_pairing(&self, category: &str) -> bool {
        self.pairs.get(category).is_some_and(|l| !l.is_empty())
    }

    /// Uniform draw from the categories paired with `category`.
    pub fn paired_category(&self, category: &str, rng: &mut Stream) -> Result<&str> {
        let list = self
            .pairs
            .get(category)
            .filter(|l| !l.is_empty())
            .ok_or_else(|| Error::PairingUnavailable(category.to_string()))?;
        Ok(&list[rng.below(list.len() as u64) as usize])
    }
}
