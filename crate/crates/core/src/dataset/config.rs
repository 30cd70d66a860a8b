use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::assets::fixtures::bundled_catalog_dir;
use crate::assets::{Catalog, PairingTable};
use crate::error::{Error, Result};
use crate::placement::GroundingMode;
use crate::render::RenderSettings;
use crate::scene::SceneConfig;

/// Everything that determines a generated dataset. Loadable from TOML;
/// every field has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerationConfig {
    pub num_scenes: u64,
    pub global_seed: u64,
    pub multi_object_prob: f64,
    /// Square image side in pixels.
    pub resolution: u32,
    pub samples_per_pixel: u32,
    pub shadow_samples: u32,
    pub max_bounce: u32,
    pub gamma: f64,
    /// `catalog.json` or its directory; the bundled fixture catalog if unset.
    pub catalog: Option<PathBuf>,
    /// Pairing table JSON; `pairing.json` next to the catalog if present,
    /// else the built-in table.
    pub pairing: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// Only lower floating objects; sunken ones are left as placed.
    pub strict_paper_grounding: bool,
    /// Scene worker count; all logical cores if unset. Does not affect output.
    pub workers: Option<usize>,
    /// Rig, mirror and light geometry. Its `multi_object_prob`,
    /// `resolution` and `grounding` are replaced by the fields above.
    pub scene: SceneConfig,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        let render = RenderSettings::default();
        GenerationConfig {
            num_scenes: 10,
            global_seed: 0,
            multi_object_prob: 0.3,
            resolution: render.width,
            samples_per_pixel: render.samples_per_pixel,
            shadow_samples: render.shadow_samples,
            max_bounce: render.max_bounce,
            gamma: render.gamma,
            catalog: None,
            pairing: None,
            out_dir: PathBuf::from("out"),
            strict_paper_grounding: false,
            workers: None,
            scene: SceneConfig::default(),
        }
    }
}

impl GenerationConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::FatalConfig(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::FatalConfig(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| Error::FatalConfig(format!("{}: {e}", path.display())))
    }

    pub fn render_settings(&self) -> RenderSettings {
        RenderSettings {
            width: self.resolution,
            height: self.resolution,
            samples_per_pixel: self.samples_per_pixel,
            shadow_samples: self.shadow_samples,
            max_bounce: self.max_bounce,
            gamma: self.gamma,
        }
    }

    pub fn scene_config(&self) -> SceneConfig {
        SceneConfig {
            multi_object_prob: self.multi_object_prob,
            resolution: self.resolution,
            grounding: if self.strict_paper_grounding {
                GroundingMode::LowerOnly
            } else {
                GroundingMode::Symmetric
            },
            ..self.scene.clone()
        }
    }

    pub fn catalog_path(&self) -> PathBuf {
        self.catalog.clone().unwrap_or_else(bundled_catalog_dir)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_scenes == 0 {
            return Err(Error::FatalConfig("num_scenes must be at least 1".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::FatalConfig("workers must be at least 1".into()));
        }
        self.render_settings().validate()?;
        self.scene_config().validate()
    }

    /// Loads the catalog and pairing table; failures are configuration errors
    /// naming the offending path.
    pub fn load_assets(&self) -> Result<(Catalog, PairingTable)> {
        let path = self.catalog_path();
        let catalog = Catalog::load(&path)
            .map_err(|e| Error::FatalConfig(format!("cannot load catalog {}: {e}", path.display())))?;
        let pairing_path = self.pairing.clone().or_else(|| {
            let dir = if path.is_dir() {
                path.clone()
            } else {
                path.parent().map(Path::to_path_buf).unwrap_or_default()
            };
            Some(dir.join("pairing.json")).filter(|p| p.exists())
        });
        let pairing = match pairing_path {
            Some(p) => PairingTable::load(&p, &catalog)
                .map_err(|e| Error::FatalConfig(format!("cannot load pairing {}: {e}", p.display())))?,
            None => PairingTable::default_for(&catalog),
        };
        Ok((catalog, pairing))
    }

    /// SHA-256 of the canonical JSON of the fields that affect output.
    pub fn digest(&self) -> String {
        let mut c = self.clone();
        c.out_dir = PathBuf::new();
        c.workers = None;
        let json = serde_json::to_string(&c).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_unknown_keys() {
        let cfg = GenerationConfig::from_toml("num_scenes = 3\nglobal_seed = 9\n[scene.rig]\nradius = 7.0\n").unwrap();
        assert_eq!(cfg.num_scenes, 3);
        assert_eq!(cfg.scene.rig.radius, 7.0);
        assert_eq!(cfg.resolution, 512);
        assert!(GenerationConfig::from_toml("num_scene = 3").is_err());
    }

    #[test]
    fn digest_ignores_workers_and_output() {
        let a = GenerationConfig::default();
        let b = GenerationConfig {
            workers: Some(3),
            out_dir: "elsewhere".into(),
            ..a.clone()
        };
        assert_eq!(a.digest(), b.digest());
        let c = GenerationConfig {
            global_seed: 1,
            ..a.clone()
        };
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn validation() {
        assert!(GenerationConfig::default().validate().is_ok());
        let bad = GenerationConfig {
            multi_object_prob: 1.5,
            ..Default::default()
        };
        assert!(matches!(bad.validate(), Err(Error::FatalConfig(_))));
        let bad = GenerationConfig {
            samples_per_pixel: 3,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
