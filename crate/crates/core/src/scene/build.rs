use std::collections::BTreeMap;

use crate::assets::{Catalog, ObjectAsset, PairingTable};
use crate::error::{Error, Result};
use crate::geometry::{Vec2, Vec3};
use crate::placement::{compute_sampling_region, place_object, place_pair, PairRequest, SamplingRegion};
use crate::render::{object_coverage, PreparedScene, BUILTIN_ENVIRONMENTS, BUILTIN_FLOOR};
use crate::rng::{scene_seed, Stream};

use super::{camera_rig_for, select_views, AreaLight, CameraPose, MirrorKind, SceneConfig, SceneSpec};

const MIRROR_KINDS: [MirrorKind; 2] = [MirrorKind::FullWall, MirrorKind::TallRect];

/// Smallest fraction of the image each object must cover, both directly and
/// through the mirror, in every selected view.
pub const MIN_COVERAGE: f64 = 0.005;

/// Placements drawn per scene before giving up on visibility.
pub const VISIBILITY_ATTEMPTS: usize = 16;

/// Scene factory with the per-mirror rig and sampling region computed once.
pub struct SceneBuilder<'a> {
    pub config: SceneConfig,
    catalog: &'a Catalog,
    pairing: &'a PairingTable,
    rigs: BTreeMap<MirrorKind, Vec<CameraPose>>,
    regions: BTreeMap<MirrorKind, SamplingRegion>,
}

impl<'a> SceneBuilder<'a> {
    pub fn new(config: &SceneConfig, catalog: &'a Catalog, pairing: &'a PairingTable) -> Result<Self> {
        config.validate()?;
        if catalog.assets.is_empty() {
            return Err(Error::FatalConfig("catalog has no object assets".into()));
        }
        let mut rigs = BTreeMap::new();
        let mut regions = BTreeMap::new();
        for kind in MIRROR_KINDS {
            let mirror = config.mirror(kind);
            let rig = camera_rig_for(&config.rig, mirror.aperture.center);
            let region = compute_sampling_region(&mirror, &rig, config.ground_z)?;
            rigs.insert(kind, rig);
            regions.insert(kind, region);
        }
        Ok(SceneBuilder {
            config: config.clone(),
            catalog,
            pairing,
            rigs,
            regions,
        })
    }

    pub fn rig(&self, kind: MirrorKind) -> &[CameraPose] {
        &self.rigs[&kind]
    }

    pub fn region(&self, kind: MirrorKind) -> &SamplingRegion {
        &self.regions[&kind]
    }

    /// Builds scene `scene_index` of the dataset seeded by `global_seed`.
    /// The result depends only on those two numbers, the config and the catalog.
    pub fn build(&self, scene_index: u64, global_seed: u64) -> Result<SceneSpec> {
        let cfg = &self.config;
        let seed = scene_seed(global_seed, scene_index);
        let stream = |purpose: &str| Stream::new(seed, purpose);

        let kind = MIRROR_KINDS[stream("mirror").below(2) as usize];
        let mirror = cfg.mirror(kind);

        let floor_texture_id = if self.catalog.floors.is_empty() {
            BUILTIN_FLOOR.to_string()
        } else {
            let ids: Vec<&String> = self.catalog.floors.keys().collect();
            ids[stream("floor").below(ids.len() as u64) as usize].clone()
        };
        let mut envs: Vec<String> = BUILTIN_ENVIRONMENTS.iter().map(|s| s.to_string()).collect();
        envs.extend(self.catalog.environments.keys().cloned());
        let environment_id = envs[stream("environment").below(envs.len() as u64) as usize].clone();

        let mut objects = stream("objects");
        let multi = objects.bernoulli(cfg.multi_object_prob);
        let candidates: Vec<&ObjectAsset> = self
            .catalog
            .assets
            .values()
            .filter(|a| !multi || self.pairing.has_pairing(&a.category))
            .collect();
        if candidates.is_empty() {
            return Err(Error::PairingUnavailable("any".into()));
        }
        let primary = candidates[objects.below(candidates.len() as u64) as usize];

        let views = select_views(&mut stream("views"));
        let rig = self.rig(kind);
        let region = &self.region(kind).polygon;
        let mut placing = stream("placement");
        let mut failure = Error::NotVisible(VISIBILITY_ATTEMPTS);
        for _ in 0..VISIBILITY_ATTEMPTS {
            let placements = if multi {
                let req = PairRequest {
                    catalog: self.catalog,
                    pairing: self.pairing,
                    region,
                    ground_z: cfg.ground_z,
                    max_attempts: cfg.max_attempts,
                    mode: cfg.grounding,
                };
                match place_pair(primary, &req, &mut placing) {
                    Ok(pair) => vec![pair.primary, pair.secondary],
                    Err(e @ Error::PlacementFailed(_)) => {
                        failure = e;
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            } else {
                vec![place_object(
                    primary,
                    region,
                    &mut placing,
                    cfg.ground_z,
                    cfg.grounding,
                )?]
            };

            let elevation = cfg.light.elevation_deg.to_radians();
            let dir = Vec3::new(0.0, elevation.cos(), elevation.sin());
            let light = AreaLight {
                center: placements[0].world_aabb.center() + dir * cfg.light.distance,
                half_extents: Vec2::repeat(cfg.light.half_extent),
                normal: -dir,
                radiance: cfg.light.radiance,
            };

            let spec = SceneSpec {
                scene_id: format!("{scene_index:06}"),
                scene_index,
                seed,
                mirror,
                ground_z: cfg.ground_z,
                floor_texture_id: floor_texture_id.clone(),
                environment_id: environment_id.clone(),
                light,
                placements,
                views,
                cameras: views.iter().map(|&v| rig[v]).collect(),
                resolution: cfg.resolution,
            };
            if self.visible(&spec)? {
                return Ok(spec);
            }
            failure = Error::NotVisible(VISIBILITY_ATTEMPTS);
        }
        Err(failure)
    }

    /// Whether every placement covers at least [`MIN_COVERAGE`] of the image,
    /// directly and reflected, in every view of `spec`.
    pub fn visible(&self, spec: &SceneSpec) -> Result<bool> {
        let scene = PreparedScene::new(spec, self.catalog)?;
        let n = spec.placements.len();
        Ok(spec.cameras.iter().all(|view| {
            object_coverage(&scene, view, spec.resolution, spec.resolution, n)
                .iter()
                .all(|&(direct, reflected)| direct >= MIN_COVERAGE && reflected >= MIN_COVERAGE)
        }))
    }
}

/// One-shot form of [`SceneBuilder::build`].
pub fn build_scene(
    config: &SceneConfig,
    catalog: &Catalog,
    pairing: &PairingTable,
    scene_index: u64,
    global_seed: u64,
) -> Result<SceneSpec> {
    SceneBuilder::new(config, catalog, pairing)?.build(scene_index, global_seed)
}
