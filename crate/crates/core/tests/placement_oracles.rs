//! Geometry, placement and scene assembly checked against independent
//! oracles: hand-solved plane intersections, a ray-cast visibility test,
//! and binomial or CLT bounds on seeded draws.

mod common;

use std::f64::consts::FRAC_PI_4;

use common::{fixture_catalog, point_visibility, proxy_visible_from_all, tempdir};
use mirrorscene::assets::{Catalog, CatalogEntry};
use mirrorscene::geometry::{Frustum, Mat3, Polygon, RigidPose, Vec2, Vec3};
use mirrorscene::placement::{
    compute_sampling_region, place_object, place_pair, sample_position, sample_rotation, GroundingMode, PairRequest,
};
use mirrorscene::render::Camera;
use mirrorscene::rng::Stream;
use mirrorscene::scene::{
    camera_rig_for, select_views, CameraPose, MirrorKind, SceneBuilder, SceneConfig, SceneSpec, RIG_SIZE,
};

fn has_vertex(poly: &Polygon, p: Vec2, tol: f64) -> bool {
    poly.vertices.iter().any(|v| (v - p).norm() <= tol)
}

#[test]
fn frustum_footprint_matches_plane_intersections() {
    // Camera at height 1 pitched 45 degrees down, 60 degree vertical fov.
    let eye = Vec3::new(0.0, 0.0, 1.0);
    let forward = Vec3::new(0.0, FRAC_PI_4.cos(), -FRAC_PI_4.sin());
    let pose = RigidPose::look_at(eye, eye + forward, Vec3::z());
    let fov = 60f64.to_radians();
    let frustum = Frustum::perspective(&pose, fov, 1.0, 0.01, 100.0);
    let footprint = frustum.ground_section(0.0);

    // Corner rays of the view pyramid; each side plane holds two of them.
    let t = (fov / 2.0).tan();
    let (r, u) = (pose.right(), pose.up());
    let corner = |a: f64, b: f64| forward + r * (a * t) + u * (b * t);
    let corners = [
        corner(-1.0, -1.0),
        corner(1.0, -1.0),
        corner(1.0, 1.0),
        corner(-1.0, 1.0),
    ];
    assert_eq!(footprint.vertices.len(), 4);
    for k in 0..4 {
        // Vertex k lies on side planes (k-1, k) and (k, k+1) and the ground.
        let n1 = corners[(k + 3) % 4].cross(&corners[k]);
        let n2 = corners[k].cross(&corners[(k + 1) % 4]);
        let m = Mat3::from_rows(&[n1.transpose(), n2.transpose(), Vec3::z().transpose()]);
        let rhs = Vec3::new(n1.dot(&eye), n2.dot(&eye), 0.0);
        let p = m.lu().solve(&rhs).expect("planes meet in a point");
        assert!(
            has_vertex(&footprint, Vec2::new(p.x, p.y), 1e-9),
            "missing vertex {p:?}"
        );
    }
    // Near edge 75 degrees below the horizon, far edge 15 degrees.
    let ys: Vec<f64> = footprint.vertices.iter().map(|v| v.y).collect();
    let lo = ys.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    assert!((lo - 1.0 / 75f64.to_radians().tan()).abs() < 1e-9);
    assert!((hi - 1.0 / 15f64.to_radians().tan()).abs() < 1e-9);
}

#[test]
fn head_on_region_is_symmetric() {
    let cfg = SceneConfig::default();
    let mirror = cfg.mirror(MirrorKind::FullWall);
    let cam = CameraPose {
        pose: RigidPose::look_at(Vec3::new(0.0, 4.0, 2.8), Vec3::new(0.0, 0.0, 0.6), Vec3::z()),
        vertical_fov: 60f64.to_radians(),
        index: 0,
    };
    let region = compute_sampling_region(&mirror, &[cam], 0.0).expect("non-empty region");
    let poly = &region.polygon;
    assert!(poly.area() > 0.0);
    for v in &poly.vertices {
        assert!(
            poly.contains(Vec2::new(-v.x, v.y), 1e-6),
            "mirror image of {v:?} outside"
        );
    }
}

#[test]
fn region_points_pass_raycast_oracle() {
    let (catalog, pairing) = fixture_catalog();
    let cfg = SceneConfig::default();
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing).unwrap();
    for kind in [MirrorKind::FullWall, MirrorKind::TallRect] {
        let mirror = cfg.mirror(kind);
        let rig = builder.rig(kind);
        let mut rng = Stream::new(11, "region_oracle");
        for _ in 0..1000 {
            let p = sample_position(&builder.region(kind).polygon, &mut rng).unwrap();
            assert!(
                proxy_visible_from_all(&mirror, rig, p, cfg.ground_z),
                "{kind:?}: {p:?} fails the oracle"
            );
        }
    }
}

#[test]
fn positions_are_uniform_on_unit_square() {
    let square = Polygon::rectangle(Vec2::new(0.0, 0.0), Vec2::new(1.0, 1.0));
    let mut rng = Stream::new(5, "uniform");
    let n = 10_000;
    let mut sum = Vec2::zeros();
    for _ in 0..n {
        let p = sample_position(&square, &mut rng).unwrap();
        assert!((0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y));
        sum += p;
    }
    let mean = sum / n as f64;
    let four_sigma = 4.0 * (1.0f64 / 12.0).sqrt() / (n as f64).sqrt();
    assert!(
        (mean.x - 0.5).abs() < four_sigma && (mean.y - 0.5).abs() < four_sigma,
        "{mean:?}"
    );
}

#[test]
fn rotations_have_small_mean_resultant() {
    let mut rng = Stream::new(5, "rotation");
    let n = 10_000;
    let (mut c, mut s) = (0.0, 0.0);
    for _ in 0..n {
        let a = sample_rotation(&mut rng);
        assert!((0.0..std::f64::consts::TAU).contains(&a));
        c += a.cos();
        s += a.sin();
    }
    let r = (c * c + s * s).sqrt() / n as f64;
    assert!(r < 0.05, "resultant length {r}");
}

#[test]
fn seeded_placements_pass_raycast_oracle() {
    let (catalog, pairing) = fixture_catalog();
    let cfg = SceneConfig::default();
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing).unwrap();
    let assets: Vec<_> = catalog.assets.values().collect();
    for seed in 0..200u64 {
        let kind = if seed % 2 == 0 {
            MirrorKind::FullWall
        } else {
            MirrorKind::TallRect
        };
        let mut rng = Stream::new(seed, "placement");
        let asset = assets[seed as usize % assets.len()];
        let p = place_object(
            asset,
            &builder.region(kind).polygon,
            &mut rng,
            cfg.ground_z,
            GroundingMode::Symmetric,
        )
        .unwrap();
        let c = p.world_aabb.center();
        assert!(p.world_aabb.min.z.abs() <= 1e-9);
        assert!(proxy_visible_from_all(
            &cfg.mirror(kind),
            builder.rig(kind),
            Vec2::new(c.x, c.y),
            cfg.ground_z
        ));
    }
}

#[test]
fn forced_collision_takes_a_second_attempt() {
    let (catalog, pairing) = fixture_catalog();
    let cfg = SceneConfig::default();
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing).unwrap();
    let region = &builder.region(MirrorKind::TallRect).polygon;
    let req = PairRequest {
        catalog: &catalog,
        pairing: &pairing,
        region,
        ground_z: cfg.ground_z,
        max_attempts: 2,
        mode: GroundingMode::Symmetric,
    };
    let primary = catalog.asset("fx_chair_01").unwrap();
    let seed = (0..10_000u64)
        .find(|&s| matches!(place_pair(primary, &req, &mut Stream::new(s, "pair")), Ok(p) if p.attempts == 2))
        .expect("some seed collides on the first attempt only");
    let pair = place_pair(primary, &req, &mut Stream::new(seed, "pair")).unwrap();
    assert_eq!(pair.attempts, 2);
    assert_eq!(pair.primary.world_aabb.overlap_volume(&pair.secondary.world_aabb), 0.0);
    assert_eq!(pair, place_pair(primary, &req, &mut Stream::new(seed, "pair")).unwrap());
}

#[test]
fn every_pose_frames_the_aperture() {
    let cfg = SceneConfig::default();
    for kind in [MirrorKind::FullWall, MirrorKind::TallRect] {
        let mirror = cfg.mirror(kind);
        let rig = camera_rig_for(&cfg.rig, mirror.aperture.center);
        assert_eq!(rig.len(), RIG_SIZE);
        for (i, view) in rig.iter().enumerate() {
            assert_eq!(view.index, i);
            let cam = Camera::new(view, 512, 512);
            for c in mirror.aperture_corners() {
                let (x, y) = cam.project(c).expect("corner in front of camera");
                assert!(
                    (0.0..512.0).contains(&x) && (0.0..512.0).contains(&y),
                    "{kind:?} pose {i}: corner off screen"
                );
                assert!(point_visibility(&mirror, view, c).0);
            }
        }
    }
}

#[test]
fn view_indices_are_uniform() {
    let n = 10_000;
    let mut counts = [0usize; RIG_SIZE];
    let mut rng = Stream::new(3, "views");
    for _ in 0..n {
        let v = select_views(&mut rng);
        assert!(v[0] != v[1] && v[1] != v[2] && v[0] != v[2]);
        for i in v {
            counts[i] += 1;
        }
    }
    let p = 3.0 / RIG_SIZE as f64;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    for c in counts {
        assert!((c as f64 - n as f64 * p).abs() < 4.0 * sigma, "{counts:?}");
    }
}

fn write_cube_catalog(dir: &std::path::Path, ids: &[&str], category: &str) -> Catalog {
    let obj = "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n\
               f 1 3 2\nf 1 4 3\nf 5 6 7\nf 5 7 8\nf 1 2 6\nf 1 6 5\nf 2 3 7\nf 2 7 6\nf 3 4 8\nf 3 8 7\nf 4 1 5\nf 4 5 8\n";
    std::fs::write(dir.join("cube.obj"), obj).unwrap();
    let entries: Vec<CatalogEntry> = ids
        .iter()
        .map(|id| CatalogEntry {
            id: id.to_string(),
            path: "cube.obj".into(),
            category: category.into(),
            base_color: Some([0.5, 0.5, 0.5]),
            texture: None,
            tiling: None,
        })
        .collect();
    Catalog::from_entries(dir, &entries).unwrap()
}

#[test]
fn category_lookup_and_uniform_asset_draws() {
    let dir = tempdir();
    let ids = ["abo_chair_017", "abo_chair_018", "abo_chair_019", "abo_chair_020"];
    let catalog = write_cube_catalog(dir.path(), &ids, "chair");
    assert_eq!(catalog.semantic_category("abo_chair_017").unwrap(), "chair");

    let n = 10_000;
    let mut rng = Stream::new(1, "assets");
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..n {
        *counts
            .entry(catalog.sample_asset("chair", &mut rng).unwrap().id.clone())
            .or_insert(0usize) += 1;
    }
    let sigma = (n as f64 * 0.25 * 0.75).sqrt();
    assert_eq!(counts.len(), 4);
    for c in counts.values() {
        assert!((*c as f64 - 0.25 * n as f64).abs() < 4.0 * sigma, "{counts:?}");
    }
}

#[test]
fn multi_object_fraction_is_binomial() {
    let (catalog, pairing) = fixture_catalog();
    // Visibility is checked at the scene resolution; a small one keeps this fast.
    let cfg = SceneConfig {
        resolution: 64,
        ..SceneConfig::default()
    };
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing).unwrap();
    let mut built = 0usize;
    let mut multi = 0usize;
    for i in 0..1000 {
        if let Ok(s) = builder.build(i, 2024) {
            built += 1;
            multi += usize::from(s.placements.len() == 2);
        }
    }
    let p = 0.3;
    let frac = multi as f64 / built as f64;
    let sigma = (p * (1.0 - p) / built as f64).sqrt();
    assert!(built >= 990, "{built} scenes built");
    assert!((frac - p).abs() < 4.0 * sigma, "multi fraction {frac}");
}

#[test]
fn built_scenes_meet_scene_invariants() {
    let (catalog, pairing) = fixture_catalog();
    let cfg = SceneConfig {
        resolution: 64,
        multi_object_prob: 1.0,
        ..SceneConfig::default()
    };
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing).unwrap();
    for i in 0..20 {
        let s = builder.build(i, 7).unwrap();
        assert_eq!(s.placements.len(), 2);
        let again = builder.build(i, 7).unwrap();
        assert_eq!(s.to_json(), again.to_json());
        assert_eq!(SceneSpec::from_json(&s.to_json()).unwrap(), s);
        let to_light = s.light.center - s.placements[0].world_aabb.center();
        let elevation = (to_light.z / to_light.norm()).asin().to_degrees();
        assert!((elevation - 45.0).abs() <= 1.0);
        let expected_bottom = match s.mirror.kind {
            MirrorKind::FullWall => s.ground_z,
            MirrorKind::TallRect => s.ground_z + cfg.tall_rect.sill,
        };
        assert!((s.mirror.bottom() - expected_bottom).abs() < 1e-12);
    }
}
