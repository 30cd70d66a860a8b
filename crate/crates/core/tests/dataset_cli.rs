//! End-to-end generation, validation with negative fixtures, metrics,
//! contact sheets and the command line.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::tempdir;
use mirrorscene::assets::fixtures::{bundled_catalog_dir, write_fixture_catalog};
use mirrorscene::cli;
use mirrorscene::dataset::{
    contact_sheet, evaluate_metrics, generate, validate, write_scenes, GenerationConfig, Manifest, CHECKS,
    CONTACT_THUMB, MANIFEST_FILE, PARTIAL_SENTINEL,
};
use mirrorscene::geometry::Vec3;
use mirrorscene::scene::{SceneBuilder, SceneSpec};

fn small_config(out: &Path, scenes: u64) -> GenerationConfig {
    GenerationConfig {
        num_scenes: scenes,
        global_seed: 17,
        resolution: 48,
        samples_per_pixel: 1,
        shadow_samples: 4,
        multi_object_prob: 0.5,
        out_dir: out.to_path_buf(),
        ..GenerationConfig::default()
    }
}

fn built_specs(config: &GenerationConfig, count: usize) -> Vec<SceneSpec> {
    let (catalog, pairing) = config.load_assets().unwrap();
    let builder = SceneBuilder::new(&config.scene_config(), &catalog, &pairing).unwrap();
    (0..)
        .filter_map(|i| builder.build(i, config.global_seed).ok())
        .take(count)
        .collect()
}

fn run(args: &[&str]) -> i32 {
    cli::run(std::iter::once("mirrorscene").chain(args.iter().copied()))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generated_dataset_is_complete_and_valid() {
    let dir = tempdir();
    let out = dir.path().join("ds");
    let m = generate(&small_config(&out, 10)).unwrap();
    let h = &m.header;
    assert_eq!(h.scenes_attempted, 10);
    assert_eq!(h.scenes_written + h.skipped.len() as u64, 10);
    assert_eq!(m.rows.len() as u64, 3 * h.scenes_written);
    assert!(!out.join(PARTIAL_SENTINEL).exists());
    for (k, r) in m.rows.iter().enumerate() {
        assert_eq!(r.sample, k);
        assert!(r.validation.all(), "row {k}: {:?}", r.validation);
        for f in r.all_files() {
            assert!(m.resolve(f).is_file());
        }
    }
    let report = validate(&out, None).unwrap();
    assert!(report.ok, "{:?}", report.failures);
    assert_eq!(report.rows, m.rows.len());
    assert_eq!(report.checks.len(), CHECKS.len());
    assert_eq!(Manifest::load(&out.join(MANIFEST_FILE)).unwrap().rows, m.rows);
}

#[test]
fn corrupted_file_fails_digest_for_that_row_only() {
    let dir = tempdir();
    let out = dir.path().join("ds");
    let m = generate(&small_config(&out, 2)).unwrap();
    let target = &m.rows[1];
    let path = m.resolve(target.file("depth").unwrap());
    let mut bytes = std::fs::read(&path).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x5a;
    std::fs::write(&path, bytes).unwrap();

    let report = validate(&out, None).unwrap();
    assert!(!report.ok);
    let digest: Vec<_> = report.failures.iter().filter(|f| f.check == "digest").collect();
    assert_eq!(digest.len(), 1);
    assert_eq!(digest[0].sample, Some(target.sample));
    assert_eq!(report.failed_checks().into_iter().collect::<Vec<_>>(), ["digest"]);
    assert_eq!(run(&["validate", "--manifest", path_str(&out)]), 1);
}

#[test]
fn floating_object_fails_grounding_for_that_scene_only() {
    let dir = tempdir();
    let config = small_config(&dir.path().join("ds"), 1);
    let mut specs = built_specs(&config, 3);
    let lift = Vec3::new(0.0, 0.0, 0.2);
    let p = &mut specs[1].placements[0];
    p.translation += lift;
    p.world_aabb = p.world_aabb.translated(lift);
    write_scenes(&config, &specs).unwrap();

    let report = validate(&config.out_dir, None).unwrap();
    let grounding: Vec<_> = report.failures.iter().filter(|f| f.check == "grounding").collect();
    assert_eq!(grounding.len(), 1);
    assert_eq!(grounding[0].scene_id, specs[1].scene_id);
    assert_eq!(report.checks["grounding"].failed, 1);
    assert_eq!(report.checks["grounding"].passed, 2);
    assert_eq!(report.checks["digest"].failed, 0);
    assert_eq!(report.checks["disjoint"].failed, 0);
    assert_eq!(run(&["validate", "--manifest", path_str(&config.out_dir)]), 1);
}

#[test]
fn overlapping_objects_fail_disjoint() {
    let dir = tempdir();
    let mut config = small_config(&dir.path().join("ds"), 1);
    config.multi_object_prob = 1.0;
    let mut specs = built_specs(&config, 2);
    let (catalog, _) = config.load_assets().unwrap();
    let s = &mut specs[0];
    let (a, b) = (s.placements[0].translation, s.placements[1].translation);
    let q = &mut s.placements[1];
    q.translation = Vec3::new(a.x, a.y, b.z);
    q.world_aabb = q.derive_aabb(catalog.asset(&q.asset_id).unwrap()).unwrap();
    write_scenes(&config, &specs).unwrap();

    let report = validate(&config.out_dir, None).unwrap();
    let disjoint: Vec<_> = report.failures.iter().filter(|f| f.check == "disjoint").collect();
    assert_eq!(disjoint.len(), 1);
    assert_eq!(disjoint[0].scene_id, specs[0].scene_id);
    assert_eq!(report.checks["grounding"].failed, 0);
    assert_eq!(report.checks["digest"].failed, 0);
}

#[test]
fn metrics_against_itself_and_against_the_oracle() {
    let dir = tempdir();
    let out = dir.path().join("ds");
    let m = generate(&small_config(&out, 2)).unwrap();
    let same = evaluate_metrics(&out, Some(&out), None).unwrap();
    assert_eq!(same.samples.len(), m.rows.len());
    assert_eq!(same.mean.psnr, 99.0);
    assert!((same.mean.ssim - 1.0).abs() < 1e-12);

    let oracle = evaluate_metrics(&out, None, None).unwrap();
    assert_eq!(oracle.samples.len(), m.rows.len());
    let mean_match = oracle.samples.iter().map(|s| s.oracle_match.unwrap()).sum::<f64>() / m.rows.len() as f64;
    assert!((oracle.mean.oracle_match.unwrap() - mean_match).abs() < 1e-12);
    assert!(mean_match >= 0.99);
}

#[test]
fn contact_sheet_has_one_row_per_pick() {
    let dir = tempdir();
    let out = dir.path().join("ds");
    generate(&small_config(&out, 2)).unwrap();
    let png = dir.path().join("sheet.png");
    contact_sheet(&out, &png, 4, 3).unwrap();
    let img = image::open(&png).unwrap();
    assert_eq!((img.width(), img.height()), (6 * CONTACT_THUMB, 4 * CONTACT_THUMB));
    assert!(contact_sheet(&out, &png, 0, 3).is_err());
    assert!(contact_sheet(&out, &png, 1000, 3).is_err());

    let empty = small_config(&dir.path().join("empty"), 1);
    write_scenes(&empty, &[]).unwrap();
    assert!(contact_sheet(&empty.out_dir, &png, 1, 0).is_err());
    assert_eq!(
        run(&[
            "contact-sheet",
            "--manifest",
            path_str(&empty.out_dir),
            "--out",
            path_str(&png)
        ]),
        1
    );
}

#[test]
fn render_one_honours_resolution_and_rejects_bad_json() {
    let dir = tempdir();
    let config = small_config(&dir.path().join("ds"), 1);
    let spec = &built_specs(&config, 1)[0];
    let scene = dir.path().join("scene.json");
    std::fs::write(&scene, spec.to_json()).unwrap();
    let out = dir.path().join("one");
    let code = run(&[
        "render-one",
        "--scene",
        path_str(&scene),
        "--out",
        path_str(&out),
        "--resolution",
        "24",
        "--spp",
        "1",
    ]);
    assert_eq!(code, 0);
    let img = image::open(out.join("view0_rgb.png")).unwrap();
    assert_eq!((img.width(), img.height()), (24, 24));
    assert!(out.join("view2_oracle.png").is_file());

    std::fs::write(&scene, "{ not json").unwrap();
    assert_eq!(
        run(&["render-one", "--scene", path_str(&scene), "--out", path_str(&out)]),
        1
    );
}

#[test]
fn exit_codes_follow_the_error_kind() {
    let dir = tempdir();
    let missing = dir.path().join("nothing");
    assert_eq!(run(&["validate", "--manifest", path_str(&missing)]), 2);
    assert_eq!(run(&["generate", "--bogus"]), 1);
    let out = dir.path().join("bad");
    assert_eq!(
        run(&["generate", "--out", path_str(&out), "--multi-object-prob", "1.5"]),
        1
    );
    assert_eq!(run(&["generate", "--out", path_str(&out), "--spp", "3"]), 1);
    let bad_catalog = dir.path().join("catalog.json");
    std::fs::write(&bad_catalog, "[").unwrap();
    assert_eq!(
        run(&["generate", "--out", path_str(&out), "--catalog", path_str(&bad_catalog)]),
        1
    );
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempdir();
    let toml = dir.path().join("gen.toml");
    std::fs::write(
        &toml,
        "num_scenes = 1\nresolution = 32\nsamples_per_pixel = 1\nshadow_samples = 2\nglobal_seed = 5\n",
    )
    .unwrap();
    let out = dir.path().join("ds");
    let code = run(&[
        "generate",
        "--config",
        path_str(&toml),
        "--out",
        path_str(&out),
        "--seed",
        "6",
    ]);
    assert_eq!(code, 0);
    let m = Manifest::load(&out).unwrap();
    assert_eq!(m.header.config.global_seed, 6);
    assert_eq!(m.header.config.resolution, 32);

    std::fs::write(&toml, "num_scene = 1\n").unwrap();
    assert_eq!(
        run(&["generate", "--config", path_str(&toml), "--out", path_str(&out)]),
        1
    );
}

#[test]
fn help_documents_every_flag() {
    let bin = env!("CARGO_BIN_EXE_mirrorscene");
    let help = |args: &[&str]| {
        let o = Command::new(bin).args(args).output().unwrap();
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    let top = help(&["--help"]);
    for sub in ["generate", "render-one", "validate", "metrics", "contact-sheet"] {
        assert!(top.contains(sub), "{sub}");
    }
    let gen = help(&["generate", "--help"]);
    for flag in [
        "--scenes",
        "--seed",
        "--out",
        "--catalog",
        "--pairing",
        "--resolution",
        "--spp",
        "--shadow-samples",
        "--multi-object-prob",
        "--workers",
        "--strict-paper-grounding",
        "--config",
    ] {
        assert!(gen.contains(flag), "{flag}");
    }
    for sub in ["validate", "metrics", "contact-sheet"] {
        assert!(help(&[sub, "--help"]).contains("--seed"), "{sub}");
    }
    let o = Command::new(bin).args(["validate", "--nope"]).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fixture_generator_reproduces_the_bundled_catalog() {
    let dir = tempdir();
    write_fixture_catalog(dir.path()).unwrap();
    let bundled = bundled_catalog_dir();
    let mut files = Vec::new();
    collect(&bundled, &mut files);
    assert!(files.len() > 5);
    for f in files {
        let rel = f.strip_prefix(&bundled).unwrap();
        let fresh = std::fs::read(dir.path().join(rel)).unwrap();
        assert_eq!(std::fs::read(&f).unwrap(), fresh, "{}", rel.display());
    }
}

fn collect(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            collect(&p, out);
        } else {
            out.push(p);
        }
    }
}
