//! Builds one scene and writes the six passes of its three views.
//!
//! ```text
//! cargo run --release --example render_scene -- [OUT_DIR] [SCENE_INDEX] [RESOLUTION]
//! ```

use std::path::PathBuf;

use mirrorscene::assets::fixtures::bundled_catalog_dir;
use mirrorscene::assets::{Catalog, PairingTable};
use mirrorscene::render::{encode_passes, render, PreparedScene, RenderSettings, OBJECT_ID_BASE};
use mirrorscene::scene::{SceneBuilder, SceneConfig};

fn main() -> mirrorscene::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("render_scene_out"));
    let index: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let res: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(256);

    let catalog = Catalog::load(&bundled_catalog_dir())?;
    let pairing = PairingTable::default_for(&catalog);
    let cfg = SceneConfig {
        resolution: res,
        ..SceneConfig::default()
    };
    let spec = SceneBuilder::new(&cfg, &catalog, &pairing)?.build(index, 42)?;
    println!(
        "scene {}: {:?} mirror, floor {}, sky {}, {} object(s), views {:?}",
        spec.scene_id,
        spec.mirror.kind,
        spec.floor_texture_id,
        spec.environment_id,
        spec.placements.len(),
        spec.views
    );
    let scene = PreparedScene::new(&spec, &catalog)?;
    let settings = RenderSettings::square(res);
    for (slot, view) in spec.cameras.iter().enumerate() {
        let passes = render(&scene, view, &settings);
        let files = encode_passes(&passes, &out, &format!("view{slot}"))?;
        let cover: Vec<String> = (0..spec.placements.len())
            .map(|k| {
                let id = OBJECT_ID_BASE + k as u16;
                format!(
                    "{:.2}%/{:.2}%",
                    100.0 * passes.coverage(id),
                    100.0 * passes.reflected_coverage(id)
                )
            })
            .collect();
        println!(
            "view {slot} (rig pose {}): coverage direct/reflected {cover:?}",
            view.index
        );
        for p in &files.paths {
            println!("  {}", p.display());
        }
    }
    Ok(())
}
