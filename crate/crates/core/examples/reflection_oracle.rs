//! Renders a scene and its reflection oracle (the scene seen by the mirrored
//! camera, mirror removed) and reports how well the mirror region agrees.
//!
//! ```text
//! cargo run --release --example reflection_oracle -- [SCENE_INDEX] [RESOLUTION]
//! ```

use mirrorscene::assets::fixtures::bundled_catalog_dir;
use mirrorscene::assets::{Catalog, PairingTable};
use mirrorscene::metrics::oracle_match;
use mirrorscene::render::{render, render_reflection_oracle, PreparedScene, RenderSettings};
use mirrorscene::scene::{SceneBuilder, SceneConfig};

fn main() -> mirrorscene::Result<()> {
    let mut args = std::env::args().skip(1);
    let index: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let res: u32 = args.next().and_then(|s| s.parse().ok()).unwrap_or(128);

    let catalog = Catalog::load(&bundled_catalog_dir())?;
    let pairing = PairingTable::default_for(&catalog);
    let cfg = SceneConfig {
        resolution: res,
        ..SceneConfig::default()
    };
    let spec = SceneBuilder::new(&cfg, &catalog, &pairing)?.build(index, 42)?;
    let scene = PreparedScene::new(&spec, &catalog)?;
    let settings = RenderSettings::square(res);
    for view in &spec.cameras {
        let main = render(&scene, view, &settings);
        let oracle = render_reflection_oracle(&scene, view, &settings)?;
        let m = oracle_match(&main, &oracle.rgb, &oracle.valid)?;
        println!(
            "rig pose {:2}: {} pixels compared, match rate {:.4}, max error {}",
            view.index, m.pixels, m.match_rate, m.max_error
        );
    }
    Ok(())
}
