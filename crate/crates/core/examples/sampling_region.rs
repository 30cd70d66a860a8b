//! Computes the ground region from which an object and its reflection are
//! visible to every camera of the rig, for both mirror kinds, and checks
//! random samples against direct ray casts.
//!
//! ```text
//! cargo run --example sampling_region
//! ```

use mirrorscene::geometry::{reflect_point, Vec3};
use mirrorscene::placement::{camera_frustum, sample_position};
use mirrorscene::rng::Stream;
use mirrorscene::scene::{camera_rig_for, MirrorKind, SceneBuilder, SceneConfig};

fn main() -> mirrorscene::Result<()> {
    let cfg = SceneConfig::default();
    let catalog = mirrorscene::assets::Catalog::load(&mirrorscene::assets::fixtures::bundled_catalog_dir())?;
    let pairing = mirrorscene::assets::PairingTable::default_for(&catalog);
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing)?;
    for kind in [MirrorKind::FullWall, MirrorKind::TallRect] {
        let mirror = cfg.mirror(kind);
        let rig = camera_rig_for(&cfg.rig, mirror.aperture.center);
        let region = builder.region(kind);
        println!(
            "{kind:?}: visible area {:.3}, eroded area {:.3}",
            region.visible.area(),
            region.polygon.area()
        );
        for v in &region.polygon.vertices {
            println!("  ({:.3}, {:.3})", v.x, v.y);
        }

        let mut rng = Stream::new(7, "example");
        let mut ok = 0;
        let n = 200;
        for _ in 0..n {
            let p = sample_position(&region.polygon, &mut rng)?;
            let q = Vec3::new(p.x, p.y, cfg.ground_z);
            let seen = rig.iter().all(|cam| {
                let eye = cam.pose.translation;
                let mirrored = reflect_point(&mirror.plane, eye);
                let d = q - mirrored;
                let t = -mirrored.y / d.y;
                camera_frustum(cam).contains(q, 1e-9)
                    && t > 0.0
                    && t < 1.0
                    && mirror.aperture_contains(mirrored + d * t, 1e-9)
            });
            ok += usize::from(seen);
        }
        println!("  {ok}/{n} sampled points seen directly and in the mirror by all 19 cameras");
    }
    Ok(())
}
