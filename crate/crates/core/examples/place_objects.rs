//! Places a single object and a collision-free pair inside the sampling
//! region, grounded on the floor.
//!
//! ```text
//! cargo run --example place_objects -- [SEED]
//! ```

use mirrorscene::assets::fixtures::bundled_catalog_dir;
use mirrorscene::assets::{Catalog, PairingTable};
use mirrorscene::placement::{place_object, place_pair, GroundingMode, PairRequest, Placement};
use mirrorscene::rng::Stream;
use mirrorscene::scene::{MirrorKind, SceneBuilder, SceneConfig};

fn show(p: &Placement) {
    let b = &p.world_aabb;
    println!(
        "  {} ({}): scale {:.3}, angle {:.3}, box [{:.2}, {:.2}, {:.2}] - [{:.2}, {:.2}, {:.2}]",
        p.asset_id, p.category, p.scale, p.rotation_angle, b.min.x, b.min.y, b.min.z, b.max.x, b.max.y, b.max.z
    );
}

fn main() -> mirrorscene::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let catalog = Catalog::load(&bundled_catalog_dir())?;
    let pairing = PairingTable::default_for(&catalog);
    let cfg = SceneConfig::default();
    let builder = SceneBuilder::new(&cfg, &catalog, &pairing)?;
    let region = &builder.region(MirrorKind::FullWall).polygon;

    let mut rng = Stream::new(seed, "example");
    let chair = catalog.asset("fx_chair_01")?;
    println!("single object:");
    show(&place_object(
        chair,
        region,
        &mut rng,
        cfg.ground_z,
        GroundingMode::Symmetric,
    )?);

    let req = PairRequest {
        catalog: &catalog,
        pairing: &pairing,
        region,
        ground_z: cfg.ground_z,
        max_attempts: cfg.max_attempts,
        mode: GroundingMode::Symmetric,
    };
    let pair = place_pair(chair, &req, &mut rng)?;
    println!("pair after {} attempt(s):", pair.attempts);
    show(&pair.primary);
    show(&pair.secondary);
    println!(
        "  overlap volume {:.3e}",
        pair.primary.world_aabb.overlap_volume(&pair.secondary.world_aabb)
    );
    Ok(())
}
