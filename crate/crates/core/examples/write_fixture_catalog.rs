//! Writes the bundled fixture catalog (meshes, textures, `catalog.json`,
//! `pairing.json`) to a directory.
//!
//! ```text
//! cargo run --example write_fixture_catalog -- [OUT_DIR]
//! ```
//!
//! With no argument the catalog shipped in `fixtures/catalog` is regenerated.

use std::path::PathBuf;

use mirrorscene::assets::fixtures::{bundled_catalog_dir, write_fixture_catalog};
use mirrorscene::assets::Catalog;

fn main() -> mirrorscene::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(bundled_catalog_dir);
    let index = write_fixture_catalog(&dir)?;
    let catalog = Catalog::load(&index)?;
    println!("wrote {}", index.display());
    for cat in catalog.categories() {
        println!("  {cat}: {}", catalog.by_category[cat].join(", "));
    }
    println!(
        "  floors: {}",
        catalog.floors.keys().cloned().collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
