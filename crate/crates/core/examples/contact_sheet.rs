//! Writes a contact sheet of pass thumbnails for an existing dataset, or for
//! a freshly generated two-scene dataset when none is given.
//!
//! ```text
//! cargo run --release --example contact_sheet -- [DATASET_DIR] [OUT_PNG] [ROWS]
//! ```

use std::path::PathBuf;

use mirrorscene::dataset::{contact_sheet, generate, GenerationConfig};

fn main() -> mirrorscene::Result<()> {
    let mut args = std::env::args().skip(1);
    let dataset = match args.next() {
        Some(d) => PathBuf::from(d),
        None => {
            let config = GenerationConfig {
                num_scenes: 2,
                resolution: 96,
                out_dir: PathBuf::from("contact_sheet_data"),
                ..GenerationConfig::default()
            };
            generate(&config)?;
            config.out_dir
        }
    };
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| dataset.join("contact_sheet.png"));
    let rows: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    contact_sheet(&dataset, &out, rows, 0)?;
    println!("wrote {}", out.display());
    Ok(())
}
