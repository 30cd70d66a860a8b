//! Generates a small dataset, then validates it and computes its metrics.
//!
//! ```text
//! cargo run --release --example generate_dataset -- [OUT_DIR] [SCENES]
//! ```

use std::path::PathBuf;

use mirrorscene::dataset::{evaluate_metrics, generate, validate, GenerationConfig};

fn main() -> mirrorscene::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("dataset_out"));
    let scenes: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(4);
    let config = GenerationConfig {
        num_scenes: scenes,
        global_seed: 42,
        resolution: 128,
        out_dir: out.clone(),
        ..GenerationConfig::default()
    };
    let manifest = generate(&config)?;
    println!(
        "{} rows from {} scenes ({} skipped)",
        manifest.rows.len(),
        manifest.header.scenes_written,
        manifest.header.skipped.len()
    );

    let report = validate(&out, None)?;
    for (name, c) in &report.checks {
        println!("  {name:<10} passed {:3}  failed {}", c.passed, c.failed);
    }

    let metrics = evaluate_metrics(&out, None, None)?;
    println!(
        "main render vs oracle over the mirror: PSNR {:.2} dB, SSIM {:.4}",
        metrics.mean.psnr, metrics.mean.ssim
    );
    Ok(())
}
