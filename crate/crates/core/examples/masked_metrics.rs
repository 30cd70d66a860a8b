//! Masked PSNR and SSIM on synthetic images, and averaging over a set.
//!
//! ```text
//! cargo run --example masked_metrics
//! ```

use mirrorscene::metrics::{aggregate, psnr, ssim, MaskedPair, SampleMetrics, SsimParams};

fn main() -> mirrorscene::Result<()> {
    let (w, h) = (32u32, 32u32);
    let n = (w * h) as usize;
    let base: Vec<[u8; 3]> = (0..n).map(|i| [(i % 200) as u8, (i / 7 % 200) as u8, 90]).collect();
    let mask: Vec<bool> = (0..n)
        .map(|i| (8..24).contains(&(i % 32)) && (8..24).contains(&(i / 32)))
        .collect();

    let mut samples = Vec::new();
    for (k, offset) in [1u8, 4, 16].into_iter().enumerate() {
        let shifted: Vec<[u8; 3]> = base.iter().map(|p| p.map(|c| c + offset)).collect();
        let pair = MaskedPair::new(w, h, &base, &shifted, &mask)?;
        let s = SampleMetrics {
            sample: k,
            scene_id: format!("synthetic{k}"),
            view: 0,
            psnr: psnr(&pair),
            ssim: ssim(&pair, &SsimParams::default()),
            oracle_match: None,
        };
        println!("offset {offset:2}: PSNR {:.4} dB, SSIM {:.4}", s.psnr, s.ssim);
        samples.push(s);
    }
    let mean = aggregate(&samples)?;
    println!(
        "mean over {} images: PSNR {:.4} dB, SSIM {:.4}",
        mean.count, mean.psnr, mean.ssim
    );
    Ok(())
}
