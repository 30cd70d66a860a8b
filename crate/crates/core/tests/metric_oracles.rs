//! Masked PSNR and SSIM against closed forms and a direct two-pass
//! reference implementation.

use mirrorscene::metrics::{aggregate, psnr, ssim, MaskedPair, SampleMetrics, SsimParams, PSNR_CAP};
use mirrorscene::rng::Stream;

const W: u32 = 40;
const H: u32 = 32;
const N: usize = (W * H) as usize;

fn noise_image(seed: u64) -> Vec<[u8; 3]> {
    let mut rng = Stream::new(seed, "image");
    (0..N)
        .map(|i| {
            // Smooth ramps plus noise so windows have structure.
            let (x, y) = ((i as u32 % W) as f64, (i as u32 / W) as f64);
            let base = 60.0 + 3.0 * x + 2.0 * y;
            [0, 1, 2].map(|k| (base + 20.0 * k as f64 + rng.uniform(0.0, 30.0)).min(255.0) as u8)
        })
        .collect()
}

fn center_mask() -> Vec<bool> {
    (0..N)
        .map(|i| (6..34).contains(&(i as u32 % W)) && (5..27).contains(&(i as u32 / W)))
        .collect()
}

fn luma(p: &[u8; 3]) -> f64 {
    0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64
}

/// Gathers each masked window's weighted samples, then computes means,
/// variances and covariance in two passes.
fn reference_ssim(a: &[[u8; 3]], b: &[[u8; 3]], mask: &[bool]) -> f64 {
    let (w, h) = (W as i64, H as i64);
    let c1 = (0.01f64 * 255.0).powi(2);
    let c2 = (0.03f64 * 255.0).powi(2);
    let mut scores = Vec::new();
    for cy in 0..h {
        for cx in 0..w {
            if !mask[(cy * w + cx) as usize] {
                continue;
            }
            let mut samples = Vec::new();
            for y in (cy - 5).max(0)..=(cy + 5).min(h - 1) {
                for x in (cx - 5).max(0)..=(cx + 5).min(w - 1) {
                    let i = (y * w + x) as usize;
                    if mask[i] {
                        let d2 = ((x - cx).pow(2) + (y - cy).pow(2)) as f64;
                        samples.push(((-d2 / 4.5).exp(), luma(&a[i]), luma(&b[i])));
                    }
                }
            }
            let total: f64 = samples.iter().map(|s| s.0).sum();
            let ma = samples.iter().map(|s| s.0 * s.1).sum::<f64>() / total;
            let mb = samples.iter().map(|s| s.0 * s.2).sum::<f64>() / total;
            let va = samples.iter().map(|s| s.0 * (s.1 - ma).powi(2)).sum::<f64>() / total;
            let vb = samples.iter().map(|s| s.0 * (s.2 - mb).powi(2)).sum::<f64>() / total;
            let cov = samples.iter().map(|s| s.0 * (s.1 - ma) * (s.2 - mb)).sum::<f64>() / total;
            scores.push(((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2)));
        }
    }
    scores.iter().sum::<f64>() / scores.len() as f64
}

fn both(a: &[[u8; 3]], b: &[[u8; 3]], mask: &[bool]) -> (f64, f64) {
    let pair = MaskedPair::new(W, H, a, b, mask).unwrap();
    (psnr(&pair), ssim(&pair, &SsimParams::default()))
}

#[test]
fn unit_offset_gives_mse_one() {
    let a = noise_image(1);
    let b: Vec<[u8; 3]> = a.iter().map(|p| p.map(|c| c.saturating_add(1))).collect();
    let a: Vec<[u8; 3]> = b.iter().map(|p| p.map(|c| c - 1)).collect();
    let (p, _) = both(&a, &b, &center_mask());
    assert!((p - 48.1308).abs() < 1e-3, "{p}");
}

#[test]
fn identical_images_hit_the_caps() {
    let a = noise_image(2);
    let (p, s) = both(&a, &a, &center_mask());
    assert_eq!(p, PSNR_CAP);
    assert!((s - 1.0).abs() < 1e-12);
}

#[test]
fn constant_images_match_zero_variance_closed_form() {
    let a = vec![[100u8; 3]; N];
    let b = vec![[150u8; 3]; N];
    let c1 = (0.01f64 * 255.0).powi(2);
    let expected = (2.0 * 100.0 * 150.0 + c1) / (100.0f64.powi(2) + 150.0f64.powi(2) + c1);
    let (_, s) = both(&a, &b, &center_mask());
    // Evaluates to 0.92309.
    assert!((s - expected).abs() < 1e-3, "{s} vs {expected}");
}

#[test]
fn ssim_agrees_with_reference_implementation() {
    let mask = center_mask();
    for seed in 0..4 {
        let a = noise_image(seed);
        let b = noise_image(seed + 100);
        let (_, s) = both(&a, &b, &mask);
        assert!((s - reference_ssim(&a, &b, &mask)).abs() < 1e-9);
    }
}

#[test]
fn negative_image_scores_low() {
    let mask = center_mask();
    let a = noise_image(3);
    let neg: Vec<[u8; 3]> = a.iter().map(|p| p.map(|c| 255 - c)).collect();
    let (_, s) = both(&a, &neg, &mask);
    let r = reference_ssim(&a, &neg, &mask);
    assert!(s < 0.1 && r < 0.1, "{s} {r}");
}

#[test]
fn metrics_are_symmetric() {
    let mask = center_mask();
    let (a, b) = (noise_image(4), noise_image(5));
    let (p1, s1) = both(&a, &b, &mask);
    let (p2, s2) = both(&b, &a, &mask);
    assert_eq!(p1, p2);
    assert!((s1 - s2).abs() < 1e-12);
}

#[test]
fn more_noise_scores_worse() {
    let mask = center_mask();
    let a = noise_image(6);
    let mut rng = Stream::new(9, "noise");
    let offsets: Vec<f64> = (0..N * 3).map(|_| rng.uniform(-1.0, 1.0)).collect();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for amp in [2.0, 8.0, 32.0] {
        let b: Vec<[u8; 3]> = a
            .iter()
            .enumerate()
            .map(|(i, p)| [0, 1, 2].map(|k| (p[k] as f64 + amp * offsets[3 * i + k]).round().clamp(0.0, 255.0) as u8))
            .collect();
        let (p, s) = both(&a, &b, &mask);
        assert!(p < last.0 && s < last.1, "amp {amp}: {p} {s}");
        last = (p, s);
    }
}

#[test]
fn unmasked_pixels_do_not_matter() {
    let mask = center_mask();
    let (a, b) = (noise_image(7), noise_image(8));
    let mut c = b.clone();
    for (px, &m) in c.iter_mut().zip(&mask) {
        if !m {
            *px = [255, 0, 255];
        }
    }
    assert_eq!(both(&a, &b, &mask), both(&a, &c, &mask));
}

#[test]
fn aggregation_is_the_plain_mean() {
    let samples: Vec<SampleMetrics> = [(20.0, 0.5, 0.9), (30.0, 0.7, 1.0), (40.0, 0.9, 0.95)]
        .iter()
        .enumerate()
        .map(|(k, &(p, s, o))| SampleMetrics {
            sample: k,
            scene_id: format!("s{k}"),
            view: 0,
            psnr: p,
            ssim: s,
            oracle_match: Some(o),
        })
        .collect();
    let mean = aggregate(&samples).unwrap();
    assert_eq!(mean.count, 3);
    assert!((mean.psnr - 30.0).abs() < 1e-12);
    assert!((mean.ssim - 0.7).abs() < 1e-12);
    assert!((mean.oracle_match.unwrap() - 0.95).abs() < 1e-12);
    assert!(aggregate(&[]).is_err());
}
