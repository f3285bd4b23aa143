//! Synthetic H&E-like patches built from stain concentrations through the
//! Beer-Lambert model. Used by the benchmark and by tests that need a
//! realistic, reproducible corpus.

use rand::Rng;

use crate::colorspace::{quantize, stain_matrix, RgbImage};
use crate::sampler::{item_rng, StainRng};

/// Peak stain concentrations of one synthetic slide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StainStyle {
    pub hematoxylin: f64,
    pub eosin: f64,
}

impl StainStyle {
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StainStyle {
            hematoxylin: rng.random_range(0.3..0.55),
            eosin: rng.random_range(0.15..0.35),
        }
    }
}

/// Uniform absorbance of the slide itself, keeping highlights off 255.
const GLASS_OD: f64 = 0.06;

struct Wave {
    fx: f64,
    fy: f64,
    phase: f64,
}

pub fn tissue_patch<R: Rng + ?Sized>(width: u32, height: u32, style: StainStyle, rng: &mut R) -> RgbImage {
    let m = stain_matrix();
    let waves: Vec<Wave> = (0..3)
        .map(|_| Wave {
            fx: rng.random_range(0.02..0.12),
            fy: rng.random_range(0.02..0.12),
            phase: rng.random_range(0.0..std::f64::consts::TAU),
        })
        .collect();
    let nuclei: Vec<(f64, f64, f64)> = (0..(width * height / 900).max(2))
        .map(|_| {
            (
                rng.random_range(0.0..width as f64),
                rng.random_range(0.0..height as f64),
                rng.random_range(2.5..6.0),
            )
        })
        .collect();
    let mut data = Vec::with_capacity(width as usize * height as usize * 3);
    for y in 0..height {
        for x in 0..width {
            let (xf, yf) = (x as f64, y as f64);
            let texture = waves.iter().map(|w| (w.fx * xf + w.fy * yf + w.phase).sin()).sum::<f64>() / 3.0;
            let mut h = 0.08 * style.hematoxylin * (1.0 + texture);
            let e = style.eosin * (0.75 + 0.25 * texture) + rng.random_range(-0.02..0.02);
            for &(cx, cy, r) in &nuclei {
                let d2 = (xf - cx).powi(2) + (yf - cy).powi(2);
                if d2 < r * r {
                    h += style.hematoxylin * (1.0 - d2 / (r * r)).sqrt();
                }
            }
            h += rng.random_range(-0.02..0.02);
            for (hc, ec) in m[0].iter().zip(&m[1]) {
                let od = GLASS_OD + h.max(0.0) * hc + e.max(0.0) * ec;
                data.push(quantize(255.0 * 10f64.powf(-od)).0);
            }
        }
    }
    RgbImage::new(width, height, data).expect("dimensions are consistent")
}

/// `n` patches, each with its own random style, reproducible from `seed`.
pub fn corpus(n: usize, width: u32, height: u32, seed: u64) -> Vec<RgbImage> {
    (0..n)
        .map(|i| {
            let mut rng: StainRng = item_rng(seed, i as u64);
            let style = StainStyle::random(&mut rng);
            tissue_patch(width, height, style, &mut rng)
        })
        .collect()
}
