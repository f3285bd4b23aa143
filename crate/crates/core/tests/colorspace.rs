mod common;

use proptest::prelude::*;
use stainforge::colorspace::{
    from_planes, hed_from_rgb, hsv_from_rgb, lab_from_rgb, stain_matrix, to_planes, ColorSpace, PlaneImage, RgbImage,
};
use stainforge::stats::channel_stats;

/// Textbook CIE formulas written out independently of the library path,
/// with the published D65 white (0.95047, 1.0, 1.08883).
fn reference_lab(rgb: [u8; 3]) -> [f64; 3] {
    let lin = |v: u8| {
        let c = v as f64 / 255.0;
        if c <= 0.04045 { c / 12.92 } else { ((c + 0.055) / 1.055).powf(2.4) }
    };
    let (r, g, b) = (lin(rgb[0]), lin(rgb[1]), lin(rgb[2]));
    let x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
    let y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
    let z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;
    let f = |t: f64| if t > 0.008856451679035631 { t.cbrt() } else { (903.2962962962963 * t + 16.0) / 116.0 };
    let (fx, fy, fz) = (f(x / 0.95047), f(y / 1.0), f(z / 1.08883));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

#[test]
fn lab_agrees_with_reference_formulas() {
    for px in common::rgb_grid(5000) {
        let a = lab_from_rgb(px);
        let b = reference_lab(px);
        // the two differ only through the white-point rounding
        for c in 0..3 {
            assert!((a[c] - b[c]).abs() < 2e-3, "{px:?}: {a:?} vs {b:?}");
        }
    }
}

#[test]
fn hsv_round_trip_is_exact_on_grid() {
    let grid = common::rgb_grid(200_000);
    let img = RgbImage::new(grid.len() as u32, 1, grid.concat()).unwrap();
    let back = from_planes(&to_planes(&img, ColorSpace::Hsv));
    assert_eq!(back.image, img);
    assert_eq!(back.clamped_pixels, 0);
}

#[test]
fn hsv_planes_are_in_range() {
    for px in common::rgb_grid(50_000) {
        let [h, s, v] = hsv_from_rgb(px);
        assert!((0.0..360.0).contains(&h) && (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&v));
    }
}

#[test]
fn lab_planes_are_in_range() {
    for px in common::rgb_grid(50_000) {
        let [l, a, b] = lab_from_rgb(px);
        assert!((0.0..=100.0 + 1e-9).contains(&l), "{px:?}");
        assert!((-128.0..=127.0).contains(&a) && (-128.0..=127.0).contains(&b), "{px:?}");
    }
}

#[test]
fn hed_recovers_synthesized_stain_mixtures() {
    // Build pixels from known concentrations with the stain matrix, then
    // check deconvolution gives them back up to 8-bit quantization.
    let m = stain_matrix();
    let mut rng = common::rng(2);
    use rand::Rng;
    for _ in 0..2000 {
        let conc = [rng.random_range(0.0..0.9), rng.random_range(0.0..0.6), rng.random_range(0.0..0.3)];
        let rgb: [u8; 3] = std::array::from_fn(|c| {
            let od: f64 = (0..3).map(|s| conc[s] * m[s][c]).sum();
            (255.0 * 10f64.powf(-od)).round() as u8
        });
        let hed = hed_from_rgb(rgb);
        for s in 0..3 {
            assert!((hed[s] - conc[s]).abs() < 0.05, "{conc:?} -> {rgb:?} -> {hed:?}");
        }
    }
}

#[test]
fn conversions_are_deterministic() {
    let img = common::noise_image(40, 40, &mut common::rng(1));
    for space in ColorSpace::ALL {
        let a = from_planes(&to_planes(&img, space));
        let b = from_planes(&to_planes(&img, space));
        assert_eq!(a, b);
        assert_eq!(to_planes(&img, space), to_planes(&img, space));
    }
}

#[test]
fn planes_do_not_mix_channels() {
    // Perturbing one plane leaves the statistics of the other two unchanged.
    let img = common::noise_image(16, 16, &mut common::rng(3));
    for space in ColorSpace::ALL {
        let planes = to_planes(&img, space);
        let before = channel_stats(&planes);
        let mut channels = planes.channels().clone();
        channels[1].iter_mut().for_each(|v| *v += 1.0);
        let bumped = PlaneImage::new(space, 16, 16, channels).unwrap();
        let after = channel_stats(&bumped);
        assert_eq!(before.avg[0], after.avg[0]);
        assert_eq!(before.avg[2], after.avg[2]);
        assert_eq!(before.std[0], after.std[0]);
    }
}

proptest! {
    #[test]
    fn lab_round_trip_within_one(r: u8, g: u8, b: u8) {
        let img = RgbImage::filled(1, 1, [r, g, b]).unwrap();
        let back = from_planes(&to_planes(&img, ColorSpace::Lab)).image;
        prop_assert!(common::max_channel_diff(&img, &back) <= 1);
    }

    #[test]
    fn hed_round_trip_within_two(r in 10u8.., g in 10u8.., b in 10u8..) {
        let img = RgbImage::filled(1, 1, [r, g, b]).unwrap();
        let back = from_planes(&to_planes(&img, ColorSpace::Hed)).image;
        prop_assert!(common::max_channel_diff(&img, &back) <= 2);
    }
}
