//! Conversion kernels between 8-bit RGB and the working color spaces.
//!
//! * LAB is CIE L*a*b* relative to D65 with the sRGB transfer curve, kept in
//!   floating point (L in [0, 100], a/b roughly in [-128, 127]).
//! * HSV is the hexcone model with hue in degrees and S/V in [0, 1].
//! * HED is Ruifrok-Johnston colour deconvolution of optical density into
//!   hematoxylin, eosin and DAB concentrations.
//!
//! Forward conversions are total. Inverse conversions clamp to the 8-bit
//! range and report how many pixels needed clamping.

use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ColorSpace {
    Lab,
    Hsv,
    Hed,
}

impl ColorSpace {
    pub const ALL: [ColorSpace; 3] = [ColorSpace::Lab, ColorSpace::Hsv, ColorSpace::Hed];

    pub fn name(self) -> &'static str {
        match self {
            ColorSpace::Lab => "lab",
            ColorSpace::Hsv => "hsv",
            ColorSpace::Hed => "hed",
        }
    }

    pub fn index(self) -> usize {
        match self {
            ColorSpace::Lab => 0,
            ColorSpace::Hsv => 1,
            ColorSpace::Hed => 2,
        }
    }

    /// Closed per-channel value range used to clamp template means and to
    /// scale additive noise.
    pub fn channel_range(self) -> [(f64, f64); 3] {
        match self {
            ColorSpace::Lab => [(0.0, 100.0), (-128.0, 127.0), (-128.0, 127.0)],
            ColorSpace::Hsv => [(0.0, 360.0), (0.0, 1.0), (0.0, 1.0)],
            ColorSpace::Hed => HED.ranges,
        }
    }

    pub fn channel_scale(self) -> [f64; 3] {
        self.channel_range().map(|(lo, hi)| hi - lo)
    }
}

impl fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColorSpace {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lab" => Ok(ColorSpace::Lab),
            "hsv" => Ok(ColorSpace::Hsv),
            "hed" => Ok(ColorSpace::Hed),
            other => Err(Error::InvalidConfig(format!("unknown color space `{other}`"))),
        }
    }
}

/// Row-major interleaved 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} bytes for {width}x{height}, got {}",
                data.len()
            )));
        }
        Ok(RgbImage { width, height, data })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Result<Self> {
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        RgbImage::new(width, height, data)
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Result<Self> {
        RgbImage::from_fn(width, height, |_, _| rgb)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }
}

/// Three real-valued planes of one image expressed in a working color space.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneImage {
    space: ColorSpace,
    width: u32,
    height: u32,
    channels: [Vec<f64>; 3],
}

impl PlaneImage {
    pub fn new(space: ColorSpace, width: u32, height: u32, channels: [Vec<f64>; 3]) -> Result<Self> {
        let n = width as usize * height as usize;
        if n == 0 {
            return Err(Error::InvalidImage("plane image must be nonempty".into()));
        }
        if channels.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidImage(format!(
                "every plane must hold {n} values"
            )));
        }
        Ok(PlaneImage { space, width, height, channels })
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels[0].is_empty()
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        &self.channels[c]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.channels[c]
    }

    pub fn channels(&self) -> &[Vec<f64>; 3] {
        &self.channels
    }

    pub fn channels_mut(&mut self) -> &mut [Vec<f64>; 3] {
        &mut self.channels
    }

    pub fn pixel(&self, i: usize) -> [f64; 3] {
        [self.channels[0][i], self.channels[1][i], self.channels[2][i]]
    }
}

/// RGB result of an inverse conversion together with the number of pixels
/// that had at least one channel clipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackConversion {
    pub image: RgbImage,
    pub clamped_pixels: usize,
}

impl BackConversion {
    pub fn clamped_fraction(&self) -> f64 {
        self.clamped_pixels as f64 / self.image.pixel_count() as f64
    }
}

pub fn to_planes(img: &RgbImage, space: ColorSpace) -> PlaneImage {
    let kernel: fn([u8; 3]) -> [f64; 3] = match space {
        ColorSpace::Lab => lab_from_rgb,
        ColorSpace::Hsv => hsv_from_rgb,
        ColorSpace::Hed => hed_from_rgb,
    };
    let n = img.pixel_count();
    let mut channels = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
    for px in img.pixels() {
        let v = kernel(px);
        for c in 0..3 {
            channels[c].push(v[c]);
        }
    }
    PlaneImage { space, width: img.width, height: img.height, channels }
}

pub fn from_planes(planes: &PlaneImage) -> BackConversion {
    let kernel: fn([f64; 3]) -> ([f64; 3], bool) = match planes.space {
        ColorSpace::Lab => |v| (lab_to_rgb_unclamped(v), false),
        ColorSpace::Hsv => hsv_to_rgb_unclamped,
        ColorSpace::Hed => |v| (hed_to_rgb_unclamped(v), false),
    };
    let mut data = Vec::with_capacity(planes.len() * 3);
    let mut clamped_pixels = 0;
    for i in 0..planes.len() {
        let (rgb, mut clipped) = kernel(planes.pixel(i));
        for v in rgb {
            let (q, c) = quantize(v);
            clipped |= c;
            data.push(q);
        }
        if clipped {
            clamped_pixels += 1;
        }
    }
    BackConversion {
        image: RgbImage { width: planes.width, height: planes.height, data },
        clamped_pixels,
    }
}

pub fn rgb_to_lab(img: &RgbImage) -> PlaneImage {
    to_planes(img, ColorSpace::Lab)
}

pub fn rgb_to_hsv(img: &RgbImage) -> PlaneImage {
    to_planes(img, ColorSpace::Hsv)
}

pub fn rgb_to_hed(img: &RgbImage) -> PlaneImage {
    to_planes(img, ColorSpace::Hed)
}

fn expect_space(planes: &PlaneImage, space: ColorSpace) -> Result<()> {
    if planes.space != space {
        return Err(Error::MixedColorSpace { expected: space, found: planes.space });
    }
    Ok(())
}

pub fn lab_to_rgb(planes: &PlaneImage) -> Result<RgbImage> {
    expect_space(planes, ColorSpace::Lab)?;
    Ok(from_planes(planes).image)
}

pub fn hsv_to_rgb(planes: &PlaneImage) -> Result<RgbImage> {
    expect_space(planes, ColorSpace::Hsv)?;
    Ok(from_planes(planes).image)
}

pub fn hed_to_rgb(planes: &PlaneImage) -> Result<RgbImage> {
    expect_space(planes, ColorSpace::Hed)?;
    Ok(from_planes(planes).image)
}

/// Rounds half away from zero and clips to [0, 255]. The flag reports
/// whether clipping changed the value.
pub fn quantize(v: f64) -> (u8, bool) {
    let r = v.round();
    if r.is_nan() || r < 0.0 {
        (0, true)
    } else if r > 255.0 {
        (255, true)
    } else {
        (r as u8, false)
    }
}

// ---------------------------------------------------------------- matrices

type Mat3 = [[f64; 3]; 3];

fn invert3(m: &Mat3) -> Mat3 {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let det = m[0][0] * cof(1, 2, 1, 2) - m[0][1] * cof(1, 2, 0, 2) + m[0][2] * cof(1, 2, 0, 1);
    assert!(det.abs() > 1e-12, "singular 3x3 matrix");
    let inv_det = 1.0 / det;
    [
        [cof(1, 2, 1, 2) * inv_det, -cof(0, 2, 1, 2) * inv_det, cof(0, 1, 1, 2) * inv_det],
        [-cof(1, 2, 0, 2) * inv_det, cof(0, 2, 0, 2) * inv_det, -cof(0, 1, 0, 2) * inv_det],
        [cof(1, 2, 0, 1) * inv_det, -cof(0, 2, 0, 1) * inv_det, cof(0, 1, 0, 1) * inv_det],
    ]
}

fn mul_mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Row vector times matrix.
fn mul_vec_mat(v: [f64; 3], m: &Mat3) -> [f64; 3] {
    [
        v[0] * m[0][0] + v[1] * m[1][0] + v[2] * m[2][0],
        v[0] * m[0][1] + v[1] * m[1][1] + v[2] * m[2][1],
        v[0] * m[0][2] + v[1] * m[1][2] + v[2] * m[2][2],
    ]
}

// --------------------------------------------------------------------- LAB

const SRGB_TO_XYZ: Mat3 = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

const LAB_EPSILON: f64 = 216.0 / 24389.0;
const LAB_KAPPA: f64 = 24389.0 / 27.0;

struct LabConstants {
    xyz_to_srgb: Mat3,
    /// D65 white as the image of linear (1, 1, 1), so white maps to L = 100
    /// exactly.
    white: [f64; 3],
}

static LAB: LazyLock<LabConstants> = LazyLock::new(|| LabConstants {
    xyz_to_srgb: invert3(&SRGB_TO_XYZ),
    white: mul_mat_vec(&SRGB_TO_XYZ, [1.0, 1.0, 1.0]),
});

fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn linear_to_srgb(c: f64) -> f64 {
    if c <= 0.0031308 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

fn lab_f(t: f64) -> f64 {
    if t > LAB_EPSILON {
        t.cbrt()
    } else {
        (LAB_KAPPA * t + 16.0) / 116.0
    }
}

fn lab_f_inv(f: f64) -> f64 {
    let f3 = f * f * f;
    if f3 > LAB_EPSILON {
        f3
    } else {
        (116.0 * f - 16.0) / LAB_KAPPA
    }
}

pub fn lab_from_rgb(rgb: [u8; 3]) -> [f64; 3] {
    let lin = rgb.map(|v| srgb_to_linear(v as f64 / 255.0));
    let xyz = mul_mat_vec(&SRGB_TO_XYZ, lin);
    let w = LAB.white;
    let fx = lab_f(xyz[0] / w[0]);
    let fy = lab_f(xyz[1] / w[1]);
    let fz = lab_f(xyz[2] / w[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// LAB to RGB on the 0..=255 scale, before rounding and clipping.
pub fn lab_to_rgb_unclamped(lab: [f64; 3]) -> [f64; 3] {
    let fy = (lab[0] + 16.0) / 116.0;
    let fx = fy + lab[1] / 500.0;
    let fz = fy - lab[2] / 200.0;
    let w = LAB.white;
    let xyz = [lab_f_inv(fx) * w[0], lab_f_inv(fy) * w[1], lab_f_inv(fz) * w[2]];
    mul_mat_vec(&LAB.xyz_to_srgb, xyz).map(|c| linear_to_srgb(c) * 255.0)
}

// --------------------------------------------------------------------- HSV

pub fn hsv_from_rgb(rgb: [u8; 3]) -> [f64; 3] {
    let [r, g, b] = rgb.map(|v| v as f64 / 255.0);
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let s = if max > 0.0 { delta / max } else { 0.0 };
    let h = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    // rem_euclid can land on 360 for tiny negative inputs
    let h = if h >= 360.0 { h - 360.0 } else { h };
    [h, s, max]
}

/// HSV to RGB on the 0..=255 scale. Hue wraps modulo 360; saturation and
/// value are clipped to [0, 1] and the flag reports whether that happened.
pub fn hsv_to_rgb_unclamped(hsv: [f64; 3]) -> ([f64; 3], bool) {
    let h = hsv[0].rem_euclid(360.0);
    let s = hsv[1].clamp(0.0, 1.0);
    let v = hsv[2].clamp(0.0, 1.0);
    let clipped = s != hsv[1] || v != hsv[2];
    let c = v * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = v - c;
    ([(r + m) * 255.0, (g + m) * 255.0, (b + m) * 255.0], clipped)
}

// --------------------------------------------------------------------- HED

/// Optical density of the darkest representable intensity (value 1 of 255).
pub const OD_MAX: f64 = 2.406_540_180_433_955;

/// Ruifrok-Johnston stain vectors in OD space, one row per stain.
pub const STAIN_VECTORS: [[f64; 3]; 3] = [
    [0.65, 0.70, 0.29],
    [0.07, 0.99, 0.11],
    [0.27, 0.57, 0.78],
];

struct HedConstants {
    rgb_from_hed: Mat3,
    hed_from_rgb: Mat3,
    ranges: [(f64, f64); 3],
}

static HED: LazyLock<HedConstants> = LazyLock::new(|| {
    let rgb_from_hed = STAIN_VECTORS.map(|row| {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        row.map(|v| v / norm)
    });
    let hed_from_rgb = invert3(&rgb_from_hed);
    // Concentrations are linear in OD, so their extremes over the OD cube
    // [0, OD_MAX]^3 sit on its corners.
    let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 3];
    for corner in 0..8u32 {
        let od = [0, 1, 2].map(|i| if corner >> i & 1 == 1 { OD_MAX } else { 0.0 });
        let conc = mul_vec_mat(od, &hed_from_rgb);
        for c in 0..3 {
            ranges[c].0 = ranges[c].0.min(conc[c]);
            ranges[c].1 = ranges[c].1.max(conc[c]);
        }
    }
    HedConstants { rgb_from_hed, hed_from_rgb, ranges }
});

/// Row-normalized stain matrix (rows are H, E, D in OD space).
pub fn stain_matrix() -> [[f64; 3]; 3] {
    HED.rgb_from_hed
}

pub fn optical_density(v: u8) -> f64 {
    -((v.max(1) as f64) / 255.0).log10()
}

pub fn hed_from_rgb(rgb: [u8; 3]) -> [f64; 3] {
    mul_vec_mat(rgb.map(optical_density), &HED.hed_from_rgb)
}

pub fn hed_to_rgb_unclamped(hed: [f64; 3]) -> [f64; 3] {
    mul_vec_mat(hed, &HED.rgb_from_hed).map(|od| 255.0 * 10f64.powf(-od))
}
