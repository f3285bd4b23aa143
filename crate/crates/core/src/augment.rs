//! Stain augmentation baselines.
//!
//! SA1 perturbs each channel as `p * e1 + e2`, SA2 as `p + p * e`. Noise is
//! drawn once per channel per image from uniform intervals, so every pixel of
//! a channel sees the same perturbation.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::colorspace::{from_planes, to_planes, ColorSpace, PlaneImage, RgbImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaScheme {
    Sa1,
    Sa2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strength {
    Light,
    Strong,
}

impl Strength {
    fn half_width(self) -> f64 {
        match self {
            Strength::Light => 0.05,
            Strength::Strong => 0.25,
        }
    }
}

impl FromStr for Strength {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "light" | "l" => Ok(Strength::Light),
            "strong" | "s" => Ok(Strength::Strong),
            other => Err(Error::InvalidConfig(format!("unknown strength `{other}`"))),
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strength::Light => "light",
            Strength::Strong => "strong",
        })
    }
}

/// Closed interval `[lo, hi]` for a uniform draw.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub const fn point(v: f64) -> Self {
        Interval { lo: v, hi: v }
    }

    pub fn symmetric(center: f64, half_width: f64) -> Self {
        Interval { lo: center - half_width, hi: center + half_width }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn is_within(&self, outer: &Interval) -> bool {
        outer.lo <= self.lo && self.hi <= outer.hi
    }

    /// Always consumes one draw so zero-width intervals keep RNG streams
    /// aligned with their wider counterparts.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        self.lo + (self.hi - self.lo) * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaConfig {
    pub scheme: SaScheme,
    pub space: ColorSpace,
    pub strength: Strength,
    /// Multiplier for SA1, centered at 1.
    pub eps1_range: Interval,
    /// Additive offset for SA1 in channel units, per channel.
    pub eps2_range: [Interval; 3],
    /// Relative perturbation for SA2, centered at 0.
    pub eps_range: Interval,
}

impl SaConfig {
    /// Symmetric uniform preset. Additive SA1 noise is expressed as a
    /// fraction of each channel's value range.
    pub fn preset(scheme: SaScheme, space: ColorSpace, strength: Strength) -> Result<Self> {
        let w = strength.half_width();
        let scale = space.channel_scale();
        let cfg = SaConfig {
            scheme,
            space,
            strength,
            eps1_range: Interval::symmetric(1.0, w),
            eps2_range: scale.map(|s| Interval::symmetric(0.0, w * s)),
            eps_range: Interval::symmetric(0.0, w),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Zero-width noise: every draw is the identity value.
    pub fn identity(scheme: SaScheme, space: ColorSpace) -> Result<Self> {
        let cfg = SaConfig {
            scheme,
            space,
            strength: Strength::Light,
            eps1_range: Interval::point(1.0),
            eps2_range: [Interval::point(0.0); 3],
            eps_range: Interval::point(0.0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let allowed = match self.scheme {
            SaScheme::Sa1 => [ColorSpace::Hed, ColorSpace::Lab],
            SaScheme::Sa2 => [ColorSpace::Hsv, ColorSpace::Lab],
        };
        if !allowed.contains(&self.space) {
            return Err(Error::InvalidConfig(format!(
                "{:?} is not defined in {}",
                self.scheme, self.space
            )));
        }
        let ok = self.eps1_range.contains(1.0)
            && self.eps_range.contains(0.0)
            && self.eps2_range.iter().all(|r| r.contains(0.0));
        if !ok {
            return Err(Error::InvalidConfig("noise intervals must contain their identity value".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentOutcome {
    pub image: RgbImage,
    pub clamped_fraction: f64,
}

/// Per-channel SA1 noise `(e1, e2)`, drawn channel by channel.
pub fn draw_sa1<R: Rng + ?Sized>(cfg: &SaConfig, rng: &mut R) -> [(f64, f64); 3] {
    std::array::from_fn(|c| {
        let e1 = cfg.eps1_range.sample(rng);
        let e2 = cfg.eps2_range[c].sample(rng);
        (e1, e2)
    })
}

pub fn draw_sa2<R: Rng + ?Sized>(cfg: &SaConfig, rng: &mut R) -> [f64; 3] {
    std::array::from_fn(|_| cfg.eps_range.sample(rng))
}

pub fn apply_sa1(planes: &mut PlaneImage, noise: &[(f64, f64); 3]) {
    for (c, &(e1, e2)) in noise.iter().enumerate() {
        for p in planes.channel_mut(c) {
            *p = *p * e1 + e2;
        }
    }
}

pub fn apply_sa2(planes: &mut PlaneImage, noise: &[f64; 3]) {
    for (c, &e) in noise.iter().enumerate() {
        let factor = 1.0 + e;
        for p in planes.channel_mut(c) {
            *p *= factor;
        }
    }
}

pub fn sa1<R: Rng + ?Sized>(img: &RgbImage, cfg: &SaConfig, rng: &mut R) -> Result<AugmentOutcome> {
    if cfg.scheme != SaScheme::Sa1 {
        return Err(Error::InvalidConfig("sa1 called with an SA2 config".into()));
    }
    cfg.validate()?;
    let noise = draw_sa1(cfg, rng);
    let mut planes = to_planes(img, cfg.space);
    apply_sa1(&mut planes, &noise);
    Ok(finish(&planes))
}

pub fn sa2<R: Rng + ?Sized>(img: &RgbImage, cfg: &SaConfig, rng: &mut R) -> Result<AugmentOutcome> {
    if cfg.scheme != SaScheme::Sa2 {
        return Err(Error::InvalidConfig("sa2 called with an SA1 config".into()));
    }
    cfg.validate()?;
    let noise = draw_sa2(cfg, rng);
    let mut planes = to_planes(img, cfg.space);
    apply_sa2(&mut planes, &noise);
    Ok(finish(&planes))
}

fn finish(planes: &PlaneImage) -> AugmentOutcome {
    let back = from_planes(planes);
    AugmentOutcome { clamped_fraction: back.clamped_fraction(), image: back.image }
}
