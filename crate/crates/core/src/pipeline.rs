//! End-to-end transform: pick a color space, sample a virtual template from
//! that space's fitted distribution, normalize. The baselines (fixed-template
//! normalization, SA1, SA2, pass-through) run through the same entry points.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;

use crate::augment::{sa1, sa2, SaConfig, SaScheme};
use crate::colorspace::{ColorSpace, RgbImage};
use crate::error::{Error, Result};
use crate::normalizer::normalize_to_template;
use crate::sampler::{item_rng, sample_template, VirtualTemplate};
use crate::stats::{DistributionFamily, StyleDistribution};

/// Stream index reserved for the batch-shared template draw.
const SHARED_TEMPLATE_STREAM: u64 = u64::MAX;

/// Categorical probabilities over LAB, HSV and HED (in that order).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceProbs([f64; 3]);

impl SpaceProbs {
    pub fn new(probs: [f64; 3]) -> Result<Self> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidConfig(format!("space probabilities must be >= 0, got {probs:?}")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!("space probabilities must sum to 1, got {sum}")));
        }
        Ok(SpaceProbs(probs))
    }

    pub fn uniform() -> Self {
        SpaceProbs([1.0 / 3.0; 3])
    }

    pub fn only(space: ColorSpace) -> Self {
        let mut p = [0.0; 3];
        p[space.index()] = 1.0;
        SpaceProbs(p)
    }

    pub fn get(&self, space: ColorSpace) -> f64 {
        self.0[space.index()]
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }
}

impl Default for SpaceProbs {
    fn default() -> Self {
        SpaceProbs::uniform()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    RandStainNa,
    FixedSpace(ColorSpace),
    /// Normalization to the mean template (M_A, M_D) of one space.
    SnBaseline(ColorSpace),
    Sa1Baseline(SaConfig),
    Sa2Baseline(SaConfig),
    PassThrough,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub space_probs: SpaceProbs,
    pub distributions: BTreeMap<ColorSpace, StyleDistribution>,
    pub family_override: Option<DistributionFamily>,
    pub seed: u64,
    pub mode: Mode,
    /// Draw one template per batch instead of one per image.
    pub shared_batch_template: bool,
}

impl PipelineConfig {
    pub fn new(mode: Mode, distributions: BTreeMap<ColorSpace, StyleDistribution>) -> Self {
        PipelineConfig {
            space_probs: SpaceProbs::uniform(),
            distributions,
            family_override: None,
            seed: 0,
            mode,
            shared_batch_template: false,
        }
    }

    pub fn with_probs(mut self, probs: SpaceProbs) -> Self {
        self.space_probs = probs;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_family(mut self, family: DistributionFamily) -> Self {
        self.family_override = Some(family);
        self
    }

    /// Checks that every space the mode can reach has a fitted distribution.
    pub fn validate(&self) -> Result<()> {
        let needed: Vec<ColorSpace> = match self.mode {
            Mode::RandStainNa => ColorSpace::ALL
                .into_iter()
                .filter(|&s| self.space_probs.get(s) > 0.0)
                .collect(),
            Mode::FixedSpace(s) | Mode::SnBaseline(s) => vec![s],
            Mode::Sa1Baseline(cfg) | Mode::Sa2Baseline(cfg) => {
                cfg.validate()?;
                let want = if matches!(self.mode, Mode::Sa1Baseline(_)) { SaScheme::Sa1 } else { SaScheme::Sa2 };
                if cfg.scheme != want {
                    return Err(Error::InvalidConfig("SA mode and config scheme disagree".into()));
                }
                vec![]
            }
            Mode::PassThrough => vec![],
        };
        match needed.into_iter().find(|s| !self.distributions.contains_key(s)) {
            Some(missing) => Err(Error::MissingDistribution(missing)),
            None => Ok(()),
        }
    }

    fn distribution(&self, space: ColorSpace) -> Result<StyleDistribution> {
        let dist = self.distributions.get(&space).ok_or(Error::MissingDistribution(space))?;
        Ok(match self.family_override {
            Some(f) => dist.with_family(f),
            None => *dist,
        })
    }
}

/// Result of one pipeline transform.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformOutcome {
    pub image: RgbImage,
    /// Normalization target, absent for augmentation and pass-through modes.
    pub template_used: Option<VirtualTemplate>,
    pub clamped_fraction: f64,
}

pub fn select_color_space<R: Rng + ?Sized>(cfg: &PipelineConfig, rng: &mut R) -> ColorSpace {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_positive = ColorSpace::Lab;
    for space in ColorSpace::ALL {
        let p = cfg.space_probs.get(space);
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last_positive = space;
        if u < acc {
            return space;
        }
    }
    last_positive
}

/// Draws the template a RandStainNA or fixed-space transform would use.
pub fn draw_template<R: Rng + ?Sized>(cfg: &PipelineConfig, rng: &mut R) -> Result<VirtualTemplate> {
    let space = match cfg.mode {
        Mode::RandStainNa => select_color_space(cfg, rng),
        Mode::FixedSpace(space) => space,
        _ => return Err(Error::InvalidConfig("mode does not sample templates".into())),
    };
    let dist = cfg.distribution(space)?;
    Ok(sample_template(&dist, rng))
}

pub fn transform<R: Rng + ?Sized>(img: &RgbImage, cfg: &PipelineConfig, rng: &mut R) -> Result<TransformOutcome> {
    transform_inner(img, cfg, rng, None)
}

fn transform_inner<R: Rng + ?Sized>(
    img: &RgbImage,
    cfg: &PipelineConfig,
    rng: &mut R,
    shared: Option<&VirtualTemplate>,
) -> Result<TransformOutcome> {
    let normalized = |template: VirtualTemplate| {
        let out = normalize_to_template(img, &template);
        TransformOutcome {
            image: out.image,
            template_used: Some(out.template_used),
            clamped_fraction: out.clamped_fraction,
        }
    };
    match cfg.mode {
        Mode::RandStainNa | Mode::FixedSpace(_) => {
            let template = match shared {
                Some(t) => *t,
                None => draw_template(cfg, rng)?,
            };
            Ok(normalized(template))
        }
        Mode::SnBaseline(space) => Ok(normalized(VirtualTemplate::mean_of(&cfg.distribution(space)?))),
        Mode::Sa1Baseline(sa) => {
            let out = sa1(img, &sa, rng)?;
            Ok(TransformOutcome { image: out.image, template_used: None, clamped_fraction: out.clamped_fraction })
        }
        Mode::Sa2Baseline(sa) => {
            let out = sa2(img, &sa, rng)?;
            Ok(TransformOutcome { image: out.image, template_used: None, clamped_fraction: out.clamped_fraction })
        }
        Mode::PassThrough => Ok(TransformOutcome { image: img.clone(), template_used: None, clamped_fraction: 0.0 }),
    }
}

/// Transforms item `index` of a batch with its own seed-split generator,
/// exactly as [`transform_batch`] would.
pub fn transform_item(img: &RgbImage, cfg: &PipelineConfig, index: usize) -> Result<TransformOutcome> {
    let shared = shared_template(cfg)?;
    transform_inner(img, cfg, &mut item_rng(cfg.seed, index as u64), shared.as_ref())
}

/// Template shared by a whole batch when `shared_batch_template` is set.
pub fn shared_template(cfg: &PipelineConfig) -> Result<Option<VirtualTemplate>> {
    if !cfg.shared_batch_template || !matches!(cfg.mode, Mode::RandStainNa | Mode::FixedSpace(_)) {
        return Ok(None);
    }
    draw_template(cfg, &mut item_rng(cfg.seed, SHARED_TEMPLATE_STREAM)).map(Some)
}

/// Parallel batch transform. Output order follows input order and every item
/// is computed exactly as [`transform_item`] would, so results do not depend
/// on the number of worker threads.
pub fn transform_batch(imgs: &[RgbImage], cfg: &PipelineConfig) -> Result<Vec<TransformOutcome>> {
    if imgs.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    cfg.validate()?;
    let shared = shared_template(cfg)?;
    imgs.par_iter()
        .enumerate()
        .map(|(index, img)| {
            let mut rng = item_rng(cfg.seed, index as u64);
            transform_inner(img, cfg, &mut rng, shared.as_ref())
                .map_err(|e| Error::Item { index, source: Box::new(e) })
        })
        .collect()
}

/// Same as [`transform_batch`] on the current thread only.
pub fn transform_batch_serial(imgs: &[RgbImage], cfg: &PipelineConfig) -> Result<Vec<TransformOutcome>> {
    if imgs.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    cfg.validate()?;
    let shared = shared_template(cfg)?;
    imgs.iter()
        .enumerate()
        .map(|(index, img)| {
            let mut rng = item_rng(cfg.seed, index as u64);
            transform_inner(img, cfg, &mut rng, shared.as_ref())
                .map_err(|e| Error::Item { index, source: Box::new(e) })
        })
        .collect()
}
