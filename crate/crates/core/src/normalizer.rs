//! Per-image moment matching against a template.
//!
//! For each channel `p' = (d_v / d_i) * (p - a_i) + a_v`, where `(a_i, d_i)`
//! are the image's own channel statistics and `(a_v, d_v)` the template's.
//! A constant channel (`d_i == 0`) is only shifted.

use crate::colorspace::{from_planes, to_planes, ColorSpace, PlaneImage, RgbImage};
use crate::sampler::VirtualTemplate;
use crate::stats::{channel_stats, ChannelStats};

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizeOutcome {
    pub image: RgbImage,
    pub template_used: VirtualTemplate,
    /// Share of pixels clipped while converting back to RGB.
    pub clamped_fraction: f64,
}

/// Applies the moment-matching map to planes in place. `source` must be the
/// statistics of `planes` (or an intended stand-in for them).
pub fn apply_template(planes: &mut PlaneImage, source: &ChannelStats, template: &VirtualTemplate) {
    debug_assert_eq!(planes.space(), template.space);
    for c in 0..3 {
        let scale = if source.std[c] > 0.0 { template.std[c] / source.std[c] } else { 1.0 };
        let (mean_in, mean_out) = (source.avg[c], template.avg[c]);
        for p in planes.channel_mut(c) {
            *p = scale * (*p - mean_in) + mean_out;
        }
    }
}

/// Converts `img` into the template's space and returns the normalized
/// planes before back-conversion.
pub fn normalized_planes(img: &RgbImage, template: &VirtualTemplate) -> PlaneImage {
    let mut planes = to_planes(img, template.space);
    let source = channel_stats(&planes);
    apply_template(&mut planes, &source, template);
    planes
}

pub fn normalize_to_template(img: &RgbImage, template: &VirtualTemplate) -> NormalizeOutcome {
    finish(normalized_planes(img, template), template)
}

/// Same as [`normalize_to_template`] but with caller-supplied statistics of
/// `img` in the template's space, skipping one pass over the planes.
pub fn normalize_with_source_stats(
    img: &RgbImage,
    source: &ChannelStats,
    template: &VirtualTemplate,
) -> NormalizeOutcome {
    debug_assert_eq!(source.space, template.space);
    let mut planes = to_planes(img, template.space);
    apply_template(&mut planes, source, template);
    finish(planes, template)
}

/// Classical Reinhard-style normalization to a physical template image.
pub fn reinhard_normalize(img: &RgbImage, template_img: &RgbImage, space: ColorSpace) -> NormalizeOutcome {
    let template = VirtualTemplate::from(channel_stats(&to_planes(template_img, space)));
    normalize_to_template(img, &template)
}

fn finish(planes: PlaneImage, template: &VirtualTemplate) -> NormalizeOutcome {
    let back = from_planes(&planes);
    NormalizeOutcome {
        clamped_fraction: back.clamped_fraction(),
        image: back.image,
        template_used: *template,
    }
}
