//! Random virtual templates drawn from a fitted [`StyleDistribution`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};

use crate::colorspace::ColorSpace;
use crate::stats::{ChannelStats, DistributionFamily, StyleDistribution};

/// Generator used everywhere randomness is needed.
pub type StainRng = ChaCha8Rng;

/// Lower bound applied to sampled template standard deviations.
pub const STD_FLOOR: f64 = 1e-3;

pub fn rng_from_seed(seed: u64) -> StainRng {
    StainRng::seed_from_u64(seed)
}

/// Generator for one item of a batch: the global seed selects the key and
/// the item index selects an independent ChaCha stream, so items can be
/// processed in any order or on any worker.
pub fn item_rng(seed: u64, index: u64) -> StainRng {
    let mut rng = StainRng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A normalization target: per-channel mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualTemplate {
    pub space: ColorSpace,
    pub avg: [f64; 3],
    pub std: [f64; 3],
}

impl From<ChannelStats> for VirtualTemplate {
    fn from(s: ChannelStats) -> Self {
        VirtualTemplate { space: s.space, avg: s.avg, std: s.std }
    }
}

impl VirtualTemplate {
    /// The template at the center of a distribution, (M_A, M_D).
    pub fn mean_of(dist: &StyleDistribution) -> Self {
        VirtualTemplate { space: dist.space, avg: dist.mean_of_avg, std: dist.mean_of_std }
    }
}

/// One draw with mean `location` and standard deviation `scale`.
pub fn sample_scalar<R: Rng + ?Sized>(family: DistributionFamily, location: f64, scale: f64, rng: &mut R) -> f64 {
    if scale <= 0.0 {
        return location;
    }
    let unit = match family {
        DistributionFamily::Gaussian => StandardNormal.sample(rng),
        DistributionFamily::StudentT { dof } => {
            let t: f64 = StudentT::new(dof).expect("dof validated at construction").sample(rng);
            t * ((dof - 2.0) / dof).sqrt()
        }
        DistributionFamily::Uniform => {
            let u: f64 = rng.random();
            3f64.sqrt() * (2.0 * u - 1.0)
        }
        DistributionFamily::Laplace => {
            // inverse CDF on (-1/2, 1/2); unit variance needs b = 1/sqrt(2)
            let u: f64 = rng.random::<f64>() - 0.5;
            let b = std::f64::consts::FRAC_1_SQRT_2;
            -b * u.signum() * (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE).ln()
        }
    };
    location + scale * unit
}

/// Six independent draws, three per-channel means then three per-channel
/// standard deviations, before any clamping.
pub fn sample_raw<R: Rng + ?Sized>(dist: &StyleDistribution, rng: &mut R) -> ([f64; 3], [f64; 3]) {
    let sd_avg = dist.sd_of_avg();
    let sd_std = dist.sd_of_std();
    let mut avg = [0.0; 3];
    let mut std = [0.0; 3];
    for c in 0..3 {
        avg[c] = sample_scalar(dist.family, dist.mean_of_avg[c], sd_avg[c], rng);
    }
    for c in 0..3 {
        std[c] = sample_scalar(dist.family, dist.mean_of_std[c], sd_std[c], rng);
    }
    (avg, std)
}

pub fn sample_template<R: Rng + ?Sized>(dist: &StyleDistribution, rng: &mut R) -> VirtualTemplate {
    let (avg, std) = sample_raw(dist, rng);
    let ranges = dist.space.channel_range();
    VirtualTemplate {
        space: dist.space,
        avg: std::array::from_fn(|c| avg[c].clamp(ranges[c].0, ranges[c].1)),
        std: std.map(|s| s.max(STD_FLOOR)),
    }
}
