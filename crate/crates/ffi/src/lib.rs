//! C ABI over the stainforge engine.
//!
//! Every entry point returns an [`SfStatus`]; on failure a detail message is
//! available from [`sf_last_error`] on the same thread. Handles are opaque and
//! must be released with their `_free` function. Images are tightly packed
//! interleaved 8-bit RGB, row-major, `width * height * 3` bytes.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stainforge::augment::{SaConfig, SaScheme, Strength};
use stainforge::colorspace::{to_planes, ColorSpace, RgbImage};
use stainforge::normalizer::normalize_to_template;
use stainforge::pipeline::{self, Mode, PipelineConfig, SpaceProbs};
use stainforge::sampler::VirtualTemplate;
use stainforge::stats::{channel_stats, fit_style_distribution, DistributionFamily, StyleDistribution};
use stainforge::statsfile::{parse_stats, write_stats};
use stainforge::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidImage = 3,
    StatsFormat = 4,
    VersionMismatch = 5,
    MissingDistribution = 6,
    InsufficientSamples = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfColorSpace {
    Lab = 0,
    Hsv = 1,
    Hed = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfMode {
    PassThrough = 0,
    RandStainNa = 1,
    /// RandStainNA restricted to the given space.
    Fixed = 2,
    /// Normalization to the mean template, or to a template image.
    Sn = 3,
    Sa1 = 4,
    Sa2 = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SfStrength {
    Light = 0,
    Strong = 1,
}

/// Per-channel mean and standard deviation of one image.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SfChannelStats {
    pub avg: [f64; 3],
    pub std: [f64; 3],
}

/// Fitted moments for one color space; `sd_*` are standard deviations.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SfDistribution {
    pub mean_of_avg: [f64; 3],
    pub sd_of_avg: [f64; 3],
    pub mean_of_std: [f64; 3],
    pub sd_of_std: [f64; 3],
    pub n_samples: usize,
}

/// Fitted statistics, at most one distribution per color space.
pub struct SfStats {
    dists: BTreeMap<ColorSpace, StyleDistribution>,
}

pub struct SfPipeline {
    cfg: PipelineConfig,
    template: Option<VirtualTemplate>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(status: SfStatus, msg: impl AsRef<str>) -> SfStatus {
    set_error(msg.as_ref());
    status
}

fn from_error(e: Error) -> SfStatus {
    let status = match &e {
        Error::InvalidImage(_) => SfStatus::InvalidImage,
        Error::StatsFormat(_) => SfStatus::StatsFormat,
        Error::VersionMismatch { .. } => SfStatus::VersionMismatch,
        Error::MissingDistribution(_) => SfStatus::MissingDistribution,
        Error::InsufficientSamples { .. } | Error::EmptyCorpus => SfStatus::InsufficientSamples,
        Error::InvalidConfig(_) | Error::MixedColorSpace { .. } => SfStatus::InvalidArgument,
        Error::Item { source, .. } => return from_error(Error::InvalidConfig(source.to_string())),
        _ => SfStatus::Internal,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into [`SfStatus::Internal`].
fn guard(f: impl FnOnce() -> Result<(), SfStatus>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SfStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            fail(SfStatus::Internal, format!("internal error: {msg}"))
        }
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), SfStatus> {
    if p.is_null() {
        Err(fail(SfStatus::NullPointer, format!("`{name}` is null")))
    } else {
        Ok(())
    }
}

fn space_of(s: SfColorSpace) -> ColorSpace {
    match s {
        SfColorSpace::Lab => ColorSpace::Lab,
        SfColorSpace::Hsv => ColorSpace::Hsv,
        SfColorSpace::Hed => ColorSpace::Hed,
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, SfStatus> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SfStatus::InvalidArgument, format!("`{name}` is not valid UTF-8")))
}

unsafe fn family_arg(p: *const c_char) -> Result<Option<DistributionFamily>, SfStatus> {
    if p.is_null() {
        return Ok(None);
    }
    str_arg(p, "family")?.parse().map(Some).map_err(from_error)
}

unsafe fn image_arg(pixels: *const u8, width: u32, height: u32) -> Result<RgbImage, SfStatus> {
    non_null(pixels, "pixels")?;
    let len = (width as usize)
        .checked_mul(height as usize)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| fail(SfStatus::InvalidImage, "image dimensions overflow"))?;
    let data = std::slice::from_raw_parts(pixels, len).to_vec();
    RgbImage::new(width, height, data).map_err(from_error)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sf_status_message(status: SfStatus) -> *const c_char {
    let s: &'static str = match status {
        SfStatus::Ok => "ok\0",
        SfStatus::NullPointer => "null pointer argument\0",
        SfStatus::InvalidArgument => "invalid argument\0",
        SfStatus::InvalidImage => "invalid image\0",
        SfStatus::StatsFormat => "malformed statistics\0",
        SfStatus::VersionMismatch => "unsupported statistics version\0",
        SfStatus::MissingDistribution => "no fitted distribution for a required color space\0",
        SfStatus::InsufficientSamples => "not enough samples\0",
        SfStatus::BufferTooSmall => "output buffer too small\0",
        SfStatus::Internal => "internal error\0",
    };
    s.as_ptr().cast()
}

/// Detail message of the last failed call on this thread, empty after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn sf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Per-channel statistics of one image in `space`.
///
/// # Safety
/// `pixels` must point to `width * height * 3` readable bytes.
#[no_mangle]
pub unsafe extern "C" fn sf_channel_stats(
    pixels: *const u8,
    width: u32,
    height: u32,
    space: SfColorSpace,
    out: *mut SfChannelStats,
) -> SfStatus {
    guard(|| {
        non_null(out, "out")?;
        let img = image_arg(pixels, width, height)?;
        let s = channel_stats(&to_planes(&img, space_of(space)));
        *out = SfChannelStats { avg: s.avg, std: s.std };
        Ok(())
    })
}

/// Fits one distribution per space in `spaces` over `count` images.
/// `family` may be null for Gaussian; otherwise e.g. "laplace" or "t:7".
///
/// # Safety
/// `pixels`, `widths` and `heights` must each hold `count` entries, every
/// image buffer sized as described in the module docs; `spaces` must hold
/// `n_spaces` entries.
#[no_mangle]
pub unsafe extern "C" fn sf_stats_fit(
    pixels: *const *const u8,
    widths: *const u32,
    heights: *const u32,
    count: usize,
    spaces: *const SfColorSpace,
    n_spaces: usize,
    family: *const c_char,
    out: *mut *mut SfStats,
) -> SfStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        non_null(pixels, "pixels")?;
        non_null(widths, "widths")?;
        non_null(heights, "heights")?;
        non_null(spaces, "spaces")?;
        if n_spaces == 0 {
            return Err(fail(SfStatus::InvalidArgument, "no color spaces requested"));
        }
        let family = family_arg(family)?.unwrap_or(DistributionFamily::Gaussian);
        let (ptrs, ws, hs) = (
            std::slice::from_raw_parts(pixels, count),
            std::slice::from_raw_parts(widths, count),
            std::slice::from_raw_parts(heights, count),
        );
        let images = (0..count).map(|i| image_arg(ptrs[i], ws[i], hs[i])).collect::<Result<Vec<_>, _>>()?;
        let mut dists = BTreeMap::new();
        for &s in std::slice::from_raw_parts(spaces, n_spaces) {
            let space = space_of(s);
            let stats: Vec<_> = images.iter().map(|img| channel_stats(&to_planes(img, space))).collect();
            dists.insert(space, fit_style_distribution(&stats, family).map_err(from_error)?);
        }
        *out = Box::into_raw(Box::new(SfStats { dists }));
        Ok(())
    })
}

/// Parses the text form written by `stainforge fit`.
///
/// # Safety
/// `text` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sf_stats_parse(text: *const c_char, out: *mut *mut SfStats) -> SfStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let dists = parse_stats(str_arg(text, "text")?).map_err(from_error)?;
        *out = Box::into_raw(Box::new(SfStats { dists }));
        Ok(())
    })
}

/// Serializes to the text form; free the result with [`sf_string_free`].
///
/// # Safety
/// `stats` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_stats_to_string(stats: *const SfStats, out: *mut *mut c_char) -> SfStatus {
    guard(|| {
        non_null(stats, "stats")?;
        non_null(out, "out")?;
        let dists: Vec<_> = (*stats).dists.values().copied().collect();
        *out = CString::new(write_stats(&dists)).expect("no interior NUL").into_raw();
        Ok(())
    })
}

/// Copies the fitted moments for `space`.
///
/// # Safety
/// `stats` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_stats_get(stats: *const SfStats, space: SfColorSpace, out: *mut SfDistribution) -> SfStatus {
    guard(|| {
        non_null(stats, "stats")?;
        non_null(out, "out")?;
        let space = space_of(space);
        let d = (*stats).dists.get(&space).ok_or_else(|| from_error(Error::MissingDistribution(space)))?;
        *out = SfDistribution {
            mean_of_avg: d.mean_of_avg,
            sd_of_avg: d.sd_of_avg(),
            mean_of_std: d.mean_of_std,
            sd_of_std: d.sd_of_std(),
            n_samples: d.n_samples,
        };
        Ok(())
    })
}

/// # Safety
/// `stats` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_stats_free(stats: *mut SfStats) {
    if !stats.is_null() {
        drop(Box::from_raw(stats));
    }
}

/// Creates a pipeline. `space` is used by the fixed, SN and SA modes and
/// ignored otherwise; `strength` only by the SA modes. `stats` may be null
/// for modes that do not sample templates; it is copied, not retained.
///
/// # Safety
/// `stats` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_pipeline_new(
    mode: SfMode,
    space: SfColorSpace,
    strength: SfStrength,
    stats: *const SfStats,
    seed: u64,
    out: *mut *mut SfPipeline,
) -> SfStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = ptr::null_mut();
        let space = space_of(space);
        let strength = match strength {
            SfStrength::Light => Strength::Light,
            SfStrength::Strong => Strength::Strong,
        };
        let sa = |scheme| SaConfig::preset(scheme, space, strength).map_err(from_error);
        let mode = match mode {
            SfMode::PassThrough => Mode::PassThrough,
            SfMode::RandStainNa => Mode::RandStainNa,
            SfMode::Fixed => Mode::FixedSpace(space),
            SfMode::Sn => Mode::SnBaseline(space),
            SfMode::Sa1 => Mode::Sa1Baseline(sa(SaScheme::Sa1)?),
            SfMode::Sa2 => Mode::Sa2Baseline(sa(SaScheme::Sa2)?),
        };
        let dists = if stats.is_null() { BTreeMap::new() } else { (*stats).dists.clone() };
        let cfg = PipelineConfig::new(mode, dists).with_seed(seed);
        *out = Box::into_raw(Box::new(SfPipeline { cfg, template: None }));
        Ok(())
    })
}

/// Color-space probabilities for RandStainNA; must be non-negative and sum to 1.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_pipeline_set_space_probs(p: *mut SfPipeline, lab: f64, hsv: f64, hed: f64) -> SfStatus {
    guard(|| {
        non_null(p, "pipeline")?;
        (*p).cfg.space_probs = SpaceProbs::new([lab, hsv, hed]).map_err(from_error)?;
        Ok(())
    })
}

/// Overrides the sampling family of every distribution; null restores the
/// fitted families.
///
/// # Safety
/// `p` must be a live handle; `family` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sf_pipeline_set_family(p: *mut SfPipeline, family: *const c_char) -> SfStatus {
    guard(|| {
        non_null(p, "pipeline")?;
        (*p).cfg.family_override = family_arg(family)?;
        Ok(())
    })
}

/// Draw one template for all items instead of one per item.
///
/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sf_pipeline_set_shared_template(p: *mut SfPipeline, shared: bool) -> SfStatus {
    guard(|| {
        non_null(p, "pipeline")?;
        (*p).cfg.shared_batch_template = shared;
        Ok(())
    })
}

/// SN mode only: normalize to the statistics of a physical template image
/// instead of the mean template.
///
/// # Safety
/// `p` must be a live handle; `pixels` as in the module docs.
#[no_mangle]
pub unsafe extern "C" fn sf_pipeline_set_template_image(
    p: *mut SfPipeline,
    pixels: *const u8,
    width: u32,
    height: u32,
) -> SfStatus {
    guard(|| {
        non_null(p, "pipeline")?;
        let Mode::SnBaseline(space) = (*p).cfg.mode else {
            return Err(fail(SfStatus::InvalidArgument, "a template image only applies to SN mode"));
        };
        let img = image_arg(pixels, width, height)?;
        (*p).template = Some(VirtualTemplate::from(channel_stats(&to_planes(&img, space))));
        Ok(())
    })
}

/// Transforms batch item `index`. Output equals what `stainforge apply`
/// writes for the image at position `index` of its sorted input listing
/// under the same settings. `out_pixels` must hold `width * height * 3`
/// bytes; `out_clamped` may be null.
///
/// # Safety
/// `p` must be a live handle; buffers as documented.
#[no_mangle]
pub unsafe extern "C" fn sf_transform(
    p: *const SfPipeline,
    pixels: *const u8,
    width: u32,
    height: u32,
    index: u64,
    out_pixels: *mut u8,
    out_len: usize,
    out_clamped: *mut f64,
) -> SfStatus {
    guard(|| {
        non_null(p, "pipeline")?;
        non_null(out_pixels, "out_pixels")?;
        let img = image_arg(pixels, width, height)?;
        if out_len < img.data().len() {
            return Err(fail(
                SfStatus::BufferTooSmall,
                format!("need {} bytes, got {out_len}", img.data().len()),
            ));
        }
        let index = usize::try_from(index).map_err(|_| fail(SfStatus::InvalidArgument, "index out of range"))?;
        let p = &*p;
        let (image, clamped) = match &p.template {
            Some(t) => {
                let o = normalize_to_template(&img, t);
                (o.image, o.clamped_fraction)
            }
            None => {
                p.cfg.validate().map_err(from_error)?;
                let o = pipeline::transform_item(&img, &p.cfg, index).map_err(from_error)?;
                (o.image, o.clamped_fraction)
            }
        };
        ptr::copy_nonoverlapping(image.data().as_ptr(), out_pixels, image.data().len());
        if !out_clamped.is_null() {
            *out_clamped = clamped;
        }
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sf_pipeline_free(p: *mut SfPipeline) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}
