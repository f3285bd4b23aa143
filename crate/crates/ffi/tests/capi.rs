use std::collections::BTreeMap;
use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use stainforge::colorspace::{to_planes, ColorSpace, RgbImage};
use stainforge::pipeline::{transform_item, Mode, PipelineConfig};
use stainforge::stats::{channel_stats, fit_style_distribution, DistributionFamily};
use stainforge::statsfile::write_stats;
use stainforge::synth;
use stainforge::{SaConfig, SaScheme, Strength};
use stainforge_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sf_last_error()) }.to_string_lossy().into_owned()
}

fn corpus(n: usize) -> Vec<RgbImage> {
    synth::corpus(n, 20, 16, 31)
}

/// Fits all three spaces through the C ABI.
fn fit(images: &[RgbImage], family: Option<&str>) -> *mut SfStats {
    let ptrs: Vec<*const u8> = images.iter().map(|i| i.data().as_ptr()).collect();
    let ws: Vec<u32> = images.iter().map(|i| i.width()).collect();
    let hs: Vec<u32> = images.iter().map(|i| i.height()).collect();
    let spaces = [SfColorSpace::Lab, SfColorSpace::Hsv, SfColorSpace::Hed];
    let family = family.map(|f| CString::new(f).unwrap());
    let mut out = ptr::null_mut();
    let status = unsafe {
        sf_stats_fit(
            ptrs.as_ptr(),
            ws.as_ptr(),
            hs.as_ptr(),
            images.len(),
            spaces.as_ptr(),
            spaces.len(),
            family.as_ref().map_or(ptr::null(), |f| f.as_ptr()),
            &mut out,
        )
    };
    assert_eq!(status, SfStatus::Ok, "{}", last_error());
    out
}

fn ffi_transform(p: *const SfPipeline, img: &RgbImage, index: u64) -> (Vec<u8>, f64) {
    let mut buf = vec![0u8; img.data().len()];
    let mut clamped = -1.0;
    let status = unsafe {
        sf_transform(p, img.data().as_ptr(), img.width(), img.height(), index, buf.as_mut_ptr(), buf.len(), &mut clamped)
    };
    assert_eq!(status, SfStatus::Ok, "{}", last_error());
    (buf, clamped)
}

#[test]
fn version_and_messages() {
    let v = unsafe { CStr::from_ptr(sf_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let m = unsafe { CStr::from_ptr(sf_status_message(SfStatus::BufferTooSmall)) };
    assert_eq!(m.to_str().unwrap(), "output buffer too small");
}

#[test]
fn fit_matches_library_exactly() {
    let images = corpus(12);
    for family in [None, Some("laplace"), Some("t:7")] {
        let stats = fit(&images, family);
        let fam = family.map_or(DistributionFamily::Gaussian, |f| f.parse().unwrap());
        let mut expected = Vec::new();
        for space in ColorSpace::ALL {
            let s: Vec<_> = images.iter().map(|i| channel_stats(&to_planes(i, space))).collect();
            expected.push(fit_style_distribution(&s, fam).unwrap());
        }
        for (space, want) in [SfColorSpace::Lab, SfColorSpace::Hsv, SfColorSpace::Hed].into_iter().zip(&expected) {
            let mut got = SfDistribution::default();
            assert_eq!(unsafe { sf_stats_get(stats, space, &mut got) }, SfStatus::Ok);
            assert_eq!(got.mean_of_avg, want.mean_of_avg);
            assert_eq!(got.sd_of_avg, want.sd_of_avg());
            assert_eq!(got.mean_of_std, want.mean_of_std);
            assert_eq!(got.sd_of_std, want.sd_of_std());
            assert_eq!(got.n_samples, 12);
        }
        let mut text = ptr::null_mut();
        assert_eq!(unsafe { sf_stats_to_string(stats, &mut text) }, SfStatus::Ok);
        let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
        assert_eq!(s, write_stats(&expected));

        let mut reparsed = ptr::null_mut();
        assert_eq!(unsafe { sf_stats_parse(text, &mut reparsed) }, SfStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(unsafe { sf_stats_to_string(reparsed, &mut again) }, SfStatus::Ok);
        assert_eq!(unsafe { CStr::from_ptr(again) }.to_str().unwrap(), s);
        unsafe {
            sf_string_free(text);
            sf_string_free(again);
            sf_stats_free(reparsed);
            sf_stats_free(stats);
        }
    }
}

#[test]
fn channel_stats_matches_library() {
    let img = &corpus(1)[0];
    let mut got = SfChannelStats::default();
    let status = unsafe { sf_channel_stats(img.data().as_ptr(), img.width(), img.height(), SfColorSpace::Hed, &mut got) };
    assert_eq!(status, SfStatus::Ok);
    let want = channel_stats(&to_planes(img, ColorSpace::Hed));
    assert_eq!((got.avg, got.std), (want.avg, want.std));
}

#[test]
fn transform_matches_batch_items_in_every_mode() {
    let images = corpus(20);
    let stats = fit(&images, None);
    let dists: BTreeMap<_, _> = ColorSpace::ALL
        .into_iter()
        .map(|s| {
            let st: Vec<_> = images.iter().map(|i| channel_stats(&to_planes(i, s))).collect();
            (s, fit_style_distribution(&st, DistributionFamily::Gaussian).unwrap())
        })
        .collect();
    let sa = |scheme, space| SaConfig::preset(scheme, space, Strength::Strong).unwrap();
    let cases = [
        (SfMode::PassThrough, SfColorSpace::Lab, Mode::PassThrough, false),
        (SfMode::RandStainNa, SfColorSpace::Lab, Mode::RandStainNa, false),
        (SfMode::RandStainNa, SfColorSpace::Lab, Mode::RandStainNa, true),
        (SfMode::Fixed, SfColorSpace::Hsv, Mode::FixedSpace(ColorSpace::Hsv), false),
        (SfMode::Sn, SfColorSpace::Hed, Mode::SnBaseline(ColorSpace::Hed), false),
        (SfMode::Sa1, SfColorSpace::Hed, Mode::Sa1Baseline(sa(SaScheme::Sa1, ColorSpace::Hed)), false),
        (SfMode::Sa2, SfColorSpace::Hsv, Mode::Sa2Baseline(sa(SaScheme::Sa2, ColorSpace::Hsv)), false),
    ];
    for (mode, space, lib_mode, shared) in cases {
        let mut p = ptr::null_mut();
        assert_eq!(unsafe { sf_pipeline_new(mode, space, SfStrength::Strong, stats, 17, &mut p) }, SfStatus::Ok);
        assert_eq!(unsafe { sf_pipeline_set_shared_template(p, shared) }, SfStatus::Ok);
        let mut cfg = PipelineConfig::new(lib_mode, dists.clone()).with_seed(17);
        cfg.shared_batch_template = shared;
        for (i, img) in images.iter().enumerate() {
            let (bytes, clamped) = ffi_transform(p, img, i as u64);
            let want = transform_item(img, &cfg, i).unwrap();
            assert_eq!(bytes, want.image.data(), "{mode:?} item {i}");
            assert_eq!(clamped, want.clamped_fraction);
        }
        unsafe { sf_pipeline_free(p) };
    }
    unsafe { sf_stats_free(stats) };
}

#[test]
fn pipeline_settings() {
    let images = corpus(6);
    let stats = fit(&images, None);
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { sf_pipeline_new(SfMode::RandStainNa, SfColorSpace::Lab, SfStrength::Light, stats, 3, &mut p) },
        SfStatus::Ok
    );
    assert_eq!(unsafe { sf_pipeline_set_space_probs(p, 0.5, 0.6, 0.0) }, SfStatus::InvalidArgument);
    assert_eq!(unsafe { sf_pipeline_set_space_probs(p, 0.0, 0.0, 1.0) }, SfStatus::Ok);
    let laplace = CString::new("laplace").unwrap();
    assert_eq!(unsafe { sf_pipeline_set_family(p, laplace.as_ptr()) }, SfStatus::Ok);
    let bad = CString::new("cauchy").unwrap();
    assert_eq!(unsafe { sf_pipeline_set_family(p, bad.as_ptr()) }, SfStatus::InvalidArgument);
    assert!(last_error().contains("cauchy"));
    let a = ffi_transform(p, &images[0], 0);
    assert_eq!(ffi_transform(p, &images[0], 0), a);
    assert_ne!(ffi_transform(p, &images[0], 1).0, a.0);
    let t = &images[1];
    let status = unsafe { sf_pipeline_set_template_image(p, t.data().as_ptr(), t.width(), t.height()) };
    assert_eq!(status, SfStatus::InvalidArgument, "template images are SN-only");
    unsafe { sf_pipeline_free(p) };

    // SN to a physical template image: the template comes out unchanged.
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { sf_pipeline_new(SfMode::Sn, SfColorSpace::Lab, SfStrength::Light, ptr::null(), 0, &mut p) },
        SfStatus::Ok
    );
    let status = unsafe { sf_pipeline_set_template_image(p, t.data().as_ptr(), t.width(), t.height()) };
    assert_eq!(status, SfStatus::Ok);
    let (bytes, _) = ffi_transform(p, t, 5);
    assert!(bytes.iter().zip(t.data()).all(|(a, b)| a.abs_diff(*b) <= 1));
    unsafe {
        sf_pipeline_free(p);
        sf_stats_free(stats);
    }
}

#[test]
fn errors_are_reported_not_raised() {
    let img = &corpus(1)[0];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sf_stats_parse(ptr::null(), &mut out) }, SfStatus::NullPointer);
    assert!(last_error().contains("text"));
    let bad = CString::new("version: 9\ncolor_space: lab\n").unwrap();
    assert_eq!(unsafe { sf_stats_parse(bad.as_ptr(), &mut out) }, SfStatus::VersionMismatch);
    assert!(out.is_null());
    let junk = CString::new("hello: world\n").unwrap();
    assert_eq!(unsafe { sf_stats_parse(junk.as_ptr(), &mut out) }, SfStatus::StatsFormat);

    let one = fit(&corpus(2), None);
    let mut dist = SfDistribution::default();
    assert_eq!(unsafe { sf_stats_get(ptr::null(), SfColorSpace::Lab, &mut dist) }, SfStatus::NullPointer);
    unsafe { sf_stats_free(one) };

    // A single image cannot be fitted.
    let ptrs = [img.data().as_ptr()];
    let (w, h) = ([img.width()], [img.height()]);
    let spaces = [SfColorSpace::Lab];
    let status = unsafe { sf_stats_fit(ptrs.as_ptr(), w.as_ptr(), h.as_ptr(), 1, spaces.as_ptr(), 1, ptr::null(), &mut out) };
    assert_eq!(status, SfStatus::InsufficientSamples);

    // RandStainNA without statistics fails at transform time.
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { sf_pipeline_new(SfMode::RandStainNa, SfColorSpace::Lab, SfStrength::Light, ptr::null(), 0, &mut p) },
        SfStatus::Ok
    );
    let mut buf = vec![0u8; img.data().len()];
    let call = |buf: &mut [u8], len: usize, w: u32| unsafe {
        sf_transform(p, img.data().as_ptr(), w, img.height(), 0, buf.as_mut_ptr(), len, ptr::null_mut())
    };
    assert_eq!(call(&mut buf, img.data().len(), img.width()), SfStatus::MissingDistribution);
    assert_eq!(call(&mut buf, 10, img.width()), SfStatus::BufferTooSmall);
    assert_eq!(call(&mut buf, img.data().len(), 0), SfStatus::InvalidImage);
    unsafe { sf_pipeline_free(p) };

    // SA1 is not defined in HSV.
    let status = unsafe { sf_pipeline_new(SfMode::Sa1, SfColorSpace::Hsv, SfStrength::Light, ptr::null(), 0, &mut p) };
    assert_eq!(status, SfStatus::InvalidArgument);
    assert!(p.is_null());
    let status = unsafe {
        sf_transform(ptr::null(), img.data().as_ptr(), 1, 1, 0, buf.as_mut_ptr(), buf.len(), ptr::null_mut())
    };
    assert_eq!(status, SfStatus::NullPointer);
    unsafe {
        sf_stats_free(ptr::null_mut());
        sf_pipeline_free(ptr::null_mut());
        sf_string_free(ptr::null_mut());
    }
}

#[test]
fn header_compiles_as_c() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/stainforge.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in ["sf_transform", "sf_stats_fit", "sf_pipeline_new", "typedef struct SfStats SfStats", "SF_STATUS_OK"] {
        assert!(text.contains(f), "header lacks {f}");
    }
    let Ok(status) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-fsyntax-only", "-I"])
        .arg(root.join("include"))
        .arg(root.join("c/smoke.c"))
        .status()
    else {
        eprintln!("no C compiler available; header only checked textually");
        return;
    };
    assert!(status.success());
}
