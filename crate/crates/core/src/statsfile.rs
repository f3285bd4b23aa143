//! Text format for fitted statistics, one YAML document per color space:
//!
//! ```text
//! version: 1
//! color_space: lab
//! family: gaussian
//! n_samples: 80
//! avg: { mean: [f, f, f], std: [f, f, f] }
//! std: { mean: [f, f, f], std: [f, f, f] }
//! lab_variant: cie-d65
//! hed_matrix: ruifrok-johnston
//! ```
//!
//! `std` entries are square roots of the variance diagonals. Floats carry
//! nine significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use crate::colorspace::ColorSpace;
use crate::error::{Error, Result};
use crate::stats::{DistributionFamily, StyleDistribution};

pub const FORMAT_VERSION: u32 = 1;
pub const LAB_VARIANT: &str = "cie-d65";
pub const HED_MATRIX: &str = "ruifrok-johnston";

const HEADER: &str = "\
# stainforge fitted stain-style statistics
# lab_variant cie-d65: float CIE L*a*b* (D65, sRGB transfer), L in [0,100].
#   Not the 8-bit rescaled variant (L*255/100, a+128, b+128).
# hed_matrix ruifrok-johnston: row-normalized H/E/DAB optical-density vectors.
";

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Moments {
    mean: [f64; 3],
    std: [f64; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    #[serde(rename = "version")]
    _version: u32,
    color_space: String,
    family: String,
    n_samples: usize,
    avg: Moments,
    std: Moments,
    lab_variant: String,
    hed_matrix: String,
}

/// Shortest decimal that preserves nine significant digits.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let rounded: f64 = format!("{v:.8e}").parse().expect("formatted float parses");
    let s = rounded.to_string();
    if s.contains('.') || s.contains('e') || s.len() < 16 {
        s
    } else {
        format!("{rounded:e}")
    }
}

fn triple(v: [f64; 3]) -> String {
    format!("[{}, {}, {}]", format_sig9(v[0]), format_sig9(v[1]), format_sig9(v[2]))
}

pub fn write_stats(dists: &[StyleDistribution]) -> String {
    let mut out = String::from(HEADER);
    for (i, d) in dists.iter().enumerate() {
        if i > 0 {
            out.push_str("---\n");
        }
        let _ = writeln!(out, "version: {FORMAT_VERSION}");
        let _ = writeln!(out, "color_space: {}", d.space);
        let _ = writeln!(out, "family: {}", family_tag(d.family));
        let _ = writeln!(out, "n_samples: {}", d.n_samples);
        let _ = writeln!(out, "avg: {{ mean: {}, std: {} }}", triple(d.mean_of_avg), triple(d.sd_of_avg()));
        let _ = writeln!(out, "std: {{ mean: {}, std: {} }}", triple(d.mean_of_std), triple(d.sd_of_std()));
        let _ = writeln!(out, "lab_variant: {LAB_VARIANT}");
        let _ = writeln!(out, "hed_matrix: {HED_MATRIX}");
    }
    out
}

fn family_tag(f: DistributionFamily) -> String {
    let tag = f.to_string();
    if tag.contains(':') {
        format!("\"{tag}\"")
    } else {
        tag
    }
}

fn check_moments(label: &str, m: &Moments) -> Result<()> {
    if m.mean.iter().chain(&m.std).any(|v| !v.is_finite()) {
        return Err(Error::StatsFormat(format!("{label} contains non-finite values")));
    }
    if m.std.iter().any(|&v| v < 0.0) {
        return Err(Error::StatsFormat(format!("{label}.std must be non-negative")));
    }
    Ok(())
}

pub fn parse_stats(text: &str) -> Result<BTreeMap<ColorSpace, StyleDistribution>> {
    let mut out = BTreeMap::new();
    for doc in serde_yaml::Deserializer::from_str(text) {
        let fmt_err = |e: serde_yaml::Error| Error::StatsFormat(e.to_string());
        let value = serde_yaml::Value::deserialize(doc).map_err(fmt_err)?;
        match value.get("version").and_then(serde_yaml::Value::as_u64) {
            Some(v) if v == FORMAT_VERSION as u64 => {}
            Some(v) => {
                return Err(Error::VersionMismatch {
                    found: u32::try_from(v).unwrap_or(u32::MAX),
                    expected: FORMAT_VERSION,
                })
            }
            None => return Err(Error::StatsFormat("missing or non-integer `version`".into())),
        }
        let doc: Document = serde_yaml::from_value(value).map_err(fmt_err)?;
        if doc.lab_variant != LAB_VARIANT {
            return Err(Error::StatsFormat(format!("unsupported lab_variant `{}`", doc.lab_variant)));
        }
        if doc.hed_matrix != HED_MATRIX {
            return Err(Error::StatsFormat(format!("unsupported hed_matrix `{}`", doc.hed_matrix)));
        }
        check_moments("avg", &doc.avg)?;
        check_moments("std", &doc.std)?;
        let space: ColorSpace = doc.color_space.parse().map_err(|e: Error| Error::StatsFormat(e.to_string()))?;
        let family: DistributionFamily = doc.family.parse().map_err(|e: Error| Error::StatsFormat(e.to_string()))?;
        let dist = StyleDistribution {
            space,
            mean_of_avg: doc.avg.mean,
            var_of_avg: doc.avg.std.map(|s| s * s),
            mean_of_std: doc.std.mean,
            var_of_std: doc.std.std.map(|s| s * s),
            family,
            n_samples: doc.n_samples,
        };
        if out.insert(space, dist).is_some() {
            return Err(Error::StatsFormat(format!("color space {space} appears twice")));
        }
    }
    if out.is_empty() {
        return Err(Error::StatsFormat("no statistics documents found".into()));
    }
    Ok(out)
}
