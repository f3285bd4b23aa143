//! Stain-style descriptors and the dataset-level hyper-distribution.
//!
//! Each image is summarized by the per-channel mean `avg` and population
//! standard deviation `std` of its planes. Across a corpus these 6-vectors
//! are streamed through a Welford accumulator to obtain sample means and
//! sample variances (divisor n - 1). Covariance is diagonal only.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::colorspace::{ColorSpace, PlaneImage};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStats {
    pub space: ColorSpace,
    pub avg: [f64; 3],
    pub std: [f64; 3],
}

/// Single-pass running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn population_variance(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.m2 / self.count as f64).max(0.0)
        }
    }

    pub fn sample_variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }
}

pub fn channel_stats(planes: &PlaneImage) -> ChannelStats {
    let mut acc = [Welford::new(); 3];
    for (c, acc) in acc.iter_mut().enumerate() {
        for &v in planes.channel(c) {
            acc.push(v);
        }
    }
    ChannelStats {
        space: planes.space(),
        avg: acc.map(|a| a.mean()),
        std: acc.map(|a| a.population_variance().sqrt()),
    }
}

pub const DEFAULT_T_DOF: f64 = 5.0;

/// Family used to draw template components. All members are parameterized
/// by location and standard deviation so that first and second moments
/// match the fit regardless of family.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum DistributionFamily {
    #[default]
    Gaussian,
    StudentT { dof: f64 },
    Uniform,
    Laplace,
}

impl DistributionFamily {
    pub fn student_t(dof: f64) -> Result<Self> {
        if !dof.is_finite() || dof <= 2.0 {
            return Err(Error::InvalidConfig(format!(
                "student-t degrees of freedom must be finite and > 2, got {dof}"
            )));
        }
        Ok(DistributionFamily::StudentT { dof })
    }
}

impl fmt::Display for DistributionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionFamily::Gaussian => f.write_str("gaussian"),
            DistributionFamily::StudentT { dof } if *dof == DEFAULT_T_DOF => f.write_str("t"),
            DistributionFamily::StudentT { dof } => write!(f, "t:{dof}"),
            DistributionFamily::Uniform => f.write_str("uniform"),
            DistributionFamily::Laplace => f.write_str("laplace"),
        }
    }
}

impl FromStr for DistributionFamily {
    type Err = Error;

    /// Accepts `gaussian`, `t` (5 degrees of freedom), `t:<dof>`, `uniform`
    /// and `laplace`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "gaussian" | "normal" => Ok(DistributionFamily::Gaussian),
            "t" | "student-t" => Ok(DistributionFamily::StudentT { dof: DEFAULT_T_DOF }),
            "uniform" => Ok(DistributionFamily::Uniform),
            "laplace" => Ok(DistributionFamily::Laplace),
            other => match other.strip_prefix("t:") {
                Some(dof) => {
                    let dof: f64 = dof.parse().map_err(|_| {
                        Error::InvalidConfig(format!("bad degrees of freedom in `{other}`"))
                    })?;
                    DistributionFamily::student_t(dof)
                }
                None => Err(Error::InvalidConfig(format!("unknown distribution family `{other}`"))),
            },
        }
    }
}

/// Fitted hyper-statistics for one color space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StyleDistribution {
    pub space: ColorSpace,
    pub mean_of_avg: [f64; 3],
    /// Diagonal of the covariance of per-image means.
    pub var_of_avg: [f64; 3],
    pub mean_of_std: [f64; 3],
    /// Diagonal of the covariance of per-image standard deviations.
    pub var_of_std: [f64; 3],
    pub family: DistributionFamily,
    pub n_samples: usize,
}

impl StyleDistribution {
    pub fn sd_of_avg(&self) -> [f64; 3] {
        self.var_of_avg.map(f64::sqrt)
    }

    pub fn sd_of_std(&self) -> [f64; 3] {
        self.var_of_std.map(f64::sqrt)
    }

    pub fn with_family(mut self, family: DistributionFamily) -> Self {
        self.family = family;
        self
    }
}

/// Streaming accumulator behind [`fit_style_distribution`].
#[derive(Debug, Clone, Default)]
pub struct StyleAccumulator {
    space: Option<ColorSpace>,
    avg: [Welford; 3],
    std: [Welford; 3],
}

impl StyleAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, stats: &ChannelStats) -> Result<()> {
        match self.space {
            Some(expected) if expected != stats.space => {
                return Err(Error::MixedColorSpace { expected, found: stats.space })
            }
            _ => self.space = Some(stats.space),
        }
        for c in 0..3 {
            self.avg[c].push(stats.avg[c]);
            self.std[c].push(stats.std[c]);
        }
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.avg[0].count() as usize
    }

    pub fn finish(&self, family: DistributionFamily) -> Result<StyleDistribution> {
        let n = self.count();
        let space = match self.space {
            Some(space) if n >= 2 => space,
            _ => return Err(Error::InsufficientSamples { needed: 2, found: n }),
        };
        Ok(StyleDistribution {
            space,
            mean_of_avg: self.avg.map(|w| w.mean()),
            var_of_avg: self.avg.map(|w| w.sample_variance()),
            mean_of_std: self.std.map(|w| w.mean()),
            var_of_std: self.std.map(|w| w.sample_variance()),
            family,
            n_samples: n,
        })
    }
}

pub fn fit_style_distribution<'a, I>(stats: I, family: DistributionFamily) -> Result<StyleDistribution>
where
    I: IntoIterator<Item = &'a ChannelStats>,
{
    let mut acc = StyleAccumulator::new();
    for s in stats {
        acc.push(s)?;
    }
    acc.finish(family)
}

/// Class label of a corpus file: the name of its immediate parent directory.
pub fn class_of(path: &Path) -> String {
    path.parent()
        .and_then(|p| p.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Uniform sample without replacement of at most `per_class` paths per
/// class. Classes are visited in sorted order with one seeded generator and
/// the selection is returned in input order.
pub fn subsample_corpus(paths: &[PathBuf], per_class: usize, seed: u64) -> Result<Vec<PathBuf>> {
    if paths.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if per_class == 0 {
        return Err(Error::InvalidConfig("per-class count must be at least 1".into()));
    }
    let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        classes.entry(class_of(p)).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = vec![false; paths.len()];
    for members in classes.values() {
        if members.len() <= per_class {
            members.iter().for_each(|&i| keep[i] = true);
        } else {
            for j in index::sample(&mut rng, members.len(), per_class) {
                keep[members[j]] = true;
            }
        }
    }
    Ok(paths
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p.clone())
        .collect())
}

pub const STYLE_CSV_HEADER: [&str; 8] = ["path", "space", "a1", "a2", "a3", "d1", "d2", "d3"];

/// Writes one row per image (path, space, avg, std) after a header row and
/// returns the number of data rows.
pub fn export_style_csv<'a, I, W>(rows: I, sink: W) -> Result<usize>
where
    I: IntoIterator<Item = (&'a str, &'a ChannelStats)>,
    W: Write,
{
    let mut writer = csv::Writer::from_writer(sink);
    let mut n = 0;
    let sink_err = |e: csv::Error| {
        if !e.is_io_error() {
            return Error::Csv(e);
        }
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::SinkWrite(io),
            _ => unreachable!(),
        }
    };
    for (path, s) in rows {
        if n == 0 {
            writer.write_record(STYLE_CSV_HEADER).map_err(sink_err)?;
        }
        let mut record = vec![path.to_string(), s.space.to_string()];
        record.extend(s.avg.iter().chain(s.std.iter()).map(|v| v.to_string()));
        writer.write_record(&record).map_err(sink_err)?;
        n += 1;
    }
    if n == 0 {
        return Err(Error::InsufficientSamples { needed: 1, found: 0 });
    }
    writer.flush().map_err(Error::SinkWrite)?;
    Ok(n)
}

pub fn read_style_csv<R: Read>(source: R) -> Result<Vec<(String, ChannelStats)>> {
    let mut reader = csv::Reader::from_reader(source);
    let header = reader.headers()?.clone();
    if header.iter().ne(STYLE_CSV_HEADER) {
        return Err(Error::InvalidConfig(format!("unexpected style csv header {header:?}")));
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let num = |i: usize| -> Result<f64> {
            record[i]
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad number `{}` in style csv", &record[i])))
        };
        let stats = ChannelStats {
            space: record[1].parse()?,
            avg: [num(2)?, num(3)?, num(4)?],
            std: [num(5)?, num(6)?, num(7)?],
        };
        out.push((record[0].to_string(), stats));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(avg: [f64; 3], std: [f64; 3]) -> ChannelStats {
        ChannelStats { space: ColorSpace::Lab, avg, std }
    }

    #[test]
    fn constant_plane_has_zero_std() {
        let p = PlaneImage::new(ColorSpace::Hsv, 2, 2, [vec![3.0; 4], vec![3.0; 4], vec![3.0; 4]]).unwrap();
        let s = channel_stats(&p);
        assert_eq!(s.avg, [3.0; 3]);
        assert_eq!(s.std, [0.0; 3]);
        assert_eq!(s.space, ColorSpace::Hsv);
    }

    #[test]
    fn two_pixel_plane_uses_population_divisor() {
        let p = PlaneImage::new(ColorSpace::Lab, 2, 1, [vec![0.0, 10.0], vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let s = channel_stats(&p);
        assert_eq!(s.avg[0], 5.0);
        assert_eq!(s.std[0], 5.0);
    }

    #[test]
    fn identical_stats_fit_to_zero_variance() {
        let s = cs([50.0, 10.0, -5.0], [12.0, 3.0, 4.0]);
        let d = fit_style_distribution(&[s, s], DistributionFamily::Gaussian).unwrap();
        assert_eq!(d.mean_of_avg, s.avg);
        assert_eq!(d.mean_of_std, s.std);
        assert_eq!(d.var_of_avg, [0.0; 3]);
        assert_eq!(d.var_of_std, [0.0; 3]);
        assert_eq!(d.n_samples, 2);
    }

    #[test]
    fn two_point_sample_variance() {
        let d = fit_style_distribution(
            &[cs([10.0, 0.0, 0.0], [0.0; 3]), cs([20.0, 0.0, 0.0], [0.0; 3])],
            DistributionFamily::Gaussian,
        )
        .unwrap();
        assert_eq!(d.mean_of_avg, [15.0, 0.0, 0.0]);
        assert_eq!(d.var_of_avg, [50.0, 0.0, 0.0]);
    }

    #[test]
    fn fit_errors() {
        let a = cs([1.0; 3], [1.0; 3]);
        let mut b = a;
        b.space = ColorSpace::Hed;
        assert!(matches!(
            fit_style_distribution(&[a, b], DistributionFamily::Gaussian),
            Err(Error::MixedColorSpace { .. })
        ));
        assert!(matches!(
            fit_style_distribution(&[a], DistributionFamily::Gaussian),
            Err(Error::InsufficientSamples { found: 1, .. })
        ));
        assert!(matches!(
            fit_style_distribution(&[], DistributionFamily::Gaussian),
            Err(Error::InsufficientSamples { found: 0, .. })
        ));
    }

    #[test]
    fn duplicated_dataset_keeps_mean_and_rescales_sample_variance() {
        let data: Vec<_> = (0..7)
            .map(|i| cs([i as f64 * 1.5, -(i as f64), 3.0], [i as f64 + 1.0, 2.0, 0.5 * i as f64]))
            .collect();
        let doubled: Vec<_> = data.iter().chain(data.iter()).copied().collect();
        let once = fit_style_distribution(&data, DistributionFamily::Gaussian).unwrap();
        let twice = fit_style_distribution(&doubled, DistributionFamily::Gaussian).unwrap();
        let n = data.len() as f64;
        for c in 0..3 {
            assert!((once.mean_of_avg[c] - twice.mean_of_avg[c]).abs() < 1e-12);
            assert!((once.mean_of_std[c] - twice.mean_of_std[c]).abs() < 1e-12);
            // population variances agree; sample variances differ by (2n-2)/(2n-1)
            let ratio = (2.0 * n - 2.0) / (2.0 * n - 1.0);
            assert!((once.var_of_avg[c] * ratio - twice.var_of_avg[c]).abs() < 1e-9);
            assert!((once.var_of_std[c] * ratio - twice.var_of_std[c]).abs() < 1e-9);
        }
    }

    #[test]
    fn family_parsing() {
        assert_eq!("t".parse::<DistributionFamily>().unwrap(), DistributionFamily::StudentT { dof: 5.0 });
        assert_eq!("t:7.5".parse::<DistributionFamily>().unwrap(), DistributionFamily::StudentT { dof: 7.5 });
        assert!("t:2".parse::<DistributionFamily>().is_err());
        assert!("cauchy".parse::<DistributionFamily>().is_err());
        for f in ["gaussian", "t", "t:9", "uniform", "laplace"] {
            assert_eq!(f.parse::<DistributionFamily>().unwrap().to_string(), f);
        }
    }

    #[test]
    fn subsample_whole_corpus_when_classes_are_small() {
        let paths: Vec<PathBuf> = ["a/1.png", "b/1.png", "a/2.png"].iter().map(PathBuf::from).collect();
        assert_eq!(subsample_corpus(&paths, 5, 1).unwrap(), paths);
        assert!(matches!(subsample_corpus(&[], 5, 1), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn subsample_counts_and_determinism() {
        let paths: Vec<PathBuf> = (0..8)
            .flat_map(|c| (0..1000).map(move |i| PathBuf::from(format!("class{c}/img{i:04}.png"))))
            .collect();
        let a = subsample_corpus(&paths, 10, 42).unwrap();
        let b = subsample_corpus(&paths, 10, 42).unwrap();
        let c = subsample_corpus(&paths, 10, 43).unwrap();
        assert_eq!(a.len(), 80);
        assert_eq!(a, b);
        assert_ne!(a, c);
        let mut per_class: BTreeMap<String, usize> = BTreeMap::new();
        for p in &a {
            *per_class.entry(class_of(p)).or_default() += 1;
        }
        assert_eq!(per_class.len(), 8);
        assert!(per_class.values().all(|&n| n == 10));
    }

    #[test]
    fn csv_single_image_is_two_lines() {
        let s = cs([1.0, 2.0, 3.0], [0.5, 0.25, 0.125]);
        let mut out = Vec::new();
        assert_eq!(export_style_csv([("x/y.png", &s)], &mut out).unwrap(), 1);
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap(), "path,space,a1,a2,a3,d1,d2,d3");
        assert!(matches!(
            export_style_csv(std::iter::empty(), Vec::new()),
            Err(Error::InsufficientSamples { .. })
        ));
    }

    struct FailingSink;

    impl Write for FailingSink {
        fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
            Err(std::io::Error::other("disk full"))
        }
        fn flush(&mut self) -> std::io::Result<()> {
            Err(std::io::Error::other("disk full"))
        }
    }

    #[test]
    fn csv_sink_failure_is_reported() {
        let s = cs([1.0; 3], [1.0; 3]);
        let err = export_style_csv([("a", &s)], FailingSink).unwrap_err();
        assert!(matches!(err, Error::SinkWrite(_)), "{err:?}");
    }
}
