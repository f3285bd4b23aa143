//! Command-line front end.
//!
//! Exit codes: 0 success, 1 other failure, 2 unreadable input directory or
//! missing/invalid statistics, 3 fewer than two usable images, 4 output could
//! not be written, 64 invalid command line. Data goes to stdout as a short
//! human summary followed by a `---` line and `key=value` records; warnings
//! go to stderr.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::augment::{SaConfig, SaScheme, Strength};
use crate::colorspace::{to_planes, ColorSpace, RgbImage};
use crate::error::Error;
use crate::io::{collect_images, load_rgb, save_png};
use crate::normalizer::normalize_to_template;
use crate::pipeline::{self, Mode, PipelineConfig, SpaceProbs};
use crate::sampler::VirtualTemplate;
use crate::stats::{channel_stats, export_style_csv, fit_style_distribution, subsample_corpus, DistributionFamily};
use crate::statsfile::{format_sig9, parse_stats, write_stats};
use crate::synth;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOO_FEW_IMAGES: i32 = 3;
pub const EXIT_OUTPUT: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "STAINFORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "stainforge", version, about = "Randomized stain normalization and augmentation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit per-space stain-style distributions over a corpus.
    Fit(FitArgs),
    /// Transform a directory of images into a mirrored output tree.
    Apply(ApplyArgs),
    /// Write per-image style vectors as CSV.
    ExportStyle(ExportArgs),
    /// Measure transform throughput on a synthetic corpus.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input_dir: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "lab,hsv,hed")]
    pub spaces: Vec<ColorSpace>,
    /// Images sampled per class folder, or `all`.
    #[arg(long, default_value = "all")]
    pub per_class: String,
    #[arg(long, default_value = "gaussian")]
    pub family: DistributionFamily,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Passthrough,
    Randstainna,
    /// RandStainNA restricted to `--space`.
    Fixed,
    /// Normalization to the fitted mean template (or `--template-image`).
    Sn,
    Sa1,
    Sa2,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub input_dir: PathBuf,
    #[arg(long)]
    pub output_dir: PathBuf,
    #[arg(long)]
    pub stats: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "randstainna")]
    pub mode: ModeArg,
    /// Color space for fixed, sn, sa1 and sa2 modes.
    #[arg(long)]
    pub space: Option<ColorSpace>,
    /// LAB,HSV,HED selection probabilities for randstainna.
    #[arg(long, value_delimiter = ',')]
    pub space_probs: Option<Vec<f64>>,
    #[arg(long, default_value = "light")]
    pub strength: Strength,
    /// Override the distribution family recorded in the statistics file.
    #[arg(long)]
    pub family: Option<DistributionFamily>,
    /// Physical template image for sn mode instead of the fitted mean.
    #[arg(long)]
    pub template_image: Option<PathBuf>,
    #[arg(long)]
    pub shared_batch_template: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = THREADS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub input_dir: PathBuf,
    #[arg(long, default_value = "lab")]
    pub space: ColorSpace,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, env = THREADS_ENV)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 32)]
    pub images: usize,
    #[arg(long, default_value_t = 224)]
    pub size: u32,
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest worker count in the scaling report.
    #[arg(long, env = THREADS_ENV)]
    pub workers: Option<usize>,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(&a, out, err),
        Command::Apply(a) => cmd_apply(&a, out, err),
        Command::ExportStyle(a) => cmd_export_style(&a, out, err),
        Command::Bench(a) => cmd_bench(&a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn thread_pool(workers: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let n = match workers {
        Some(0) => return Err(CliError::new(EXIT_USAGE, "--workers must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::new(EXIT_FAILURE, format!("cannot start worker pool: {e}")))
}

fn list_input(dir: &Path) -> CliResult<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Err(CliError::new(EXIT_INPUT, format!("{} is not a readable directory", dir.display())));
    }
    collect_images(dir).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", dir.display())))
}

/// Decodes every path on `pool`, skipping (and reporting) undecodable files.
fn decode_all(pool: &rayon::ThreadPool, paths: &[PathBuf], err: &mut dyn Write) -> Vec<(PathBuf, RgbImage)> {
    let decoded: Vec<_> = pool.install(|| paths.par_iter().map(|p| (p, load_rgb(p))).collect());
    let mut out = Vec::with_capacity(decoded.len());
    for (p, r) in decoded {
        match r {
            Ok(img) => out.push((p.clone(), img)),
            Err(e) => {
                let _ = writeln!(err, "warning: skipping {e}");
            }
        }
    }
    out
}

fn fmt3(v: [f64; 3]) -> String {
    v.map(format_sig9).join(",")
}

// --------------------------------------------------------------------- fit

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let per_class = match args.per_class.as_str() {
        "all" => None,
        n => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Some(n),
            _ => return Err(CliError::new(EXIT_USAGE, format!("--per-class must be a positive integer or `all`, got `{n}`"))),
        },
    };
    if args.spaces.is_empty() {
        return Err(CliError::new(EXIT_USAGE, "--spaces must name at least one color space"));
    }
    let spaces: Vec<ColorSpace> = args.spaces.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();

    let mut paths = list_input(&args.input_dir)?;
    if let Some(n) = per_class {
        if !paths.is_empty() {
            paths = subsample_corpus(&paths, n, args.seed).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
        }
    }
    let pool = thread_pool(None)?;
    let images = decode_all(&pool, &paths, err);
    let skipped = paths.len() - images.len();
    if images.len() < 2 {
        return Err(CliError::new(
            EXIT_TOO_FEW_IMAGES,
            format!("need at least 2 decodable images, found {}", images.len()),
        ));
    }

    let mut dists = Vec::with_capacity(spaces.len());
    for &space in &spaces {
        let stats: Vec<_> = images.par_iter().map(|(_, img)| channel_stats(&to_planes(img, space))).collect();
        let dist = fit_style_distribution(&stats, args.family).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
        dists.push(dist);
    }
    fs::write(&args.out, write_stats(&dists))
        .map_err(|e| CliError::new(EXIT_OUTPUT, format!("{}: {e}", args.out.display())))?;

    let mut s = String::new();
    for d in &dists {
        s += &format!(
            "{}: n={} avg mean=[{}] sd=[{}]; std mean=[{}] sd=[{}]\n",
            d.space,
            d.n_samples,
            fmt3(d.mean_of_avg),
            fmt3(d.sd_of_avg()),
            fmt3(d.mean_of_std),
            fmt3(d.sd_of_std())
        );
    }
    s += "---\n";
    s += &format!("images={}\nskipped={}\nfamily={}\nout={}\n", images.len(), skipped, args.family, args.out.display());
    for d in &dists {
        let k = d.space;
        s += &format!("{k}.n={}\n", d.n_samples);
        s += &format!("{k}.avg.mean={}\n{k}.avg.sd={}\n", fmt3(d.mean_of_avg), fmt3(d.sd_of_avg()));
        s += &format!("{k}.std.mean={}\n{k}.std.sd={}\n", fmt3(d.mean_of_std), fmt3(d.sd_of_std()));
    }
    out.write_all(s.as_bytes()).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))
}

// ------------------------------------------------------------------- apply

/// Builds the pipeline mode from flags, rejecting conflicting combinations.
fn resolve_mode(args: &ApplyArgs) -> CliResult<Mode> {
    let usage = |m: &str| CliError::new(EXIT_USAGE, m.to_string());
    if args.space_probs.is_some() && args.mode != ModeArg::Randstainna {
        return Err(usage("--space-probs only applies to --mode randstainna"));
    }
    if args.template_image.is_some() && args.mode != ModeArg::Sn {
        return Err(usage("--template-image only applies to --mode sn"));
    }
    if args.shared_batch_template && !matches!(args.mode, ModeArg::Randstainna | ModeArg::Fixed) {
        return Err(usage("--shared-batch-template only applies to randstainna and fixed modes"));
    }
    let space = || args.space.ok_or_else(|| usage("this mode requires --space"));
    let sa = |scheme| {
        SaConfig::preset(scheme, space()?, args.strength).map_err(|e| CliError::new(EXIT_USAGE, e.to_string()))
    };
    Ok(match args.mode {
        ModeArg::Passthrough | ModeArg::Randstainna if args.space.is_some() => {
            return Err(usage("--space does not apply to this mode"))
        }
        ModeArg::Passthrough => Mode::PassThrough,
        ModeArg::Randstainna => Mode::RandStainNa,
        ModeArg::Fixed => Mode::FixedSpace(space()?),
        ModeArg::Sn => Mode::SnBaseline(space()?),
        ModeArg::Sa1 => Mode::Sa1Baseline(sa(SaScheme::Sa1)?),
        ModeArg::Sa2 => Mode::Sa2Baseline(sa(SaScheme::Sa2)?),
    })
}

fn needs_stats(mode: &Mode, template_image: bool) -> bool {
    match mode {
        Mode::RandStainNa | Mode::FixedSpace(_) => true,
        Mode::SnBaseline(_) => !template_image,
        _ => false,
    }
}

fn output_path(input_dir: &Path, output_dir: &Path, path: &Path) -> PathBuf {
    let rel = path.strip_prefix(input_dir).unwrap_or(path);
    output_dir.join(rel).with_extension("png")
}

/// Removes files written so far and directories created by this run.
fn roll_back(written: &[PathBuf], created_dirs: &[PathBuf]) {
    for f in written {
        let _ = fs::remove_file(f);
    }
    for d in created_dirs.iter().rev() {
        let _ = fs::remove_dir(d);
    }
}

pub fn cmd_apply(args: &ApplyArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let mode = resolve_mode(args)?;
    let probs = match &args.space_probs {
        Some(p) if p.len() != 3 => {
            return Err(CliError::new(EXIT_USAGE, "--space-probs takes exactly three values (lab,hsv,hed)"))
        }
        Some(p) => SpaceProbs::new([p[0], p[1], p[2]]).map_err(|e| CliError::new(EXIT_USAGE, e.to_string()))?,
        None => SpaceProbs::uniform(),
    };
    let pool = thread_pool(args.workers)?;

    let paths = list_input(&args.input_dir)?;
    let distributions = match (&args.stats, needs_stats(&mode, args.template_image.is_some())) {
        (Some(p), _) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", p.display())))?;
            parse_stats(&text).map_err(|e| CliError::new(EXIT_INPUT, format!("{}: {e}", p.display())))?
        }
        (None, true) => return Err(CliError::new(EXIT_INPUT, "this mode requires --stats")),
        (None, false) => BTreeMap::new(),
    };
    let mut cfg = PipelineConfig::new(mode, distributions).with_probs(probs).with_seed(args.seed);
    cfg.family_override = args.family;
    cfg.shared_batch_template = args.shared_batch_template;
    if args.template_image.is_none() {
        cfg.validate().map_err(|e| CliError::new(EXIT_INPUT, e.to_string()))?;
    }
    let physical_template = match (&args.template_image, mode) {
        (Some(p), Mode::SnBaseline(space)) => {
            let img = load_rgb(p).map_err(|e| CliError::new(EXIT_INPUT, e.to_string()))?;
            Some(VirtualTemplate::from(channel_stats(&to_planes(&img, space))))
        }
        _ => None,
    };

    let targets: Vec<PathBuf> = paths.iter().map(|p| output_path(&args.input_dir, &args.output_dir, p)).collect();
    let mut seen = BTreeMap::new();
    for (src, dst) in paths.iter().zip(&targets) {
        if let Some(prev) = seen.insert(dst, src) {
            return Err(CliError::new(
                EXIT_FAILURE,
                format!("{} and {} both map to {}", prev.display(), src.display(), dst.display()),
            ));
        }
    }

    let mut created_dirs = Vec::new();
    let dirs: BTreeSet<PathBuf> = std::iter::once(args.output_dir.clone())
        .chain(targets.iter().filter_map(|t| t.parent().map(Path::to_path_buf)))
        .collect();
    for dir in dirs {
        let mut missing = Vec::new();
        let mut cur = Some(dir.as_path());
        while let Some(d) = cur {
            if d.as_os_str().is_empty() || d.exists() {
                break;
            }
            missing.push(d.to_path_buf());
            cur = d.parent();
        }
        if let Err(e) = fs::create_dir_all(&dir) {
            roll_back(&[], &created_dirs);
            return Err(CliError::new(EXIT_OUTPUT, format!("{}: {e}", dir.display())));
        }
        created_dirs.extend(missing.into_iter().rev());
    }

    enum ItemResult {
        Written { path: PathBuf, pixels: usize, clamped: f64 },
        Skipped(String),
        WriteFailed(String),
        Failed(String),
    }
    let shared = pipeline::shared_template(&cfg).map_err(|e| CliError::new(EXIT_INPUT, e.to_string()))?;
    let cfg = Arc::new(cfg);
    let results: Vec<ItemResult> = pool.install(|| {
        paths
            .par_iter()
            .zip(&targets)
            .enumerate()
            .map(|(index, (src, dst))| {
                let img = match load_rgb(src) {
                    Ok(img) => img,
                    Err(e) => return ItemResult::Skipped(e.to_string()),
                };
                let outcome = match (&physical_template, &shared) {
                    (Some(t), _) | (None, Some(t)) => {
                        let o = normalize_to_template(&img, t);
                        Ok((o.image, o.clamped_fraction))
                    }
                    (None, None) => pipeline::transform_item(&img, &cfg, index).map(|o| (o.image, o.clamped_fraction)),
                };
                match outcome {
                    Err(e) => ItemResult::Failed(format!("{}: {e}", src.display())),
                    Ok((image, clamped)) => match save_png(dst, &image) {
                        Ok(()) => ItemResult::Written { path: dst.clone(), pixels: image.pixel_count(), clamped },
                        Err(e) => ItemResult::WriteFailed(e.to_string()),
                    },
                }
            })
            .collect()
    });

    let mut written = Vec::new();
    let (mut pixels, mut clamped_pixels, mut skipped) = (0usize, 0.0f64, 0usize);
    let mut failure: Option<CliError> = None;
    for r in results {
        match r {
            ItemResult::Written { path, pixels: n, clamped } => {
                written.push(path);
                pixels += n;
                clamped_pixels += clamped * n as f64;
            }
            ItemResult::Skipped(msg) => {
                skipped += 1;
                let _ = writeln!(err, "warning: skipping {msg}");
            }
            ItemResult::WriteFailed(msg) => {
                failure.get_or_insert(CliError::new(EXIT_OUTPUT, msg));
            }
            ItemResult::Failed(msg) => {
                failure.get_or_insert(CliError::new(EXIT_FAILURE, msg));
            }
        }
    }
    if let Some(f) = failure {
        roll_back(&written, &created_dirs);
        return Err(f);
    }

    let clamped_fraction = if pixels == 0 { 0.0 } else { clamped_pixels / pixels as f64 };
    let s = format!(
        "transformed {} images into {}\n---\nimages={}\nskipped={}\nmode={}\nclamped_fraction={}\n",
        written.len(),
        args.output_dir.display(),
        written.len(),
        skipped,
        args.mode.to_possible_value().expect("no skipped variants").get_name(),
        format_sig9(clamped_fraction)
    );
    out.write_all(s.as_bytes()).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))
}

// ------------------------------------------------------------ export-style

pub fn cmd_export_style(args: &ExportArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let pool = thread_pool(args.workers)?;
    let paths = list_input(&args.input_dir)?;
    let images = decode_all(&pool, &paths, err);
    if images.is_empty() {
        return Err(CliError::new(EXIT_TOO_FEW_IMAGES, "no decodable images"));
    }
    let rows: Vec<(String, _)> = pool.install(|| {
        images
            .par_iter()
            .map(|(p, img)| {
                let rel = p.strip_prefix(&args.input_dir).unwrap_or(p);
                (rel.to_string_lossy().into_owned(), channel_stats(&to_planes(img, args.space)))
            })
            .collect()
    });
    let iter = rows.iter().map(|(p, s)| (p.as_str(), s));
    let to_cli = |e: Error| match e {
        Error::SinkWrite(_) | Error::Io(_) => CliError::new(EXIT_OUTPUT, e.to_string()),
        e => CliError::new(EXIT_FAILURE, e.to_string()),
    };
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| CliError::new(EXIT_OUTPUT, format!("{}: {e}", path.display())))?;
            let n = export_style_csv(iter, std::io::BufWriter::new(file)).map_err(to_cli)?;
            let s = format!(
                "wrote {n} rows to {}\n---\nrows={n}\nspace={}\nout={}\n",
                path.display(),
                args.space,
                path.display()
            );
            out.write_all(s.as_bytes()).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))
        }
        None => export_style_csv(iter, out).map(|_| ()).map_err(to_cli),
    }
}

// ------------------------------------------------------------------- bench

fn bench_modes() -> Vec<(&'static str, Mode)> {
    let sa = |scheme, space| SaConfig::preset(scheme, space, Strength::Light).expect("valid preset");
    vec![
        ("passthrough", Mode::PassThrough),
        ("randstainna", Mode::RandStainNa),
        ("sn-lab", Mode::SnBaseline(ColorSpace::Lab)),
        ("sa1-hed", Mode::Sa1Baseline(sa(SaScheme::Sa1, ColorSpace::Hed))),
        ("sa2-hsv", Mode::Sa2Baseline(sa(SaScheme::Sa2, ColorSpace::Hsv))),
    ]
}

/// Best-of-`repeats` throughput in images per second.
fn measure(pool: &rayon::ThreadPool, imgs: &[RgbImage], cfg: &PipelineConfig, repeats: usize) -> CliResult<f64> {
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let outs = pool
            .install(|| pipeline::transform_batch(imgs, cfg))
            .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
        std::hint::black_box(&outs);
        best = best.min(start.elapsed().as_secs_f64());
    }
    Ok(imgs.len() as f64 / best.max(1e-9))
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CliResult<()> {
    if args.images < 2 || args.size == 0 {
        return Err(CliError::new(EXIT_USAGE, "--images must be >= 2 and --size > 0"));
    }
    let max_workers = match args.workers {
        Some(0) => return Err(CliError::new(EXIT_USAGE, "--workers must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let imgs = synth::corpus(args.images, args.size, args.size, args.seed);
    let mut distributions = BTreeMap::new();
    for space in ColorSpace::ALL {
        let stats: Vec<_> = imgs.iter().map(|img| channel_stats(&to_planes(img, space))).collect();
        let dist = fit_style_distribution(&stats, DistributionFamily::Gaussian)
            .map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))?;
        distributions.insert(space, dist);
    }

    let pool = thread_pool(Some(max_workers))?;
    let mut lines = Vec::new();
    for (name, mode) in bench_modes() {
        let cfg = PipelineConfig::new(mode, distributions.clone()).with_seed(args.seed);
        let ips = measure(&pool, &imgs, &cfg, args.repeats)?;
        lines.push((format!("mode.{name}.images_per_sec"), ips));
    }
    let mut counts: Vec<usize> = std::iter::successors(Some(1usize), |w| Some(w * 2))
        .take_while(|&w| w < max_workers)
        .collect();
    counts.push(max_workers);
    let cfg = PipelineConfig::new(Mode::RandStainNa, distributions).with_seed(args.seed);
    for w in counts {
        let ips = measure(&thread_pool(Some(w))?, &imgs, &cfg, args.repeats)?;
        lines.push((format!("scaling.randstainna.workers_{w}.images_per_sec"), ips));
    }

    let mut s = format!(
        "benchmark: {} synthetic {}x{} images, best of {}, up to {} workers\n",
        args.images, args.size, args.size, args.repeats, max_workers
    );
    for (k, v) in &lines {
        s += &format!("  {k:<48} {v:>10.1}\n");
    }
    s += &format!("---\nimages={}\nsize={}\nworkers={}\n", args.images, args.size, max_workers);
    for (k, v) in &lines {
        s += &format!("{k}={v:.3}\n");
    }
    out.write_all(s.as_bytes()).map_err(|e| CliError::new(EXIT_FAILURE, e.to_string()))
}
