#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stainforge::colorspace::RgbImage;
use stainforge::io::save_png;
use stainforge::synth;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn noise_image(width: u32, height: u32, rng: &mut impl Rng) -> RgbImage {
    let data = (0..width * height * 3).map(|_| rng.random::<u8>()).collect();
    RgbImage::new(width, height, data).unwrap()
}

/// Deterministic walk over the 24-bit RGB cube visiting `n` distinct triples.
pub fn rgb_grid(n: usize) -> Vec<[u8; 3]> {
    const STRIDE: u64 = 167_773; // odd, hence coprime with 2^24
    (0..n as u64)
        .map(|k| {
            let v = (k * STRIDE) & 0xFF_FFFF;
            [(v >> 16) as u8, (v >> 8) as u8, v as u8]
        })
        .collect()
}

pub fn max_channel_diff(a: &RgbImage, b: &RgbImage) -> u8 {
    a.data().iter().zip(b.data()).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0)
}

/// Writes a class-folder corpus of synthetic patches and returns the paths.
pub fn write_corpus(root: &Path, classes: usize, per_class: usize, size: u32, seed: u64) -> Vec<PathBuf> {
    let imgs = synth::corpus(classes * per_class, size, size, seed);
    let mut paths = Vec::new();
    for (i, img) in imgs.iter().enumerate() {
        let dir = root.join(format!("class{}", i % classes));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(format!("patch{i:04}.png"));
        save_png(&p, img).unwrap();
        paths.push(p);
    }
    paths
}

pub fn stainforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stainforge"))
        .args(args)
        .env_remove("STAINFORGE_THREADS")
        .output()
        .expect("binary runs")
}

/// `key=value` records printed after the `---` marker.
pub fn records(stdout: &[u8]) -> std::collections::BTreeMap<String, String> {
    let text = String::from_utf8_lossy(stdout);
    text.lines()
        .skip_while(|l| *l != "---")
        .skip(1)
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn tree_bytes(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<_> = walkdir::WalkDir::new(root)
        .into_iter()
        .map(|e| e.unwrap())
        .filter(|e| e.file_type().is_file())
        .map(|e| (e.path().strip_prefix(root).unwrap().to_path_buf(), std::fs::read(e.path()).unwrap()))
        .collect();
    files.sort();
    files
}
