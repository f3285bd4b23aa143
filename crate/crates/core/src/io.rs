//! Image files on disk.

use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::colorspace::RgbImage;
use crate::error::{Error, Result};

pub const IMAGE_EXTENSIONS: [&str; 5] = ["png", "jpg", "jpeg", "tif", "tiff"];

pub fn is_image_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// All image files below `dir`, sorted by path.
pub fn collect_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).follow_links(true) {
        let entry = entry.map_err(|e| match e.into_io_error() {
            Some(io) => Error::Io(io),
            None => Error::Io(std::io::Error::other("filesystem loop")),
        })?;
        if entry.file_type().is_file() && is_image_path(entry.path()) {
            out.push(entry.into_path());
        }
    }
    out.sort();
    Ok(out)
}

pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    let img = image::open(path).map_err(|source| Error::Decode { path: path.to_path_buf(), source })?;
    from_dynamic(img)
}

pub fn from_dynamic(img: image::DynamicImage) -> Result<RgbImage> {
    let rgb = img.into_rgb8();
    let (w, h) = rgb.dimensions();
    RgbImage::new(w, h, rgb.into_raw())
}

pub fn to_image_buffer(img: &RgbImage) -> image::RgbImage {
    image::RgbImage::from_raw(img.width(), img.height(), img.data().to_vec())
        .expect("RgbImage always holds width * height * 3 bytes")
}

/// Writes a lossless PNG.
pub fn save_png(path: &Path, img: &RgbImage) -> Result<()> {
    to_image_buffer(img)
        .save_with_format(path, image::ImageFormat::Png)
        .map_err(|source| Error::Encode { path: path.to_path_buf(), source })
}
