//! 8-bit PGM/PPM/PNG reading and writing.

use std::path::Path;

use image::{ColorType, DynamicImage, GrayImage, ImageFormat, RgbImage};

use crate::error::{Error, Result};
use crate::solver::ObservationMask;
use crate::Image;

/// One image as a list of channels: one for grayscale, three for RGB.
#[derive(Debug, Clone, PartialEq)]
pub struct Picture {
    pub channels: Vec<Image>,
}

impl Picture {
    pub fn gray(x: Image) -> Self {
        Self { channels: vec![x] }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.channels.first().map(|c| c.shape()).unwrap_or((0, 0))
    }

    pub fn is_gray(&self) -> bool {
        self.channels.len() == 1
    }

    fn validate(&self) -> Result<()> {
        let dims = self.dims();
        if !(self.channels.len() == 1 || self.channels.len() == 3) {
            return Err(Error::InvalidDimension(format!("pictures have 1 or 3 channels, got {}", self.channels.len())));
        }
        if dims.0 == 0 || dims.1 == 0 || self.channels.iter().any(|c| c.shape() != dims) {
            return Err(Error::InvalidDimension("channels must be non-empty and equally sized".into()));
        }
        Ok(())
    }
}

fn io_error(path: &Path, source: image::ImageError) -> Error {
    match source {
        image::ImageError::IoError(e) => Error::Io { path: path.to_path_buf(), source: e },
        other => Error::Image { path: path.to_path_buf(), source: other },
    }
}

/// Reads an 8-bit grayscale or RGB image. Alpha channels are dropped; 16-bit
/// and floating point files are rejected.
pub fn load_image(path: impl AsRef<Path>) -> Result<Picture> {
    let path = path.as_ref();
    let decoded = image::ImageReader::open(path)
        .map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?
        .with_guessed_format()
        .map_err(|e| Error::Io { path: path.to_path_buf(), source: e })?
        .decode()
        .map_err(|e| io_error(path, e))?;

    let unsupported = |color: ColorType| Error::UnsupportedDepth {
        path: path.to_path_buf(),
        detail: format!("{color:?}; only 8-bit channels are supported"),
    };
    match decoded.color() {
        ColorType::L8 | ColorType::La8 => Ok(Picture::gray(from_gray(&decoded.to_luma8()))),
        ColorType::Rgb8 | ColorType::Rgba8 => {
            let rgb = decoded.to_rgb8();
            let (w, h) = (rgb.width() as usize, rgb.height() as usize);
            let channels =
                (0..3).map(|c| Image::from_fn(h, w, |i, j| rgb.get_pixel(j as u32, i as u32)[c] as f64)).collect();
            Ok(Picture { channels })
        }
        other => Err(unsupported(other)),
    }
}

fn from_gray(g: &GrayImage) -> Image {
    let (w, h) = (g.width() as usize, g.height() as usize);
    Image::from_fn(h, w, |i, j| g.get_pixel(j as u32, i as u32)[0] as f64)
}

/// Rounds half away from zero and clamps to `0..=255`.
pub fn to_byte(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.round().clamp(0.0, 255.0) as u8
}

/// Writes `picture` in the format named by the file extension (`pgm`, `ppm`,
/// `pnm` or `png`).
pub fn save_image(picture: &Picture, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    picture.validate()?;
    let ext = path.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()).unwrap_or_default();
    let format = match ext.as_str() {
        "pgm" | "ppm" | "pnm" => ImageFormat::Pnm,
        "png" => ImageFormat::Png,
        _ => {
            return Err(Error::Config(format!(
                "cannot infer image format from {}; use .pgm, .ppm or .png",
                path.display()
            )))
        }
    };
    if (ext == "pgm" && !picture.is_gray()) || (ext == "ppm" && picture.is_gray()) {
        return Err(Error::Config(format!(
            "{} expects {} data",
            path.display(),
            if ext == "pgm" { "grayscale" } else { "RGB" }
        )));
    }

    let (h, w) = picture.dims();
    let dynamic = if picture.is_gray() {
        let c = &picture.channels[0];
        DynamicImage::ImageLuma8(GrayImage::from_fn(w as u32, h as u32, |x, y| {
            image::Luma([to_byte(c[(y as usize, x as usize)])])
        }))
    } else {
        let cs = &picture.channels;
        DynamicImage::ImageRgb8(RgbImage::from_fn(w as u32, h as u32, |x, y| {
            let at = (y as usize, x as usize);
            image::Rgb([to_byte(cs[0][at]), to_byte(cs[1][at]), to_byte(cs[2][at])])
        }))
    };
    dynamic.save_with_format(path, format).map_err(|e| io_error(path, e))
}

/// Writes a mask as an 8-bit grayscale image: 255 observed, 0 missing.
pub fn save_mask(mask: &ObservationMask, path: impl AsRef<Path>) -> Result<()> {
    save_image(&Picture::gray(mask.to_matrix() * 255.0), path)
}

/// Reads a mask written by [`save_mask`]. Any value other than 0 or 255 is
/// rejected.
pub fn load_mask(path: impl AsRef<Path>) -> Result<ObservationMask> {
    let path = path.as_ref();
    let picture = load_image(path)?;
    if !picture.is_gray() {
        return Err(Error::InvalidInput(format!("{}: masks must be grayscale", path.display())));
    }
    let data = &picture.channels[0];
    if let Some(v) = data.iter().find(|&&v| v != 0.0 && v != 255.0) {
        return Err(Error::InvalidInput(format!(
            "{}: mask pixels must be 0 (missing) or 255 (observed), found {v}",
            path.display()
        )));
    }
    let (n, m) = data.shape();
    Ok(ObservationMask::from_fn(n, m, |i, j| data[(i, j)] == 255.0))
}
