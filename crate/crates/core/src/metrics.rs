//! Image quality criteria: PSNR and Gaussian-window SSIM on the 0..=255 scale.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::Image;

pub const PEAK: f64 = 255.0;

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// Quality of one recovered image against its ground truth.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QualityReport {
    pub method: String,
    pub missing_ratio: f64,
    /// `f64::INFINITY` when the images are identical.
    pub psnr_db: f64,
    pub ssim: f64,
    pub seconds: f64,
}

fn same_shape(x: &Image, y: &Image) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::InvalidDimension(format!("images differ in size: {:?} vs {:?}", x.shape(), y.shape())));
    }
    if x.is_empty() {
        return Err(Error::InvalidDimension("empty image".into()));
    }
    Ok(())
}

pub fn mse(x: &Image, y: &Image) -> Result<f64> {
    same_shape(x, y)?;
    Ok((x - y).norm_squared() / x.len() as f64)
}

/// `10 log10(255^2 / MSE)` over all pixels; identical images give `+inf`.
pub fn psnr(x: &Image, y: &Image) -> Result<f64> {
    let err = mse(x, y)?;
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / err).log10())
}

fn gaussian_taps() -> [f64; SSIM_WINDOW] {
    let mut taps = [0.0; SSIM_WINDOW];
    let half = (SSIM_WINDOW / 2) as f64;
    for (k, t) in taps.iter_mut().enumerate() {
        let d = k as f64 - half;
        *t = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);
    taps
}

/// Separable "valid" Gaussian filter: one output per fully contained window.
fn filter_valid(x: &Image, taps: &[f64; SSIM_WINDOW]) -> Image {
    let (n, m) = x.shape();
    let w = SSIM_WINDOW;
    let (on, om) = (n - w + 1, m - w + 1);
    let mut rows = DMatrix::<f64>::zeros(on, m);
    for j in 0..m {
        for i in 0..on {
            rows[(i, j)] = (0..w).map(|k| taps[k] * x[(i + k, j)]).sum();
        }
    }
    let mut out = DMatrix::<f64>::zeros(on, om);
    for j in 0..om {
        for i in 0..on {
            out[(i, j)] = (0..w).map(|k| taps[k] * rows[(i, j + k)]).sum();
        }
    }
    out
}

/// Mean SSIM over all 11x11 windows (Gaussian weights, sigma 1.5).
pub fn ssim(x: &Image, y: &Image) -> Result<f64> {
    same_shape(x, y)?;
    let (n, m) = x.shape();
    if n.min(m) < SSIM_WINDOW {
        return Err(Error::InvalidDimension(format!(
            "SSIM needs at least {SSIM_WINDOW}x{SSIM_WINDOW} pixels, got {n}x{m}"
        )));
    }
    let taps = gaussian_taps();
    let c1 = (SSIM_K1 * PEAK).powi(2);
    let c2 = (SSIM_K2 * PEAK).powi(2);

    let mu_x = filter_valid(x, &taps);
    let mu_y = filter_valid(y, &taps);
    let xx = filter_valid(&x.component_mul(x), &taps);
    let yy = filter_valid(&y.component_mul(y), &taps);
    let xy = filter_valid(&x.component_mul(y), &taps);

    let mut total = 0.0;
    for k in 0..mu_x.len() {
        let (mx, my) = (mu_x[k], mu_y[k]);
        let vx = xx[k] - mx * mx;
        let vy = yy[k] - my * my;
        let cov = xy[k] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
    Ok(total / mu_x.len() as f64)
}
