use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::transform::{dct2, idct2};
use crate::Image;

/// Mask removing only the DC coefficient from a full-image DCT.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMask {
    entries: DMatrix<f64>,
}

impl ChannelMask {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension("channel mask must be non-empty".into()));
        }
        let mut entries = DMatrix::from_element(rows, cols, 1.0);
        entries[(0, 0)] = 0.0;
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn apply(&self, coeffs: &mut DMatrix<f64>) {
        coeffs.component_mul_assign(&self.entries);
    }
}

fn check_channels(channels: &[Image]) -> Result<(usize, usize)> {
    let first = channels.first().ok_or_else(|| Error::InvalidDimension("no channels given".into()))?;
    let dims = first.shape();
    if let Some(bad) = channels.iter().find(|c| c.shape() != dims) {
        return Err(Error::InvalidDimension(format!("channel sizes differ: {:?} vs {:?}", dims, bad.shape())));
    }
    Ok(dims)
}

/// `sum_c 1/4 sum_{i != c} || S^c * dct2(X_c - X_i) ||_F^2`, over ordered
/// channel pairs.
pub fn freq_coupling_norm(channels: &[Image]) -> Result<f64> {
    let (n, m) = check_channels(channels)?;
    let mask = ChannelMask::new(n, m)?;
    let mut total = 0.0;
    for (c, xc) in channels.iter().enumerate() {
        for (i, xi) in channels.iter().enumerate() {
            if i == c {
                continue;
            }
            let mut coeffs = dct2(&(xc - xi))?;
            mask.apply(&mut coeffs);
            total += 0.25 * coeffs.norm_squared();
        }
    }
    Ok(total)
}

/// `sum_{i != c} idct2(S^c * dct2(X_c - X_i))`, the derivative of
/// [`freq_coupling_norm`] with respect to channel `c`.
pub fn freq_coupling_gradient(channels: &[Image], c: usize) -> Result<Image> {
    let (n, m) = check_channels(channels)?;
    if c >= channels.len() {
        return Err(Error::InvalidInput(format!("channel index {c} out of range for {} channels", channels.len())));
    }
    let mask = ChannelMask::new(n, m)?;
    let mut diff_sum = DMatrix::zeros(n, m);
    for (i, xi) in channels.iter().enumerate() {
        if i != c {
            diff_sum += &channels[c] - xi;
        }
    }
    // The map is linear, so transform the summed differences once.
    let mut coeffs = dct2(&diff_sum)?;
    mask.apply(&mut coeffs);
    idct2(&coeffs)
}
