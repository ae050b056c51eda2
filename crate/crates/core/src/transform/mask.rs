use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// High-pass selection mask for a `p x p` coefficient block.
///
/// Entry `(i, j)` is 0 inside the `q x q` low-frequency corner (`i < q` and
/// `j < q`) and 1 everywhere else, so the masked coefficients are exactly the
/// ones the DCT norm penalizes.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMask {
    scale: usize,
    cutoff: usize,
    entries: DMatrix<f64>,
}

impl FrequencyMask {
    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    #[inline]
    pub fn is_penalized(&self, i: usize, j: usize) -> bool {
        i >= self.cutoff || j >= self.cutoff
    }
}

pub fn build_freq_mask(p: usize, q: usize) -> Result<FrequencyMask> {
    if p == 0 {
        return Err(Error::InvalidDimension("mask scale must be at least 1".into()));
    }
    if q < 1 || q > p {
        return Err(Error::InvalidCutoff { cutoff: q, patch: p });
    }
    let entries = DMatrix::from_fn(p, p, |i, j| if i < q && j < q { 0.0 } else { 1.0 });
    Ok(FrequencyMask { scale: p, cutoff: q, entries })
}
