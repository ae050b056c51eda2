use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::Image;

/// The set of observed pixel coordinates of an `N x M` image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObservationMask {
    rows: usize,
    cols: usize,
    /// Column-major, matching `DMatrix` storage.
    observed: Vec<bool>,
}

impl ObservationMask {
    pub fn all(rows: usize, cols: usize) -> Self {
        Self { rows, cols, observed: vec![true; rows * cols] }
    }

    pub fn none(rows: usize, cols: usize) -> Self {
        Self { rows, cols, observed: vec![false; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut observed = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                observed.push(f(i, j));
            }
        }
        Self { rows, cols, observed }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[i + j * self.rows]
    }

    pub fn set(&mut self, i: usize, j: usize, observed: bool) {
        self.observed[i + j * self.rows] = observed;
    }

    /// Observed flags in column-major order.
    pub fn flags(&self) -> &[bool] {
        &self.observed
    }

    pub fn observed_count(&self) -> usize {
        self.observed.iter().filter(|&&o| o).count()
    }

    pub fn missing_count(&self) -> usize {
        self.observed.len() - self.observed_count()
    }

    pub fn observed_fraction(&self) -> f64 {
        if self.observed.is_empty() {
            return 0.0;
        }
        self.observed_count() as f64 / self.observed.len() as f64
    }

    /// `P_Omega(x)`: zero every unobserved entry.
    pub fn project(&self, x: &Image) -> Image {
        let mut out = x.clone();
        self.project_in_place(&mut out);
        out
    }

    pub fn project_in_place(&self, x: &mut Image) {
        for (v, &o) in x.iter_mut().zip(&self.observed) {
            if !o {
                *v = 0.0;
            }
        }
    }

    /// Copy observed entries of `source` into `target`.
    pub fn impose(&self, target: &mut Image, source: &Image) {
        for ((t, s), &o) in target.iter_mut().zip(source.iter()).zip(&self.observed) {
            if o {
                *t = *s;
            }
        }
    }

    pub fn to_matrix(&self) -> Image {
        DMatrix::from_iterator(self.rows, self.cols, self.observed.iter().map(|&o| if o { 1.0 } else { 0.0 }))
    }

    pub(crate) fn check_dims(&self, dims: (usize, usize)) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::InvalidDimension(format!("mask is {:?} but image is {:?}", self.dims(), dims)));
        }
        Ok(())
    }
}

/// A partially observed image `M` with its mask; unobserved entries hold 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedImage {
    data: Image,
    mask: ObservationMask,
}

impl ObservedImage {
    pub fn new(data: Image, mask: ObservationMask) -> Result<Self> {
        mask.check_dims(data.shape())?;
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("observed image has non-finite pixels".into()));
        }
        let data = mask.project(&data);
        Ok(Self { data, mask })
    }

    pub fn data(&self) -> &Image {
        &self.data
    }

    pub fn mask(&self) -> &ObservationMask {
        &self.mask
    }

    pub fn dims(&self) -> (usize, usize) {
        self.data.shape()
    }

    pub(crate) fn with_data(&self, data: Image) -> Self {
        Self { data, mask: self.mask.clone() }
    }
}
