use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// All overlapping `p x p` windows of an `N x M` image, one per column.
///
/// Columns are ordered row-major over the window's top-left corner, so column
/// `l` corresponds to corner `(l / (M - p + 1), l % (M - p + 1))`. Each column
/// is the column-major vectorization of its window.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchStack {
    patch_size: usize,
    source_dims: (usize, usize),
    columns: DMatrix<f64>,
}

impl PatchStack {
    pub fn new(patch_size: usize, source_dims: (usize, usize), columns: DMatrix<f64>) -> Result<Self> {
        let (n, m) = source_dims;
        if patch_size == 0 || patch_size > n.min(m) {
            return Err(Error::ScaleTooLarge { patch: patch_size, rows: n, cols: m });
        }
        let expected = (patch_size * patch_size, window_count(n, m, patch_size));
        if columns.shape() != expected {
            return Err(Error::InvalidDimension(format!(
                "patch stack is {:?}, expected {:?} for p={patch_size} on {n}x{m}",
                columns.shape(),
                expected
            )));
        }
        Ok(Self { patch_size, source_dims, columns })
    }

    pub fn patch_size(&self) -> usize {
        self.patch_size
    }

    pub fn source_dims(&self) -> (usize, usize) {
        self.source_dims
    }

    pub fn columns(&self) -> &DMatrix<f64> {
        &self.columns
    }

    pub fn len(&self) -> usize {
        self.columns.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.ncols() == 0
    }

    /// Top-left corner of the window stored in column `l`.
    pub fn corner(&self, l: usize) -> (usize, usize) {
        let across = self.source_dims.1 - self.patch_size + 1;
        (l / across, l % across)
    }

    /// Column `l` reshaped back into a `p x p` window.
    pub fn patch(&self, l: usize) -> DMatrix<f64> {
        let p = self.patch_size;
        DMatrix::from_column_slice(p, p, self.columns.column(l).as_slice())
    }
}

pub(crate) fn window_count(n: usize, m: usize, p: usize) -> usize {
    (n - p + 1) * (m - p + 1)
}

pub fn extract_patches(x: &DMatrix<f64>, p: usize) -> Result<PatchStack> {
    let (n, m) = x.shape();
    if p == 0 || p > n.min(m) {
        return Err(Error::ScaleTooLarge { patch: p, rows: n, cols: m });
    }
    let across = m - p + 1;
    let count = window_count(n, m, p);
    let mut columns = DMatrix::zeros(p * p, count);
    for l in 0..count {
        let (r, c) = (l / across, l % across);
        let mut col = columns.column_mut(l);
        for j in 0..p {
            for i in 0..p {
                col[i + j * p] = x[(r + i, c + j)];
            }
        }
    }
    Ok(PatchStack { patch_size: p, source_dims: (n, m), columns })
}

/// Adjoint of [`extract_patches`]: every patch entry is added back onto its
/// source pixel, so overlapping windows accumulate.
pub fn fold_patches(stack: &PatchStack, dims: (usize, usize)) -> Result<DMatrix<f64>> {
    if dims != stack.source_dims {
        return Err(Error::InvalidDimension(format!(
            "patch stack was extracted from {:?}, cannot fold into {:?}",
            stack.source_dims, dims
        )));
    }
    let p = stack.patch_size;
    let mut out = DMatrix::zeros(dims.0, dims.1);
    for l in 0..stack.len() {
        let (r, c) = stack.corner(l);
        let col = stack.columns.column(l);
        for j in 0..p {
            for i in 0..p {
                out[(r + i, c + j)] += col[i + j * p];
            }
        }
    }
    Ok(out)
}
