use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Orthonormal DCT-II transformation matrix of order `n`.
///
/// Row `i` holds the `i`-th cosine basis vector sampled at half-integer
/// positions, so `C * x` maps a length-`n` signal to its coefficients and
/// `C^T` maps back.
#[derive(Debug, Clone, PartialEq)]
pub struct DctMatrix {
    entries: DMatrix<f64>,
}

impl DctMatrix {
    pub fn order(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Entry `(i, j)` as `i * n + j`, row-major.
    pub(crate) fn row_major(&self) -> Vec<f64> {
        let n = self.order();
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.entries[(i, j)];
            }
        }
        out
    }
}

pub fn build_dct_matrix(n: usize) -> Result<DctMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("DCT order must be at least 1".into()));
    }
    let nf = n as f64;
    let dc = (1.0 / nf).sqrt();
    let ac = (2.0 / nf).sqrt();
    let entries = DMatrix::from_fn(n, n, |i, j| {
        let alpha = if i == 0 { dc } else { ac };
        alpha * ((j as f64 + 0.5) * PI * i as f64 / nf).cos()
    });
    Ok(DctMatrix { entries })
}

/// Shared, lazily built DCT matrix of order `n`.
///
/// Solvers request the same handful of orders on every iteration, so the
/// matrices are built once per process.
pub fn dct_matrix(n: usize) -> Result<Arc<DctMatrix>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<DctMatrix>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(m) = cache.lock().expect("dct cache poisoned").get(&n) {
        return Ok(Arc::clone(m));
    }
    let built = Arc::new(build_dct_matrix(n)?);
    let mut guard = cache.lock().expect("dct cache poisoned");
    Ok(Arc::clone(guard.entry(n).or_insert(built)))
}

fn check_non_empty(x: &DMatrix<f64>) -> Result<()> {
    if x.is_empty() {
        return Err(Error::InvalidDimension(format!("cannot transform an empty {}x{} matrix", x.nrows(), x.ncols())));
    }
    Ok(())
}

/// Forward 2D DCT `C_N * X * C_M^T`.
pub fn dct2(x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_non_empty(x)?;
    let rows = dct_matrix(x.nrows())?;
    let cols = dct_matrix(x.ncols())?;
    Ok(rows.matrix() * x * cols.matrix().transpose())
}

/// Inverse 2D DCT `C_N^T * Coeffs * C_M`.
pub fn idct2(coeffs: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_non_empty(coeffs)?;
    let rows = dct_matrix(coeffs.nrows())?;
    let cols = dct_matrix(coeffs.ncols())?;
    Ok(rows.matrix().transpose() * coeffs * cols.matrix())
}
