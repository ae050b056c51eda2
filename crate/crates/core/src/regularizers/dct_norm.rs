use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transform::{dct2, dct_matrix};
use crate::Image;

/// One scale of the multi-scale DCT norm: patch size `p`, low-frequency
/// cutoff `q` and weight `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSpec {
    pub p: usize,
    pub q: usize,
    pub lambda: f64,
}

impl ScaleSpec {
    pub fn new(p: usize, q: usize, lambda: f64) -> Result<Self> {
        let s = Self { p, q, lambda };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        if self.q < 1 || self.q > self.p {
            return Err(Error::InvalidCutoff { cutoff: self.q, patch: self.p });
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::InvalidInput(format!(
                "scale weight must be finite and nonnegative, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// Validate this scale against an image of the given size.
    pub fn check_dims(&self, dims: (usize, usize)) -> Result<()> {
        self.check()?;
        if self.p > dims.0.min(dims.1) {
            return Err(Error::ScaleTooLarge { patch: self.p, rows: dims.0, cols: dims.1 });
        }
        Ok(())
    }

    /// Largest number of windows any single pixel belongs to.
    pub fn max_overlap(&self, dims: (usize, usize)) -> usize {
        let along = |n: usize| self.p.min(n + 1 - self.p.min(n));
        along(dims.0) * along(dims.1)
    }
}

pub fn dct_norm_global(x: &Image, q: usize) -> Result<f64> {
    let (n, m) = x.shape();
    if q < 1 || q > n.min(m) {
        return Err(Error::InvalidCutoff { cutoff: q, patch: n.min(m) });
    }
    let coeffs = dct2(x)?;
    let mut total = 0.0;
    for j in 0..m {
        for i in 0..n {
            if i >= q || j >= q {
                total += coeffs[(i, j)] * coeffs[(i, j)];
            }
        }
    }
    Ok(total)
}

pub fn dct_norm_local(x: &Image, p: usize, q: usize) -> Result<f64> {
    ScaleSpec::new(p, q, 1.0)?.check_dims(x.shape())?;
    local_pass(x, p, q, None)
}

/// Weighted sum of local DCT norms over `scales`.
pub fn dct_norm_multiscale(x: &Image, scales: &[ScaleSpec]) -> Result<f64> {
    let mut total = 0.0;
    for s in scales {
        s.check_dims(x.shape())?;
        total += s.lambda * local_pass(x, s.p, s.q, None)?;
    }
    Ok(total)
}

/// Returns `sum_i lambda_i * fold(idct(mask * dct(patches)))`.
///
/// This is half the gradient of [`dct_norm_multiscale`]; callers minimizing
/// the norm itself multiply by 2.
pub fn dct_norm_gradient(x: &Image, scales: &[ScaleSpec]) -> Result<Image> {
    Ok(dct_norm_value_and_gradient(x, scales)?.1)
}

/// Multi-scale norm value together with its half-gradient, sharing one pass
/// over the patches per scale.
pub fn dct_norm_value_and_gradient(x: &Image, scales: &[ScaleSpec]) -> Result<(f64, Image)> {
    let mut grad = DMatrix::zeros(x.nrows(), x.ncols());
    let mut total = 0.0;
    for s in scales {
        s.check_dims(x.shape())?;
        if s.lambda == 0.0 {
            continue;
        }
        total += s.lambda * local_pass(x, s.p, s.q, Some((&mut grad, s.lambda)))?;
    }
    Ok((total, grad))
}

/// One sweep over every `p x p` window computing the masked DCT energy and,
/// optionally, adding `weight * C^T (S * C x C^T) C` of each window back into
/// `grad`.
///
/// The mask keeps everything outside the leading `q x q` block, so a window's
/// energy is its squared norm minus that of `C_q x C_q^T`, with `C_q` the first
/// `q` rows of `C`. The first part only needs per-pixel window counts. Windows
/// sharing a column offset share `X[:, c..c+p] * C_q^T`, and their low-pass
/// gradient contributions are gathered before one multiplication by `C_q`.
fn local_pass(x: &Image, p: usize, q: usize, mut grad: Option<(&mut Image, f64)>) -> Result<f64> {
    let (n, m) = x.shape();
    if q == p {
        return Ok(0.0);
    }
    let c = dct_matrix(p)?.row_major();
    let cq = &c[..q * p];
    let data = x.as_slice();

    let coverage = |len: usize, i: usize| i.min(len - p) + 1 - (i + 1).saturating_sub(p);
    let row_cover: Vec<f64> = (0..n).map(|i| coverage(n, i) as f64).collect();
    let mut full = 0.0;
    for j in 0..m {
        let cj = coverage(m, j) as f64;
        let column = &data[j * n..(j + 1) * n];
        let mut acc = 0.0;
        for (v, r) in column.iter().zip(&row_cover) {
            acc += r * v * v;
        }
        full += cj * acc;
        if let Some((g, weight)) = grad.as_mut() {
            let scale = *weight * cj;
            for (i, (v, r)) in column.iter().zip(&row_cover).enumerate() {
                g[(i, j)] += scale * r * v;
            }
        }
    }

    // Column-major n x q buffers.
    let mut t = vec![0.0; n * q];
    let mut h = vec![0.0; n * q];
    let mut z = vec![0.0; q * q];
    let mut low = 0.0;

    for col in 0..=(m - p) {
        // t[:, b] = sum_k X[:, col + k] * C[b, k]
        t.iter_mut().for_each(|v| *v = 0.0);
        for b in 0..q {
            let tb = &mut t[b * n..(b + 1) * n];
            for k in 0..p {
                let coef = cq[b * p + k];
                let column = &data[(col + k) * n..(col + k + 1) * n];
                for (acc, v) in tb.iter_mut().zip(column) {
                    *acc += coef * v;
                }
            }
        }
        if grad.is_some() {
            h.iter_mut().for_each(|v| *v = 0.0);
        }

        for row in 0..=(n - p) {
            // z[a, b] = sum_k C[a, k] * t[row + k, b]
            for b in 0..q {
                let tb = &t[b * n + row..b * n + row + p];
                for a in 0..q {
                    let ca = &cq[a * p..(a + 1) * p];
                    z[a * q + b] = ca.iter().zip(tb).map(|(u, v)| u * v).sum();
                }
            }
            low += z.iter().map(|v| v * v).sum::<f64>();

            if grad.is_some() {
                // h[row + k, b] += sum_a C[a, k] * z[a, b]
                for b in 0..q {
                    let hb = &mut h[b * n + row..b * n + row + p];
                    for a in 0..q {
                        let za = z[a * q + b];
                        for (acc, u) in hb.iter_mut().zip(&cq[a * p..(a + 1) * p]) {
                            *acc += za * u;
                        }
                    }
                }
            }
        }

        if let Some((g, weight)) = grad.as_mut() {
            let weight = *weight;
            let gs = g.as_mut_slice();
            for k in 0..p {
                let out = &mut gs[(col + k) * n..(col + k + 1) * n];
                for b in 0..q {
                    let coef = weight * cq[b * p + k];
                    for (acc, v) in out.iter_mut().zip(&h[b * n..(b + 1) * n]) {
                        *acc -= coef * v;
                    }
                }
            }
        }
    }
    Ok((full - low).max(0.0))
}
