//! Singular-value machinery: nuclear and truncated nuclear norms and their
//! proximal operators.

use nalgebra::{DMatrix, DVector, SVD};

use crate::error::{Error, Result};

/// Thin SVD `X = U diag(sigma) V^T` with `sigma` sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: DMatrix<f64>,
    pub sigma: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl SvdFactors {
    pub fn rank_bound(&self) -> usize {
        self.sigma.len()
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        reconstruct_with(&self.u, &self.sigma, &self.v)
    }
}

fn reconstruct_with(u: &DMatrix<f64>, sigma: &DVector<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
    let mut scaled = u.clone();
    for (k, s) in sigma.iter().enumerate() {
        scaled.column_mut(k).scale_mut(*s);
    }
    scaled * v.transpose()
}

pub fn svd(x: &DMatrix<f64>) -> Result<SvdFactors> {
    if x.is_empty() {
        return Err(Error::InvalidDimension("cannot decompose an empty matrix".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let decomposition = SVD::new(x.clone(), true, true);
    let (Some(u), Some(v_t)) = (decomposition.u, decomposition.v_t) else {
        unreachable!("SVD requested with both factors");
    };
    Ok(SvdFactors { u, sigma: decomposition.singular_values, v: v_t.transpose() })
}

pub fn nuclear_norm(x: &DMatrix<f64>) -> Result<f64> {
    Ok(svd(x)?.sigma.sum())
}

fn check_rank(r: usize, x: &DMatrix<f64>) -> Result<()> {
    let max = x.nrows().min(x.ncols());
    if r > max {
        return Err(Error::InvalidRank { rank: r, max });
    }
    Ok(())
}

/// Sum of all but the `r` largest singular values.
pub fn truncated_nuclear_norm(x: &DMatrix<f64>, r: usize) -> Result<f64> {
    check_rank(r, x)?;
    Ok(svd(x)?.sigma.iter().skip(r).sum())
}

/// Proximal operator of `tau * ||.||_r`: keeps the top `r` singular values and
/// soft-thresholds the rest by `tau`.
pub fn prox_truncated_nuclear(x: &DMatrix<f64>, r: usize, tau: f64) -> Result<DMatrix<f64>> {
    Ok(prox_with_spectrum(x, r, tau)?.0)
}

/// Singular value thresholding: soft-thresholds every singular value.
pub fn svt_shrink(x: &DMatrix<f64>, tau: f64) -> Result<DMatrix<f64>> {
    prox_truncated_nuclear(x, 0, tau)
}

/// [`prox_truncated_nuclear`], also returning the singular values of the
/// result so callers can evaluate `||result||_r` without another SVD.
pub fn prox_with_spectrum(x: &DMatrix<f64>, r: usize, tau: f64) -> Result<(DMatrix<f64>, DVector<f64>)> {
    check_rank(r, x)?;
    if !(tau >= 0.0) || !tau.is_finite() {
        return Err(Error::InvalidInput(format!("threshold must be finite and nonnegative, got {tau}")));
    }
    let mut f = svd(x)?;
    if tau == 0.0 || r == f.sigma.len() {
        return Ok((x.clone(), f.sigma));
    }
    for s in f.sigma.iter_mut().skip(r) {
        *s = (*s - tau).max(0.0);
    }
    // Only singular vectors with nonzero weight contribute.
    let keep = f.sigma.iter().take_while(|s| **s > 0.0).count();
    let out = reconstruct_with(
        &f.u.columns(0, keep).into_owned(),
        &f.sigma.rows(0, keep).into_owned(),
        &f.v.columns(0, keep).into_owned(),
    );
    Ok((out, f.sigma))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag321() -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_row_slice(&[3.0, 2.0, 1.0]))
    }

    #[test]
    fn identity_and_diagonal_spectra() {
        let s = svd(&DMatrix::identity(3, 3)).unwrap();
        assert!((s.sigma.clone() - DVector::from_element(3, 1.0)).amax() < 1e-14);
        let s = svd(&diag321()).unwrap();
        assert!((s.sigma - DVector::from_row_slice(&[3.0, 2.0, 1.0])).amax() < 1e-14);
    }

    #[test]
    fn rectangular_reconstruction() {
        let x = DMatrix::from_fn(6, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0 + 0.1 * i as f64);
        let f = svd(&x).unwrap();
        assert_eq!(f.u.shape(), (6, 4));
        assert_eq!(f.v.shape(), (4, 4));
        assert!((f.reconstruct() - &x).norm() < 1e-8 * x.norm());
        assert!(f.sigma.as_slice().windows(2).all(|w| w[0] >= w[1]));
        let wide = x.transpose();
        let f = svd(&wide).unwrap();
        assert!((f.reconstruct() - &wide).norm() < 1e-8 * wide.norm());
    }

    #[test]
    fn non_finite_rejected() {
        let mut x = DMatrix::identity(2, 2);
        x[(0, 1)] = f64::NAN;
        assert!(matches!(svd(&x), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn norms() {
        assert!((nuclear_norm(&DMatrix::identity(3, 3)).unwrap() - 3.0).abs() < 1e-12);
        assert!((nuclear_norm(&diag321()).unwrap() - 6.0).abs() < 1e-12);
        let u = DVector::from_row_slice(&[0.6, 0.8]);
        let v = DVector::from_row_slice(&[0.0, 1.0, 0.0]);
        assert!((nuclear_norm(&(u * v.transpose())).unwrap() - 1.0).abs() < 1e-12);
        assert!((truncated_nuclear_norm(&diag321(), 1).unwrap() - 3.0).abs() < 1e-12);
        assert!((truncated_nuclear_norm(&diag321(), 0).unwrap() - 6.0).abs() < 1e-12);
        assert!(truncated_nuclear_norm(&diag321(), 3).unwrap().abs() < 1e-12);
        assert!(matches!(truncated_nuclear_norm(&diag321(), 4), Err(Error::InvalidRank { .. })));
    }

    #[test]
    fn prox_cases() {
        let x = diag321();
        assert!((prox_truncated_nuclear(&x, 1, 0.0).unwrap() - &x).amax() < 1e-12);
        let expected = DMatrix::from_diagonal(&DVector::from_row_slice(&[3.0, 0.5, 0.0]));
        assert!((prox_truncated_nuclear(&x, 1, 1.5).unwrap() - expected).amax() < 1e-12);
        assert!((prox_truncated_nuclear(&x, 3, 10.0).unwrap() - &x).amax() < 1e-12);
    }

    #[test]
    fn shrink_cases() {
        let x = diag321();
        let expected = DMatrix::from_diagonal(&DVector::from_row_slice(&[2.0, 1.0, 0.0]));
        assert!((svt_shrink(&x, 1.0).unwrap() - expected).amax() < 1e-12);
        assert!((svt_shrink(&x, 0.0).unwrap() - &x).amax() < 1e-12);
        assert_eq!(svt_shrink(&x, 3.0).unwrap(), DMatrix::zeros(3, 3));
        assert!(svt_shrink(&x, -1.0).is_err());
    }
}
