#![allow(dead_code)]

use dctnorm::solver::{ObservationMask, ObservedImage};
use dctnorm::Image;
use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in `[lo, hi)`.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize, lo: f64, hi: f64) -> Image {
    DMatrix::from_fn(n, m, |_, _| rng.random_range(lo..hi))
}

/// Mask with exactly `observed` observed pixels, chosen uniformly.
pub fn random_mask(rng: &mut ChaCha8Rng, n: usize, m: usize, observed: usize) -> ObservationMask {
    let mut mask = ObservationMask::none(n, m);
    for k in sample(rng, n * m, observed) {
        mask.set(k % n, k / n, true);
    }
    mask
}

pub fn observe(truth: &Image, mask: &ObservationMask) -> ObservedImage {
    ObservedImage::new(mask.project(truth), mask.clone()).unwrap()
}

pub fn max_abs_diff(a: &Image, b: &Image) -> f64 {
    (a - b).amax()
}

/// Central differences of `f` at `x` along every pixel.
pub fn finite_difference(f: impl Fn(&Image) -> f64, x: &Image, h: f64) -> Image {
    let mut grad = Image::zeros(x.nrows(), x.ncols());
    let mut probe = x.clone();
    for k in 0..x.len() {
        let v = probe[k];
        probe[k] = v + h;
        let up = f(&probe);
        probe[k] = v - h;
        let down = f(&probe);
        probe[k] = v;
        grad[k] = (up - down) / (2.0 * h);
    }
    grad
}

pub fn relative_error(a: &Image, b: &Image) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Exact minimizer of `x^T A x` over `x` with `x_Omega = m_Omega`, where `A`
/// is given as a dense `NM x NM` matrix acting on column-major pixels.
pub fn constrained_quadratic_minimizer(a: &DMatrix<f64>, obs: &ObservedImage) -> Image {
    let (n, m) = obs.dims();
    let flags = obs.mask().flags();
    let free: Vec<usize> = (0..n * m).filter(|&k| !flags[k]).collect();
    let fixed: Vec<usize> = (0..n * m).filter(|&k| flags[k]).collect();
    let a_ff = DMatrix::from_fn(free.len(), free.len(), |r, c| a[(free[r], free[c])]);
    let a_fo = DMatrix::from_fn(free.len(), fixed.len(), |r, c| a[(free[r], fixed[c])]);
    let m_o = nalgebra::DVector::from_iterator(fixed.len(), fixed.iter().map(|&k| obs.data()[k]));
    let rhs = -(a_fo * m_o);
    let x_f = a_ff.clone().lu().solve(&rhs).expect("free block is nonsingular");
    let mut x = obs.data().clone();
    for (r, &k) in free.iter().enumerate() {
        x[k] = x_f[r];
    }
    x
}

/// Dense matrix of a quadratic form given by its value on images.
pub fn quadratic_form_matrix(q: impl Fn(&Image) -> f64, n: usize, m: usize) -> DMatrix<f64> {
    let size = n * m;
    let basis = |k: usize| {
        let mut e = Image::zeros(n, m);
        e[k] = 1.0;
        e
    };
    let diag: Vec<f64> = (0..size).map(|k| q(&basis(k))).collect();
    DMatrix::from_fn(size, size, |r, c| {
        if r == c {
            diag[r]
        } else {
            let mut e = basis(r);
            e[c] = 1.0;
            0.5 * (q(&e) - diag[r] - diag[c])
        }
    })
}
