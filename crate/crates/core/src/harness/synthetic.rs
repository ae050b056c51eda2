//! Seeded smooth test images for when no corpus is at hand.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::transform::dct_matrix;
use crate::Image;

const LOW: f64 = 20.0;
const HIGH: f64 = 235.0;

/// Five random low-frequency DCT basis images (both indices below 4) plus a
/// rank-2 image built from smooth cosine profiles, mapped affinely onto
/// `[20, 235]`.
pub fn smooth_image(dims: (usize, usize), seed: u64) -> Image {
    let (n, m) = dims;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cn = dct_matrix(n).expect("positive size");
    let cm = dct_matrix(m).expect("positive size");

    let mut x = Image::zeros(n, m);
    for _ in 0..5 {
        let u = rng.random_range(0..4.min(n));
        let v = rng.random_range(0..4.min(m));
        let amp = rng.random_range(-1.0..1.0);
        let basis = cn.matrix().row(u).transpose() * cm.matrix().row(v);
        x += basis * (amp * ((n * m) as f64).sqrt());
    }
    for _ in 0..2 {
        let a = profile(&mut rng, n);
        let b = profile(&mut rng, m);
        x += &a * b.transpose();
    }

    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        return Image::from_element(n, m, 0.5 * (LOW + HIGH));
    }
    x.map(|v| LOW + (HIGH - LOW) * (v - lo) / (hi - lo))
}

/// A piecewise smooth scene: a smooth background from [`smooth_image`] with
/// soft-edged ellipses and rectangles on top, some of them carrying a
/// sinusoidal grating, mapped affinely onto `[20, 235]`.
pub fn scene_image(dims: (usize, usize), seed: u64) -> Image {
    let (n, m) = dims;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ce0_e5ce);
    let mut x = smooth_image(dims, seed) * 0.5;
    let size = n.min(m) as f64;
    let shapes = rng.random_range(4..8);
    for _ in 0..shapes {
        let ci = rng.random_range(0.0..n as f64);
        let cj = rng.random_range(0.0..m as f64);
        let ri = rng.random_range(0.08..0.3) * size;
        let rj = rng.random_range(0.08..0.3) * size;
        let level = rng.random_range(-120.0..120.0);
        let round = rng.random_bool(0.5);
        let grating = if rng.random_bool(0.5) {
            let period = rng.random_range(6.0..14.0);
            let angle = rng.random_range(0.0..PI);
            Some((2.0 * PI / period, angle.cos(), angle.sin(), rng.random_range(10.0..30.0)))
        } else {
            None
        };
        for j in 0..m {
            for i in 0..n {
                let (di, dj) = ((i as f64 - ci) / ri, (j as f64 - cj) / rj);
                // Signed distance in pixels to the boundary, roughly.
                let inside = if round {
                    (1.0 - (di * di + dj * dj).sqrt()) * ri.min(rj)
                } else {
                    (1.0 - di.abs()).min(1.0 - dj.abs()) * ri.min(rj)
                };
                let weight = 1.0 / (1.0 + (-inside / 0.75).exp());
                if weight < 1e-6 {
                    continue;
                }
                let mut v = level;
                if let Some((w, ca, sa, amp)) = grating {
                    v += amp * (w * (i as f64 * ca + j as f64 * sa)).sin();
                }
                x[(i, j)] += weight * v;
            }
        }
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi - lo < 1e-12 {
        return Image::from_element(n, m, 0.5 * (LOW + HIGH));
    }
    x.map(|v| LOW + (HIGH - LOW) * (v - lo) / (hi - lo))
}

fn profile(rng: &mut ChaCha8Rng, len: usize) -> nalgebra::DVector<f64> {
    let terms: Vec<(f64, f64, f64)> = (0..3)
        .map(|_| (rng.random_range(0.5..3.0), rng.random_range(0.0..2.0 * PI), rng.random_range(-1.0..1.0)))
        .collect();
    nalgebra::DVector::from_fn(len, |i, _| {
        let t = i as f64 / len as f64;
        terms.iter().map(|(f, phase, amp)| amp * (2.0 * PI * f * t + phase).cos()).sum()
    })
}
