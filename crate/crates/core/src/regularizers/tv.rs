//! Total variation family. Differences are forward differences taken only
//! where both pixels exist; there is no wraparound or reflection.

use nalgebra::DMatrix;

use crate::Image;

/// Visit each pixel with its vertical and horizontal forward differences
/// (`None` on the last row / column).
fn for_each_difference(x: &Image, mut f: impl FnMut(Option<f64>, Option<f64>)) {
    let (n, m) = x.shape();
    for j in 0..m {
        for i in 0..n {
            let down = (i + 1 < n).then(|| x[(i + 1, j)] - x[(i, j)]);
            let right = (j + 1 < m).then(|| x[(i, j + 1)] - x[(i, j)]);
            f(down, right);
        }
    }
}

pub fn tv_norm_iso(x: &Image) -> f64 {
    let mut total = 0.0;
    for_each_difference(x, |d, r| {
        let sq = d.map_or(0.0, |v| v * v) + r.map_or(0.0, |v| v * v);
        total += sq.sqrt();
    });
    total
}

pub fn tv_norm_aniso(x: &Image) -> f64 {
    let mut total = 0.0;
    for_each_difference(x, |d, r| {
        total += d.map_or(0.0, f64::abs) + r.map_or(0.0, f64::abs);
    });
    total
}

/// Sum of squared forward differences.
pub fn tv_norm_linear(x: &Image) -> f64 {
    let mut total = 0.0;
    for_each_difference(x, |d, r| {
        total += d.map_or(0.0, |v| v * v) + r.map_or(0.0, |v| v * v);
    });
    total
}

pub fn tv_linear_gradient(x: &Image) -> Image {
    let (n, m) = x.shape();
    let mut g = DMatrix::zeros(n, m);
    for j in 0..m {
        for i in 0..n {
            if i + 1 < n {
                let d = 2.0 * (x[(i, j)] - x[(i + 1, j)]);
                g[(i, j)] += d;
                g[(i + 1, j)] -= d;
            }
            if j + 1 < m {
                let d = 2.0 * (x[(i, j)] - x[(i, j + 1)]);
                g[(i, j)] += d;
                g[(i, j + 1)] -= d;
            }
        }
    }
    g
}
