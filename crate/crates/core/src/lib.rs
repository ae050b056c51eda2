//! Image recovery under extreme missing-pixel ratios with multi-scale DCT-norm
//! smoothness priors and truncated nuclear norm minimization.
//!
//! Images are `DMatrix<f64>` with intensities on the 0..=255 scale; row `i`
//! is the vertical position and column `j` the horizontal one.

pub mod error;
pub mod harness;
pub mod lowrank;
pub mod metrics;
pub mod regularizers;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};

/// A single-channel image.
pub type Image = nalgebra::DMatrix<f64>;

/// `target += a * x`, entrywise.
pub(crate) fn add_scaled(target: &mut Image, a: f64, x: &Image) {
    debug_assert_eq!(target.shape(), x.shape());
    for (t, v) in target.iter_mut().zip(x.iter()) {
        *t += a * v;
    }
}
