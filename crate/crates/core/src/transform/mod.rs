//! Orthonormal DCT-II matrices, separable 2D transforms, overlapping patch
//! stacks and frequency selection masks.

mod dct;
mod mask;
mod patches;

pub use dct::{build_dct_matrix, dct2, dct_matrix, idct2, DctMatrix};
pub use mask::{build_freq_mask, FrequencyMask};
pub use patches::{extract_patches, fold_patches, PatchStack};
