//! Smoothness penalties and their exact gradients.
//!
//! Every penalty here is a squared or absolute measure of high-frequency
//! content. The DCT norms and linear TV are quadratic forms, so their
//! gradients are linear operators in the image.

mod coupling;
mod dct_norm;
mod patch_identity;
mod tv;

pub use coupling::{freq_coupling_gradient, freq_coupling_norm, ChannelMask};
pub use dct_norm::{
    dct_norm_global, dct_norm_gradient, dct_norm_local, dct_norm_multiscale, dct_norm_value_and_gradient, ScaleSpec,
};
pub use patch_identity::{theorem1_operators, theorem1_patch_identity_terms};
pub use tv::{tv_linear_gradient, tv_norm_aniso, tv_norm_iso, tv_norm_linear};
