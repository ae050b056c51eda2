//! The 2x2 operators relating the `p = 2, q = 1` DCT norm to linear TV.
//!
//! Patches are vectorized column-major: `[x00, x10, x01, x11]`.

use nalgebra::{DMatrix, DVector};

const E_VECTORS: [[f64; 4]; 3] = [[1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];

const D_VECTORS: [[f64; 4]; 4] =
    [[1.0, 0.0, -1.0, 0.0], [1.0, -1.0, 0.0, 0.0], [0.0, 1.0, 0.0, -1.0], [0.0, 0.0, 1.0, -1.0]];

fn twice_sum_of_outer(vectors: &[[f64; 4]]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(4, 4);
    for v in vectors {
        let v = DVector::from_row_slice(v);
        out += 2.0 * &v * v.transpose();
    }
    out
}

/// `(E, D)` with `E = 2 sum e_i e_i^T` (DCT side) and `D = 2 sum d_i d_i^T`
/// (linear TV side). `E x` and `D x` are the gradients of `4 ||x||_DCT^{2,1}`
/// and `||x||_LTV` for a single patch.
pub fn theorem1_operators() -> (DMatrix<f64>, DMatrix<f64>) {
    (twice_sum_of_outer(&E_VECTORS), twice_sum_of_outer(&D_VECTORS))
}

/// The three projections `e_i^T x` of a column-major 2x2 patch. Their squares
/// sum to four times the patch's DCT norm.
pub fn theorem1_patch_identity_terms(patch: &[f64; 4]) -> [f64; 3] {
    let dot = |e: &[f64; 4]| e.iter().zip(patch).map(|(a, b)| a * b).sum::<f64>();
    [dot(&E_VECTORS[0]), dot(&E_VECTORS[1]), dot(&E_VECTORS[2])]
}
