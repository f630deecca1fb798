//! Minimum-norm linear least squares.

use nalgebra::{DMatrix, DVector};

/// Singular values below `RCOND · σ_max` are treated as zero.
pub const RCOND: f64 = 1e-12;

/// Minimum-norm minimizer of `‖Aω − b‖₂` via the singular value
/// decomposition.
pub fn least_squares_weights(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    least_squares_rcond(a, b, RCOND)
}

pub fn least_squares_rcond(a: &DMatrix<f64>, b: &DVector<f64>, rcond: f64) -> DVector<f64> {
    if a.ncols() == 0 {
        return DVector::zeros(0);
    }
    if a.nrows() == 0 {
        return DVector::zeros(a.ncols());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if !(smax > 0.0) {
        return DVector::zeros(a.ncols());
    }
    svd.solve(b, rcond * smax)
        .expect("singular vectors were requested")
}
