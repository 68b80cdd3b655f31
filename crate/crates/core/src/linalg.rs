//! Dense matrix exponential for the small truncated generators.

use ndarray::Array2;
use num_complex::Complex64 as C64;

fn one_norm(a: &Array2<C64>) -> f64 {
    a.columns().into_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `exp(A)` by scaling and squaring with a Taylor core.
///
/// `A` is scaled by `2^-s` until its 1-norm is at most 1/2; the Taylor
/// series is summed until the next term is below machine precision
/// relative to the partial sum, then squared `s` times.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    let eye = Array2::<C64>::eye(n);
    if n == 0 {
        return eye;
    }
    let norm = one_norm(a);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.mapv(|z| z * 0.5f64.powi(s));

    let mut result = eye.clone();
    let mut term = eye;
    for k in 1..40 {
        term = term.dot(&scaled).mapv(|z| z / k as f64);
        result = result + &term;
        if one_norm(&term) < 1e-18 * one_norm(&result) {
            break;
        }
    }
    for _ in 0..s {
        result = result.dot(&result);
    }
    result
}
