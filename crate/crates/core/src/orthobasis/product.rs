use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Scalar};
use serde::Serialize;

/// Constant of the product bound: if `|A_ij| <= c1 e^{-alpha|i-j|}` and
/// `|B_ij| <= c2 e^{-alpha|i-j|}`, then `|[AB]_ij| <= c e^{-alpha'|i-j|}`
/// with `c = c1 c2 (1 + e^{-w}) / (1 - e^{-w})`, `w = alpha - alpha'`.
pub fn product_constant(c1: f64, c2: f64, alpha: f64, alpha_prime: f64) -> Result<f64> {
    if !(alpha_prime < alpha) || !(alpha_prime >= 0.0) {
        return Err(Error::invalid(
            "product_constant",
            format!("need 0 <= alpha' < alpha, got alpha = {alpha}, alpha' = {alpha_prime}"),
        ));
    }
    if !(c1 >= 0.0 && c2 >= 0.0) {
        return Err(Error::invalid("product_constant", "constants must be nonnegative"));
    }
    let e = (-(alpha - alpha_prime)).exp();
    Ok(c1 * c2 * (1.0 + e) / (1.0 - e))
}

/// Entrywise check of the product bound on `A B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductCheck {
    pub c: f64,
    pub alpha_prime: f64,
    pub checked: usize,
    pub violations: usize,
    /// `max |[AB]_ij| / (c e^{-alpha'|i-j|} + floor)`.
    pub max_ratio: f64,
    pub floor: f64,
}

pub fn product_decay_check<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    alpha: f64,
    c1: f64,
    c2: f64,
    alpha_prime: f64,
) -> Result<ProductCheck> {
    if a.cols() != b.rows() || !a.is_square() || !b.is_square() {
        return Err(Error::DimensionMismatch {
            op: "product_decay_check",
            expected: a.cols(),
            got: b.rows(),
        });
    }
    let c = product_constant(c1, c2, alpha, alpha_prime)?;
    let ab = a.matmul(b);
    let floor = 1e-12 * ab.max_abs().max(1.0);
    let mut out = ProductCheck {
        c,
        alpha_prime,
        checked: 0,
        violations: 0,
        max_ratio: 0.0,
        floor,
    };
    let n = ab.rows();
    for i in 0..n {
        for j in 0..n {
            let bound = c * (-alpha_prime * i.abs_diff(j) as f64).exp() + floor;
            let r = ab[(i, j)].abs() / bound;
            out.checked += 1;
            if r > 1.0 {
                out.violations += 1;
            }
            out.max_ratio = out.max_ratio.max(r);
        }
    }
    Ok(out)
}
