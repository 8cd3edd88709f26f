//! Decay constants for inverses of banded positive definite matrices.

use crate::error::{Error, Result};
use serde::Serialize;

/// Constants of `|[A^{-1}]_ij| <= k lambda^{|i-j|}` for an `m`-banded SPD
/// matrix with spectrum in `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DemkoConstants {
    pub a: f64,
    pub b: f64,
    pub m: usize,
    pub kappa: f64,
    /// `(sqrt(kappa) - 1) / (sqrt(kappa) + 1)`.
    pub q: f64,
    /// `q^(1/m)`.
    pub lambda: f64,
    /// `(1 + sqrt(kappa))^2 / (2b)`.
    pub k0: f64,
    /// `max(1/a, k0)`.
    pub k: f64,
    /// Inverse Cholesky constant `k (1 - lambda^m) / (1 - lambda)`.
    pub k1: f64,
}

impl DemkoConstants {
    /// Decay rate `-ln lambda` (infinite for `kappa = 1`).
    pub fn alpha(&self) -> f64 {
        -self.lambda.ln()
    }

    /// Bound on `|[A^{-1}]_ij|`.
    pub fn inverse_entry(&self, d: usize) -> f64 {
        self.k * self.lambda.powi(d as i32)
    }

    /// Bound on `|Z_ij|`, `j >= i`, for the inverse Cholesky factor of a
    /// matrix scaled to unit maximal diagonal.
    pub fn cholesky_entry(&self, d: usize) -> f64 {
        self.k1 * self.lambda.powi(d as i32)
    }
}

pub fn demko_constants(a: f64, b: f64, m: usize) -> Result<DemkoConstants> {
    if !(a > 0.0 && b >= a && a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(
            "demko_constants",
            format!("need 0 < a <= b, got a = {a}, b = {b}"),
        ));
    }
    if m == 0 {
        return Err(Error::invalid("demko_constants", "bandwidth must be >= 1"));
    }
    let kappa = b / a;
    let s = kappa.sqrt();
    let q = (s - 1.0) / (s + 1.0);
    let lambda = q.powf(1.0 / m as f64);
    let k0 = (1.0 + s).powi(2) / (2.0 * b);
    let k = (1.0 / a).max(k0);
    let k1 = if lambda == 0.0 {
        k
    } else {
        k * (1.0 - lambda.powi(m as i32)) / (1.0 - lambda)
    };
    Ok(DemkoConstants {
        a,
        b,
        m,
        kappa,
        q,
        lambda,
        k0,
        k,
        k1,
    })
}
