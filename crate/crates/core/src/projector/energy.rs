//! Band-structure energy `Tr(PH)` and first-order error estimates.

use crate::error::{Error, Result};
use crate::matrix::SparseHermitian;
use serde::{Deserialize, Serialize};

/// `Tr(PH)`, reading only the entries of `P` where `H` is nonzero.
pub fn energy(p: &SparseHermitian, h: &SparseHermitian) -> Result<f64> {
    if p.n() != h.n() {
        return Err(Error::DimensionMismatch {
            op: "energy",
            expected: h.n(),
            got: p.n(),
        });
    }
    Ok(h.trace_product(p))
}

/// Spectral and Frobenius norms of a perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormPair {
    pub two: f64,
    pub frobenius: f64,
}

/// Normalization of the Hamiltonian assumed by the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// `||H||_F = 1`.
    Frobenius,
    /// `||H||_2 = 1`.
    TwoNorm,
}

/// Estimate of `|Tr(P^ H^) - Tr(PH)| / n_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyErrorBound {
    pub h_term: f64,
    pub p_term: f64,
    /// Bound on the neglected `|Tr(dP dH)| / n_e`.
    pub second_order: f64,
    /// `h_term + p_term`.
    pub first_order: f64,
    pub total: f64,
}

/// First-order estimate plus the second-order remainder.
///
/// With `||H||_2 = 1`: `||dH||_2 + n_b ||dP||_2`. With `||H||_F = 1` the
/// smaller of `||dH||_F / sqrt(n_e) + ||dP||_F / n_e` and
/// `||dH||_2 + sqrt(n_b / n_e) ||dP||_2`. The remainder is bounded by
/// `min(||dP||_F ||dH||_F / n_e, n_b ||dP||_2 ||dH||_2)`.
pub fn energy_error_bounds(dh: NormPair, dp: NormPair, n_e: usize, n_b: f64, scaling: Scaling) -> Result<EnergyErrorBound> {
    let finite_nonneg = |x: f64| x.is_finite() && x >= 0.0;
    if ![dh.two, dh.frobenius, dp.two, dp.frobenius, n_b].into_iter().all(finite_nonneg) || n_e == 0 {
        return Err(Error::invalid("energy_error_bounds", "norms must be nonnegative and n_e positive"));
    }
    let ne = n_e as f64;
    let (h_term, p_term) = match scaling {
        Scaling::TwoNorm => (dh.two, n_b * dp.two),
        Scaling::Frobenius => {
            let a = (dh.frobenius / ne.sqrt(), dp.frobenius / ne);
            let b = (dh.two, (n_b / ne).sqrt() * dp.two);
            if a.0 + a.1 <= b.0 + b.1 {
                a
            } else {
                b
            }
        }
    };
    let second_order = (dp.frobenius * dh.frobenius / ne).min(n_b * dp.two * dh.two);
    Ok(EnergyErrorBound {
        h_term,
        p_term,
        second_order,
        first_order: h_term + p_term,
        total: h_term + p_term + second_order,
    })
}
