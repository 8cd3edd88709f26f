//! Density-matrix results and their diagnostics.

use super::chebyshev::ChebTarget;
use super::pattern::PatternSpec;
use crate::bounds::Circle;
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigenvalues;
use crate::matrix::{SparseHermitian, SpectralModel};
use serde::Serialize;

/// How a density matrix was computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Method {
    Oracle,
    OracleFd { beta: f64, mu: f64 },
    Chebyshev { degree: usize, target: ChebTarget },
    Contour { nodes: usize, circle: Circle },
}

/// A computed projector or Fermi-Dirac matrix.
#[derive(Debug, Clone)]
pub struct DensityResult {
    pub matrix: SparseHermitian,
    pub method: Method,
    pub pattern: PatternSpec,
    pub spec: Option<SpectralModel>,
    /// `||P - P*||_F` of the computed matrix before it was stored as
    /// Hermitian.
    pub hermiticity_residual: f64,
}

/// Diagnostics of a [`DensityResult`], optionally against a reference.
#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    /// `||P^2 - P||_2`.
    pub idempotency_defect: f64,
    pub trace: f64,
    pub n_e: Option<usize>,
    /// `|Tr P - n_e|`.
    pub trace_deviation: Option<f64>,
    pub hermiticity_residual: f64,
    pub max_entry: f64,
    /// `sum_{i != j} |P_ij|^2 / ||P||_F^2`.
    pub lemma_ratio: f64,
    /// `1 - 1/n_b`, the upper limit for an exact projector.
    pub lemma_bound: Option<f64>,
    pub sup_error: Option<f64>,
    pub frobenius_error: Option<f64>,
    pub two_norm_error: Option<f64>,
}

/// Spectral norm of a Hermitian matrix (dense eigenvalues of its real form).
pub fn two_norm(a: &SparseHermitian) -> Result<f64> {
    let d = a.real_form().to_dense_real()?;
    let e = symmetric_eigenvalues(&d)?;
    Ok(e.first().map_or(0.0, |x| x.abs()).max(e.last().map_or(0.0, |x| x.abs())))
}

/// Difference `a - b` of Hermitian matrices.
pub fn difference(a: &SparseHermitian, b: &SparseHermitian) -> Result<SparseHermitian> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            op: "difference",
            expected: a.n(),
            got: b.n(),
        });
    }
    let entries = a
        .iter_upper()
        .chain(b.iter_upper().map(|(i, j, v)| (i, j, -v)));
    let mut acc = std::collections::BTreeMap::new();
    for (i, j, v) in entries {
        *acc.entry((i, j)).or_insert(num_complex::Complex64::new(0.0, 0.0)) += v;
    }
    SparseHermitian::from_triplets(a.n(), acc.into_iter().map(|((i, j), v)| (i, j, v)))
}

pub fn lemma_ratio(p: &SparseHermitian) -> f64 {
    let (mut off, mut total) = (0.0, 0.0);
    for (i, j, v) in p.iter_upper() {
        let s = v.norm_sqr();
        if i == j {
            total += s;
        } else {
            off += 2.0 * s;
            total += 2.0 * s;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        off / total
    }
}

/// Number of ordered off-diagonal pairs with `|P_ij| >= eps`.
pub fn entry_count(p: &SparseHermitian, eps: f64) -> usize {
    2 * p
        .iter_upper()
        .filter(|&(i, j, v)| i != j && v.norm() >= eps)
        .count()
}

/// Upper limit `n (1 - 1/n_b) / (eps^2 n_b)` on [`entry_count`] for an
/// orthogonal projector of rank `n_e`, `n_b = n / n_e`.
pub fn entry_count_bound(n: usize, n_e: usize, eps: f64) -> f64 {
    let nb = n as f64 / n_e as f64;
    n as f64 * (1.0 - 1.0 / nb) / (eps * eps * nb)
}

pub fn verify_density(result: &DensityResult, oracle: Option<&DensityResult>) -> Result<Verification> {
    let p = &result.matrix;
    let n = p.n();
    let real = p.real_form();
    let d = real.to_dense_real()?;
    let mut defect = d.matmul(&d).sub(&d);
    defect.symmetrize();
    let ev = symmetric_eigenvalues(&defect)?;
    let idem = ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let trace = p.trace();
    let n_e = result
        .spec
        .map(|s| s.n_e)
        .or_else(|| oracle.and_then(|o| o.spec.map(|s| s.n_e)));
    let (sup, fro, two) = match oracle {
        Some(o) => {
            let diff = difference(p, &o.matrix)?;
            let fro = crate::matrix::norms(&diff).frobenius;
            (Some(diff.max_abs()), Some(fro), Some(two_norm(&diff)?))
        }
        None => (None, None, None),
    };
    Ok(Verification {
        idempotency_defect: idem,
        trace,
        n_e,
        trace_deviation: n_e.map(|k| (trace - k as f64).abs()),
        hermiticity_residual: result.hermiticity_residual,
        max_entry: p.max_abs(),
        lemma_ratio: lemma_ratio(p),
        lemma_bound: n_e.map(|k| 1.0 - k as f64 / n as f64),
        sup_error: sup,
        frobenius_error: fro,
        two_norm_error: two,
    })
}
