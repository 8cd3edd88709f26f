//! Dense eigendecomposition references.

use super::density::{DensityResult, Method};
use super::pattern::PatternSpec;
use crate::bounds::FermiDirac;
use crate::error::{Error, Result};
use crate::linalg::{complexify, symmetric_eigen, symmetric_eigen_rows, tridiagonal_eigen_rows, DenseMatrix};
use crate::matrix::{SparseHermitian, SpectralModel};

const FERMI_TOL: f64 = 1e-12;

/// Eigenvalues of `h` from its real form; the embedding doubles each one,
/// so every other value is kept for complex input.
fn dedupe(values: &[f64], complex: bool) -> Vec<f64> {
    if complex {
        values.iter().step_by(2).copied().collect()
    } else {
        values.to_vec()
    }
}

/// `f(H)` by dense eigendecomposition, with the eigenvalues of `H`.
pub fn oracle_function(h: &SparseHermitian, f: impl Fn(f64) -> f64) -> Result<(SparseHermitian, Vec<f64>, f64)> {
    let real = h.real_form();
    let d = real.to_dense_real()?;
    let e = symmetric_eigen(&d)?;
    let fm = e.apply(f);
    let herm = fm.hermiticity_residual();
    let m = if h.is_real() {
        SparseHermitian::from_dense(&fm, 0.0)?
    } else {
        SparseHermitian::from_dense(&complexify(&fm), 0.0)?
    };
    Ok((m, dedupe(&e.values, !h.is_real()), herm))
}

/// Spectral projector onto eigenvalues below `mu`.
pub fn oracle_projector(h: &SparseHermitian, mu: f64) -> Result<DensityResult> {
    let (p, values, herm) = oracle_function(h, |x| if x < mu { 1.0 } else { 0.0 })?;
    check_fermi_level(&values, mu)?;
    Ok(DensityResult {
        matrix: p,
        method: Method::Oracle,
        pattern: PatternSpec::None,
        spec: Some(SpectralModel::from_eigenvalues(&values, mu)?),
        hermiticity_residual: herm,
    })
}

/// `f_FD(H)` at inverse temperature `beta` and chemical potential `mu`.
pub fn oracle_fd(h: &SparseHermitian, beta: f64, mu: f64) -> Result<DensityResult> {
    let fd = FermiDirac::new(beta, mu)?;
    let (p, values, herm) = oracle_function(h, |x| fd.eval_real(x))?;
    let spec = SpectralModel::from_eigenvalues(&values, mu).ok().map(|s| s.with_beta(beta));
    Ok(DensityResult {
        matrix: p,
        method: Method::OracleFd { beta, mu },
        pattern: PatternSpec::None,
        spec,
        hermiticity_residual: herm,
    })
}

fn check_fermi_level(values: &[f64], mu: f64) -> Result<()> {
    let scale = values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    match values.iter().find(|&&x| (x - mu).abs() <= FERMI_TOL * scale) {
        Some(&x) => Err(Error::EigenvalueAtFermiLevel {
            mu,
            eigenvalue: x,
            tol: FERMI_TOL * scale,
        }),
        None => Ok(()),
    }
}

/// Block `P[idx, idx]` of the projector of a real matrix, accumulating
/// eigenvector components only at `idx` (O(n^2) per index after the
/// reduction; no reduction for tridiagonal input).
pub fn oracle_projector_block(h: &SparseHermitian, mu: f64, idx: &[usize]) -> Result<DenseMatrix<f64>> {
    if !h.is_real() {
        return Err(Error::invalid("oracle_projector_block", "real matrices only"));
    }
    let (values, comps) = if h.bandwidth() <= 1 {
        let n = h.n();
        let diag: Vec<f64> = (0..n).map(|i| h.get_re(i, i)).collect();
        let off: Vec<f64> = (0..n.saturating_sub(1)).map(|i| h.get_re(i, i + 1)).collect();
        tridiagonal_eigen_rows(&diag, &off, idx)?
    } else {
        symmetric_eigen_rows(&h.to_dense_real()?, idx)?
    };
    check_fermi_level(&values, mu)?;
    let occ: Vec<usize> = (0..values.len()).filter(|&k| values[k] < mu).collect();
    Ok(DenseMatrix::from_fn(idx.len(), idx.len(), |a, b| {
        occ.iter().map(|&k| comps[(a, k)] * comps[(b, k)]).sum()
    }))
}
