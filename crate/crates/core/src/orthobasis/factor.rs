use crate::error::{Error, Result};
use crate::linalg::{complexify, realify, symmetric_eigen, symmetric_eigenvalues, DenseMatrix, LowerBand, Scalar};
use crate::matrix::SparseHermitian;
use crate::par;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which inverse factor `Z` (with `S^{-1} = Z Z*`) is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactorKind {
    /// `Z = L^{-*}`, upper triangular.
    InverseCholesky,
    /// `Z = S^{-1/2}`, Hermitian.
    Lowdin,
}

/// Dense factor, real or complex.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorMatrix {
    Real(DenseMatrix<f64>),
    Complex(DenseMatrix<Complex64>),
}

impl FactorMatrix {
    pub fn n(&self) -> usize {
        match self {
            FactorMatrix::Real(z) => z.rows(),
            FactorMatrix::Complex(z) => z.rows(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self {
            FactorMatrix::Real(z) => Complex64::new(z[(i, j)], 0.0),
            FactorMatrix::Complex(z) => z[(i, j)],
        }
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        match self {
            FactorMatrix::Real(z) => z.to_complex(),
            FactorMatrix::Complex(z) => z.clone(),
        }
    }

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        match self {
            FactorMatrix::Real(z) => z.as_slice().iter().filter(|x| **x != 0.0).count(),
            FactorMatrix::Complex(z) => z.as_slice().iter().filter(|x| x.norm_sqr() != 0.0).count(),
        }
    }

    /// Largest magnitude on each diagonal `|i - j| = d`.
    pub fn diagonal_envelope(&self) -> Vec<f64> {
        match self {
            FactorMatrix::Real(z) => z.diagonal_envelope(),
            FactorMatrix::Complex(z) => z.diagonal_envelope(),
        }
    }

    /// `Z* A Z` for Hermitian `A`.
    pub fn congruence_dense(&self, a: &SparseHermitian) -> DenseMatrix<Complex64> {
        match self {
            FactorMatrix::Real(z) if a.is_real() => {
                let ad = a.to_dense_real().expect("real by check");
                z.adjoint().matmul(&ad.matmul(z)).to_complex()
            }
            _ => {
                let z = self.to_complex();
                z.adjoint().matmul(&a.to_dense_complex().matmul(&z))
            }
        }
    }
}

/// Cholesky factor `S = L L*`.
#[derive(Debug, Clone)]
pub enum CholeskyFactor {
    Real(LowerBand<f64>),
    Complex(LowerBand<Complex64>),
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        match self {
            CholeskyFactor::Real(l) => l.n(),
            CholeskyFactor::Complex(l) => l.n(),
        }
    }

    pub fn bandwidth(&self) -> usize {
        match self {
            CholeskyFactor::Real(l) => l.bandwidth(),
            CholeskyFactor::Complex(l) => l.bandwidth(),
        }
    }

    pub fn to_dense_complex(&self) -> DenseMatrix<Complex64> {
        match self {
            CholeskyFactor::Real(l) => l.to_dense().to_complex(),
            CholeskyFactor::Complex(l) => l.to_dense(),
        }
    }

    /// `||L L* - S||_F / ||S||_F`.
    pub fn residual(&self, s: &SparseHermitian) -> f64 {
        let l = self.to_dense_complex();
        let sd = s.to_dense_complex();
        l.matmul(&l.adjoint()).sub(&sd).frobenius_norm() / sd.frobenius_norm()
    }
}

/// Banded Cholesky factorization of a Hermitian positive definite matrix.
pub fn cholesky_banded(s: &SparseHermitian) -> Result<CholeskyFactor> {
    let n = s.n();
    let m = s.bandwidth();
    if s.is_real() {
        LowerBand::cholesky(n, m, |i, j| s.get_re(i, j)).map(CholeskyFactor::Real)
    } else {
        LowerBand::cholesky(n, m, |i, j| s.get(i, j)).map(CholeskyFactor::Complex)
    }
}

/// An inverse factor of an overlap matrix with its spectral data.
#[derive(Debug, Clone)]
pub struct FactorSet {
    pub kind: FactorKind,
    pub z: FactorMatrix,
    pub drop_tol: f64,
    pub nnz: usize,
    /// Smallest eigenvalue of `S`.
    pub a: f64,
    /// Largest eigenvalue of `S`.
    pub b: f64,
    pub kappa: f64,
}

fn extreme_eigenvalues(s: &SparseHermitian) -> Result<(f64, f64)> {
    let e = symmetric_eigenvalues(&s.real_form().to_dense_real()?)?;
    let (a, b) = (e[0], e[e.len() - 1]);
    if !(a > 0.0) {
        let index = e.iter().position(|&x| x > 0.0).unwrap_or(e.len());
        return Err(Error::NotPositiveDefinite {
            op: "overlap",
            index: if s.is_real() { index } else { index / 2 },
            pivot: a,
        });
    }
    Ok((a, b))
}

/// Zero entries of each column below `drop_tol` times the column's largest
/// magnitude.
fn drop_columns<T: Scalar>(cols: &mut [Vec<T>], drop_tol: f64) {
    if drop_tol <= 0.0 {
        return;
    }
    for c in cols.iter_mut() {
        let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let cut = drop_tol * scale;
        c.iter_mut().filter(|x| x.abs() < cut).for_each(|x| *x = T::zero());
    }
}

fn columns_to_dense<T: Scalar>(n: usize, cols: &[Vec<T>]) -> DenseMatrix<T> {
    let mut z = DenseMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        for (i, &v) in c.iter().enumerate() {
            z[(i, j)] = v;
        }
    }
    z
}

fn inverse_columns<T: Scalar>(l: &LowerBand<T>) -> Vec<Vec<T>> {
    par::map_range(l.n(), |j| l.inverse_adjoint_column(j))
}

/// `Z = L^{-*}` by independent column solves; entries smaller than
/// `drop_tol` times their column maximum are dropped.
pub fn inverse_cholesky(s: &SparseHermitian, drop_tol: f64) -> Result<FactorSet> {
    if !(drop_tol >= 0.0) {
        return Err(Error::invalid("inverse_cholesky", "drop_tol must be nonnegative"));
    }
    let n = s.n();
    let l = cholesky_banded(s)?;
    let (a, b) = extreme_eigenvalues(s)?;
    let z = match &l {
        CholeskyFactor::Real(l) => {
            let mut cols = inverse_columns(l);
            drop_columns(&mut cols, drop_tol);
            FactorMatrix::Real(columns_to_dense(n, &cols))
        }
        CholeskyFactor::Complex(l) => {
            let mut cols = inverse_columns(l);
            drop_columns(&mut cols, drop_tol);
            FactorMatrix::Complex(columns_to_dense(n, &cols))
        }
    };
    Ok(FactorSet {
        kind: FactorKind::InverseCholesky,
        nnz: z.nnz(),
        z,
        drop_tol,
        a,
        b,
        kappa: b / a,
    })
}

/// Symmetric inverse square root `Z = S^{-1/2}` by dense
/// eigendecomposition.
pub fn lowdin(s: &SparseHermitian) -> Result<FactorSet> {
    let real = s.real_form();
    let e = symmetric_eigen(&real.to_dense_real()?)?;
    let (a, b) = (e.values[0], e.values[e.values.len() - 1]);
    if !(a > 0.0) {
        return Err(Error::NotPositiveDefinite {
            op: "lowdin",
            index: 0,
            pivot: a,
        });
    }
    let mut zr = e.apply(|x| 1.0 / x.sqrt());
    zr.symmetrize();
    let z = if s.is_real() {
        FactorMatrix::Real(zr)
    } else {
        FactorMatrix::Complex(complexify(&zr))
    };
    Ok(FactorSet {
        kind: FactorKind::Lowdin,
        nnz: z.nnz(),
        z,
        drop_tol: 0.0,
        a,
        b,
        kappa: b / a,
    })
}

fn hermitian_from_dense(mut m: DenseMatrix<Complex64>, real: bool) -> Result<SparseHermitian> {
    m.symmetrize();
    if real {
        SparseHermitian::from_dense(&m.map(|v| Complex64::new(v.re, 0.0)), 0.0)
    } else {
        SparseHermitian::from_dense(&m, 0.0)
    }
}

/// `Z* H Z`, symmetrized.
pub fn congruence(h: &SparseHermitian, z: &FactorMatrix) -> Result<SparseHermitian> {
    if h.n() != z.n() {
        return Err(Error::DimensionMismatch {
            op: "congruence",
            expected: h.n(),
            got: z.n(),
        });
    }
    let real = h.is_real() && matches!(z, FactorMatrix::Real(_));
    hermitian_from_dense(z.congruence_dense(h), real)
}

/// `||Z* S Z - I||_2`.
pub fn orthogonality_defect(s: &SparseHermitian, z: &FactorMatrix) -> Result<f64> {
    let mut m = z.congruence_dense(s);
    for i in 0..m.rows() {
        m[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    m.symmetrize();
    let e = symmetric_eigenvalues(&realify(&m))?;
    Ok(e[0].abs().max(e[e.len() - 1].abs()))
}

/// Eigenvalues of the pencil `(H, S)` (ascending) from the congruence with
/// the inverse Cholesky factor.
pub fn generalized_eigenvalues(h: &SparseHermitian, s: &SparseHermitian) -> Result<Vec<f64>> {
    let z = inverse_cholesky(s, 0.0)?;
    let ht = congruence(h, &z.z)?;
    let e = symmetric_eigenvalues(&ht.real_form().to_dense_real()?)?;
    Ok(if ht.is_real() { e } else { e.into_iter().step_by(2).collect() })
}

/// One point of a drop-tolerance sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DropSweepRow {
    pub drop_tol: f64,
    pub nnz: usize,
    /// `||Z* S Z - I||_2`.
    pub defect: f64,
}

/// Inverse Cholesky factors of `s` at each tolerance, with their
/// orthogonality defects.
pub fn drop_sweep(s: &SparseHermitian, tols: &[f64]) -> Result<Vec<DropSweepRow>> {
    tols.iter()
        .map(|&t| {
            let f = inverse_cholesky(s, t)?;
            Ok(DropSweepRow {
                drop_tol: t,
                nnz: f.nnz,
                defect: orthogonality_defect(s, &f.z)?,
            })
        })
        .collect()
}

/// Least-squares slope of `ln env(d)` over `d` in `range`, skipping
/// diagonals at or below `floor`.
pub fn decay_slope(envelope: &[f64], range: std::ops::RangeInclusive<usize>, floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = range
        .filter(|&d| d < envelope.len() && envelope[d] > floor)
        .map(|d| (d as f64, envelope[d].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
