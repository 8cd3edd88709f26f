//! Two-dimensional models built from the Toeplitz chain.

use super::toeplitz::{toeplitz_1d, toeplitz_projector_exact};
use crate::error::{Error, Result};
use crate::linalg::{DenseMatrix, Scalar};
use crate::matrix::SparseHermitian;

/// Kronecker product of dense matrices.
pub fn kron_dense<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> DenseMatrix<T> {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    DenseMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Square lattice `(H_n (x) I + I (x) H_n) / 2` on `n^2` sites; site
/// `(a, b)` has index `a n + b`.
pub fn kron_2d(n: usize) -> Result<SparseHermitian> {
    if n == 0 {
        return Err(Error::invalid("kron_2d", "n must be positive"));
    }
    let mut e = Vec::with_capacity(2 * n * n);
    for a in 0..n {
        for b in 0..n {
            let s = a * n + b;
            if a + 1 < n {
                e.push((s, s + n, 0.25));
            }
            if b + 1 < n {
                e.push((s, s + 1, 0.25));
            }
        }
    }
    SparseHermitian::from_real_triplets(n * n, e)
}

/// `H_n (x) H_n`, whose negative-spectrum projector is
/// [`kron_projector_formula`].
pub fn kron_product_hamiltonian(n: usize) -> Result<SparseHermitian> {
    let h = toeplitz_1d(n)?.to_dense_real()?;
    SparseHermitian::from_dense(&kron_dense(&h, &h), 0.0)
}

/// `P (x) (I - P) + (I - P) (x) P` with `P` the exact chain projector.
///
/// This is the projector onto the negative eigenvalues of `H_n (x) H_n`
/// (products of eigenvalues of opposite sign). It is not the spectral
/// projector of the lattice [`kron_2d`], which has `n` zero eigenvalues.
pub fn kron_projector_formula(n: usize) -> Result<DenseMatrix<f64>> {
    let p = toeplitz_projector_exact(n)?;
    let q = DenseMatrix::identity(n).sub(&p);
    Ok(kron_dense(&p, &q).add(&kron_dense(&q, &p)))
}
