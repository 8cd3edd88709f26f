#![allow(dead_code)]

use decayproj::linalg::DenseMatrix;
use decayproj::SparseHermitian;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn to_na(a: &DenseMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

/// Symmetric eigendecomposition by cyclic Jacobi, checked against its own
/// residual.
///
/// nalgebra's `SymmetricEigen` leaves residuals up to 1e-2 on some small
/// banded inputs, so the oracle uses Jacobi rotations instead.
pub fn na_eigen(a: &DenseMatrix<f64>) -> nalgebra::SymmetricEigen<f64, nalgebra::Dyn> {
    let m = to_na(a);
    let n = m.nrows();
    let mut w = m.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let total = w.norm();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| w[(i, j)].powi(2)).sum::<f64>().sqrt();
        if off <= 1e-15 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = w[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (w[(q, q)] - w[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let (wkp, wkq) = (w[(k, p)], w[(k, q)]);
                    w[(k, p)] = c * wkp - s * wkq;
                    w[(k, q)] = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let (wpk, wqk) = (w[(p, k)], w[(q, k)]);
                    w[(p, k)] = c * wpk - s * wqk;
                    w[(q, k)] = s * wpk + c * wqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let eigenvalues = w.diagonal();
    let res = (&m * &v - &v * DMatrix::from_diagonal(&eigenvalues)).amax();
    let tol = 1e-14 * n.max(16) as f64 * m.amax().max(1.0);
    assert!(res <= tol, "eigen oracle residual {res:e}");
    nalgebra::SymmetricEigen { eigenvectors: v, eigenvalues }
}

/// Eigenvalues from the Jacobi oracle, ascending.
pub fn na_eigenvalues(a: &DenseMatrix<f64>) -> Vec<f64> {
    let e = na_eigen(a);
    let mut v: Vec<f64> = e.eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Spectral projector onto eigenvalues below `mu`, via the Jacobi oracle.
pub fn na_projector(a: &DenseMatrix<f64>, mu: f64) -> DenseMatrix<f64> {
    na_function(a, |x| if x < mu { 1.0 } else { 0.0 })
}

pub fn na_function(a: &DenseMatrix<f64>, f: impl Fn(f64) -> f64) -> DenseMatrix<f64> {
    let e = na_eigen(a);
    let n = a.rows();
    let mut p = DenseMatrix::zeros(n, n);
    for k in 0..n {
        let w = f(e.eigenvalues[k]);
        if w == 0.0 {
            continue;
        }
        let v = e.eigenvectors.column(k);
        for i in 0..n {
            for j in 0..n {
                p[(i, j)] += w * v[i] * v[j];
            }
        }
    }
    p
}

pub fn random_symmetric(n: usize, seed: u64) -> DenseMatrix<f64> {
    let mut r = rng(seed);
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v: f64 = r.gen_range(-1.0..1.0);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

pub fn random_banded(n: usize, m: usize, seed: u64) -> SparseHermitian {
    let mut r = rng(seed);
    let mut e = Vec::new();
    for i in 0..n {
        for j in i..(i + m + 1).min(n) {
            e.push((i, j, r.gen_range(-1.0..1.0)));
        }
    }
    SparseHermitian::from_real_triplets(n, e).unwrap()
}

pub fn max_abs_diff(a: &DenseMatrix<f64>, b: &DenseMatrix<f64>) -> f64 {
    a.sub(b).max_abs()
}
