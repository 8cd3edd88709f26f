//! The tridiagonal Toeplitz chain `H_n = tridiag(1/2, 0, 1/2)`.
//!
//! Indices are 0-based; the semi-infinite formulas are written for the
//! 1-based positions `i + 1`, `j + 1`.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::matrix::SparseHermitian;
use std::f64::consts::PI;

pub fn toeplitz_1d(n: usize) -> Result<SparseHermitian> {
    if n == 0 {
        return Err(Error::invalid("toeplitz_1d", "n must be positive"));
    }
    SparseHermitian::tridiagonal(&vec![0.0; n], &vec![0.5; n - 1])
}

/// Eigenvalues `cos(k pi / (n+1))`, `k = 1..n` (descending), and
/// eigenvectors `sqrt(2/(n+1)) sin(j k pi / (n+1))` as rows.
pub fn toeplitz_eigenpairs(n: usize) -> (Vec<f64>, DenseMatrix<f64>) {
    let h = PI / (n + 1) as f64;
    let s = (2.0 / (n + 1) as f64).sqrt();
    let vals = (1..=n).map(|k| (k as f64 * h).cos()).collect();
    let vecs = DenseMatrix::from_fn(n, n, |k, j| s * (((j + 1) * (k + 1)) as f64 * h).sin());
    (vals, vecs)
}

/// `sum_{k=1}^{N} cos(k phi)` in closed form.
fn dirichlet_cos(big_n: usize, phi: f64) -> f64 {
    let half = 0.5 * phi;
    let s = half.sin();
    if s.abs() < 1e-300 {
        return big_n as f64;
    }
    (big_n as f64 * half).sin() * ((big_n + 1) as f64 * half).cos() / s
}

fn check_even(op: &'static str, n: usize) -> Result<()> {
    if n >= 2 && n.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Error::invalid(op, format!("n = {n} must be even and positive")))
    }
}

/// Entry `(i, j)` of the projector onto the negative half of the spectrum:
/// `delta_ij + (1/(n+1)) sum_{k=1}^{n/2} [cos((i+j) k pi/(n+1)) - cos((i-j) k pi/(n+1))]`.
pub fn toeplitz_projector_entry(n: usize, i: usize, j: usize) -> Result<f64> {
    check_even("toeplitz_projector_entry", n)?;
    if i >= n || j >= n {
        return Err(Error::invalid("toeplitz_projector_entry", "index out of range"));
    }
    let h = PI / (n + 1) as f64;
    let (a, b) = ((i + j + 2) as f64, i as f64 - j as f64);
    let half = n / 2;
    let sum = dirichlet_cos(half, a * h) - dirichlet_cos(half, b * h);
    Ok(f64::from(u8::from(i == j)) + sum / (n + 1) as f64)
}

/// Dense exact projector for even `n`.
pub fn toeplitz_projector_exact(n: usize) -> Result<DenseMatrix<f64>> {
    check_even("toeplitz_projector_exact", n)?;
    let mut p = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = toeplitz_projector_entry(n, i, j)?;
            p[(i, j)] = v;
            p[(j, i)] = v;
        }
    }
    Ok(p)
}

/// Semi-infinite limit
/// `(1/pi) [(-1)^((i+j-1)/2) / (i+j) + (-1)^((i-j+1)/2) / (i-j)]` for odd
/// `i + j` (1-based), `1/2` on the diagonal and 0 at even offsets.
pub fn toeplitz_projector_limit(i: usize, j: usize) -> f64 {
    if i == j {
        return 0.5;
    }
    let (p, q) = ((i + 1) as i64, (j + 1) as i64);
    if (p + q) % 2 == 0 {
        return 0.0;
    }
    let sgn = |e: i64| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let s = p + q;
    let d = p - q;
    (sgn((s - 1) / 2) / s as f64 + sgn((d + 1).div_euclid(2)) / d as f64) / PI
}

/// Finite-chain Fermi-Dirac matrix at `mu = 0`:
/// `(2/(n+1)) sum_k sin(i k h) sin(j k h) / (1 + exp(beta cos(k h)))`.
pub fn toeplitz_fd_finite(n: usize, beta: f64, i: usize, j: usize) -> f64 {
    let h = PI / (n + 1) as f64;
    let (p, q) = ((i + 1) as f64, (j + 1) as f64);
    let mut s = 0.0;
    for k in 1..=n {
        let t = k as f64 * h;
        let w = beta * t.cos();
        let f = if w > 0.0 {
            let e = (-w).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + w.exp())
        };
        s += (p * t).sin() * (q * t).sin() * f;
    }
    2.0 / (n + 1) as f64 * s
}

/// Semi-infinite Fermi-Dirac entry at `mu = 0`:
/// `int_0^1 (cos((i-j) pi x) - cos((i+j) pi x)) / (1 + exp(beta cos(pi x))) dx`.
///
/// The integrand is even and 2-periodic, so the trapezoidal rule converges
/// geometrically; the node count starts at `4 (i + j + 2)` and doubles until
/// two successive estimates agree to 1e-10.
pub fn toeplitz_fd_limit(i: usize, j: usize, beta: f64) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid("toeplitz_fd_limit", "beta must be positive"));
    }
    let (p, q) = ((i + 1) as f64, (j + 1) as f64);
    let g = |x: f64| {
        let w = beta * (PI * x).cos();
        let f = if w > 0.0 {
            let e = (-w).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + w.exp())
        };
        (((p - q) * PI * x).cos() - ((p + q) * PI * x).cos()) * f
    };
    // Resolve the highest frequency before testing convergence, and require
    // two agreeing doublings so that aliased grids cannot stop early.
    let mut n = (4 * (i + j + 2)).max(16).next_power_of_two();
    let mut sum = 0.5 * (g(0.0) + g(1.0)) + (1..n).map(|k| g(k as f64 / n as f64)).sum::<f64>();
    let mut prev = sum / n as f64;
    let mut agreed = 0;
    while n < (1 << 26) {
        // Add the midpoints of the current grid.
        sum += (0..n).map(|k| g((2 * k + 1) as f64 / (2 * n) as f64)).sum::<f64>();
        n *= 2;
        let cur = sum / n as f64;
        if (cur - prev).abs() < 1e-10 {
            agreed += 1;
            if agreed == 2 {
                return Ok(cur);
            }
        } else {
            agreed = 0;
        }
        prev = cur;
    }
    Err(Error::NoConvergence {
        op: "toeplitz_fd_limit",
        iterations: n,
    })
}
