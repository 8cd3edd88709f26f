//! Matrix norms used by the truncation and energy estimates.

use super::SparseHermitian;
use serde::Serialize;

/// Norms of a Hermitian matrix. For Hermitian input `one == inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub one: f64,
    pub inf: f64,
    pub frobenius: f64,
    /// `sqrt(||A||_1 ||A||_inf)`, an upper bound on the spectral norm.
    pub two_norm_bound: f64,
}

pub fn norms(a: &SparseHermitian) -> Norms {
    let mut rows = vec![0.0; a.n()];
    let mut fro = 0.0;
    for (i, j, v) in a.iter_upper() {
        let m = v.norm();
        rows[i] += m;
        if i != j {
            rows[j] += m;
            fro += 2.0 * m * m;
        } else {
            fro += m * m;
        }
    }
    let inf = rows.iter().copied().fold(0.0, f64::max);
    // Column sums equal row sums for Hermitian matrices.
    let one = inf;
    Norms {
        one,
        inf,
        frobenius: fro.sqrt(),
        two_norm_bound: (one * inf).sqrt(),
    }
}
