//! Chebyshev expansions of the Fermi-Dirac function and the step function,
//! and their evaluation at a matrix with truncated intermediates.

use super::density::{DensityResult, Method};
use super::pattern::{Pattern, PatternSpec};
use crate::bounds::FermiDirac;
use crate::error::{Error, Result};
use crate::matrix::{gershgorin_interval, spectral_interval, FullCsr, SparseHermitian};
use crate::par;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Function expanded by a [`ChebCoeffs`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChebTarget {
    FermiDirac { beta: f64, mu: f64 },
    /// Heaviside step `1` for `x < mu`.
    Step { mu: f64 },
    Custom,
}

/// Coefficients of `f(x) ~ sum_k c_k T_k(x)` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChebCoeffs {
    pub coeffs: Vec<f64>,
    pub target: ChebTarget,
    /// Quadrature nodes used (0 for closed forms).
    pub nodes: usize,
}

impl ChebCoeffs {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluate the truncated series at `x` by Clenshaw's recurrence.
    pub fn eval(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + self.coeffs[0]
    }
}

/// Number of quadrature nodes for a degree-`k` truncation.
fn node_count(degree: usize) -> usize {
    (4 * (degree + 1)).max(256)
}

/// Chebyshev coefficients of `f` up to `degree`, from a Chebyshev-Gauss
/// rule with `max(4(degree + 1), 256)` nodes.
pub fn cheb_coeffs(f: impl Fn(f64) -> f64 + Sync + Send, degree: usize) -> ChebCoeffs {
    let n = node_count(degree);
    let values = par::map_range(n, |j| f((PI * (j as f64 + 0.5) / n as f64).cos()));
    let coeffs = par::map_range(degree + 1, |k| {
        let s: f64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| v * (k as f64 * PI * (j as f64 + 0.5) / n as f64).cos())
            .sum();
        let c = 2.0 * s / n as f64;
        if k == 0 {
            0.5 * c
        } else {
            c
        }
    });
    ChebCoeffs {
        coeffs,
        target: ChebTarget::Custom,
        nodes: n,
    }
}

/// Coefficients of the Fermi-Dirac function `1 / (1 + exp(beta (x - mu)))`.
/// `beta = 0` gives the constant `1/2`.
pub fn cheb_coeffs_fd(beta: f64, mu: f64, degree: usize) -> Result<ChebCoeffs> {
    let mut c = if beta == 0.0 && mu.is_finite() {
        cheb_coeffs(|_| 0.5, degree)
    } else {
        let fd = FermiDirac::new(beta, mu)?;
        cheb_coeffs(|x| fd.eval_real(x), degree)
    };
    c.target = ChebTarget::FermiDirac { beta, mu };
    Ok(c)
}

/// Closed-form coefficients of the step function at `mu` in `(-1, 1)`.
pub fn cheb_coeffs_step(mu: f64, degree: usize) -> Result<ChebCoeffs> {
    if !(mu > -1.0 && mu < 1.0) {
        return Err(Error::invalid("cheb_coeffs_step", format!("mu = {mu} outside (-1, 1)")));
    }
    let theta = mu.acos();
    let coeffs = (0..=degree)
        .map(|k| {
            if k == 0 {
                (PI - theta) / PI
            } else {
                -2.0 / (PI * k as f64) * (k as f64 * theta).sin()
            }
        })
        .collect();
    Ok(ChebCoeffs {
        coeffs,
        target: ChebTarget::Step { mu },
        nodes: 0,
    })
}

const NORMALIZATION_TOL: f64 = 1e-8;

fn check_normalized(h: &SparseHermitian) -> Result<()> {
    let (lo, hi) = gershgorin_interval(h);
    if lo >= -1.0 - NORMALIZATION_TOL && hi <= 1.0 + NORMALIZATION_TOL {
        return Ok(());
    }
    let iv = spectral_interval(h)?;
    let (rlo, rhi) = iv.ritz.unwrap_or((iv.lo, iv.hi));
    if rlo >= -1.0 - NORMALIZATION_TOL && rhi <= 1.0 + NORMALIZATION_TOL {
        Ok(())
    } else {
        Err(Error::NotNormalized { lo: rlo, hi: rhi })
    }
}

const ROW_BLOCK: usize = 64;

/// `H T` restricted to the pattern, for `T` stored on the pattern.
fn pattern_product(a: &FullCsr, pat: &Pattern, t: &[f64]) -> Vec<f64> {
    let n = pat.n;
    let blocks = n.div_ceil(ROW_BLOCK);
    let parts = par::map_range(blocks, |b| {
        let rows = b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(n);
        let mut slot = vec![usize::MAX; n];
        let mut out = vec![0.0; pat.row_ptr[rows.end] - pat.row_ptr[rows.start]];
        let base = pat.row_ptr[rows.start];
        for i in rows {
            for (k, &j) in pat.row(i).iter().enumerate() {
                slot[j] = pat.row_ptr[i] + k - base;
            }
            let (cols, vals) = a.row(i);
            for (&k, &h) in cols.iter().zip(vals) {
                let start = pat.row_ptr[k];
                for (off, &j) in pat.row(k).iter().enumerate() {
                    let s = slot[j];
                    if s != usize::MAX {
                        out[s] += h * t[start + off];
                    }
                }
            }
            for &j in pat.row(i) {
                slot[j] = usize::MAX;
            }
        }
        out
    });
    parts.concat()
}

/// `sum_k c_k T_k(H)` by the three-term recurrence, every intermediate
/// truncated to `pattern`.
///
/// The spectrum of `h` must lie in `[-1, 1]`. Complex Hermitian input is
/// evaluated on its real embedding.
pub fn cheb_apply(h: &SparseHermitian, coeffs: &ChebCoeffs, pattern: PatternSpec) -> Result<DensityResult> {
    check_normalized(h)?;
    let base = Pattern::build(h, pattern)?;
    let complex = !h.is_real();
    let (pat, real) = if complex {
        (base.lift(), h.realify())
    } else {
        (base.clone(), h.clone())
    };
    let a = real.to_full_csr();
    let n = pat.n;
    let nnz = pat.nnz();

    // T_0 = I on the pattern.
    let mut t_prev = vec![0.0; nnz];
    for i in 0..n {
        if let Some(p) = pat.position(i, i) {
            t_prev[p] = 1.0;
        }
    }
    let c = &coeffs.coeffs;
    let mut acc: Vec<f64> = t_prev.iter().map(|x| c[0] * x).collect();
    if c.len() > 1 {
        let mut t_cur = pattern_product(&a, &pat, &t_prev);
        axpy(&mut acc, c[1], &t_cur);
        for &ck in &c[2..] {
            let mut next = pattern_product(&a, &pat, &t_cur);
            next.iter_mut()
                .zip(&t_prev)
                .for_each(|(x, p)| *x = 2.0 * *x - p);
            t_prev = std::mem::replace(&mut t_cur, next);
            axpy(&mut acc, ck, &t_cur);
        }
    }

    let value = |i: usize, j: usize| pat.position(i, j).map_or(0.0, |p| acc[p]);
    let mut herm = 0.0;
    let mut entries = Vec::new();
    for i in 0..base.n {
        for &j in base.row(i) {
            let (v, vt) = if complex {
                (
                    Complex64::new(value(2 * i, 2 * j), value(2 * i + 1, 2 * j)),
                    Complex64::new(value(2 * j, 2 * i), value(2 * j + 1, 2 * i)),
                )
            } else {
                (Complex64::new(value(i, j), 0.0), Complex64::new(value(j, i), 0.0))
            };
            herm += (v - vt.conj()).norm_sqr();
            if j >= i {
                let v = if i == j { Complex64::new(v.re, 0.0) } else { 0.5 * (v + vt.conj()) };
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((i, j, v));
                }
            }
        }
    }
    let mut matrix = SparseHermitian::from_triplets(base.n, entries)?;
    if let PatternSpec::Band { m } = pattern {
        matrix = matrix.with_bandwidth_hint(m);
    }
    Ok(DensityResult {
        matrix,
        method: Method::Chebyshev {
            degree: coeffs.degree(),
            target: coeffs.target,
        },
        pattern,
        spec: None,
        hermiticity_residual: herm.sqrt(),
    })
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    y.iter_mut().zip(x).for_each(|(y, x)| *y += a * x);
}
