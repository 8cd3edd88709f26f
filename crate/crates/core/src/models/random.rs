//! Seeded random models. All draws use ChaCha20 seeded from a `u64`.

use crate::error::{Error, Result};
use crate::linalg::{reduce_to_band, symmetric_eigenvalues, DenseMatrix};
use crate::matrix::{SparseHermitian, SpectralModel};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Parameters of [`gapped_random`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GappedParams {
    pub n: usize,
    /// Target bandwidth of the reduced matrix.
    pub m: usize,
    /// Interval holding the `n_e` occupied eigenvalues.
    pub occupied: [f64; 2],
    /// Interval holding the remaining eigenvalues.
    #[serde(rename = "virtual")]
    pub unoccupied: [f64; 2],
    pub n_e: usize,
    pub seed: u64,
}

impl GappedParams {
    /// Spectrum `[-1, -gap/2] U [gap/2, 1]`, half filled.
    pub fn symmetric(n: usize, m: usize, gap: f64, seed: u64) -> Self {
        Self {
            n,
            m,
            occupied: [-1.0, -0.5 * gap],
            unoccupied: [0.5 * gap, 1.0],
            n_e: n / 2,
            seed,
        }
    }
}

/// Output of [`gapped_random`].
#[derive(Debug, Clone)]
pub struct GappedRandom {
    pub h: SparseHermitian,
    /// Model built from the sampling intervals, which enclose the drawn
    /// eigenvalues; `mu` is the midpoint of the gap.
    pub model: SpectralModel,
    /// The drawn eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
}

/// Haar-distributed orthogonal matrix (rows orthonormal), by modified
/// Gram-Schmidt with reorthogonalization on Gaussian rows.
fn haar_orthogonal(n: usize, rng: &mut ChaCha20Rng) -> DenseMatrix<f64> {
    let data: Vec<f64> = (0..n * n).map(|_| rng.sample(StandardNormal)).collect();
    let mut q = DenseMatrix::from_vec(n, n, data);
    for k in 0..n {
        for _ in 0..2 {
            for p in 0..k {
                let (rp, rk) = q.two_rows_mut(p, k);
                let c: f64 = rp.iter().zip(rk.iter()).map(|(a, b)| a * b).sum();
                rk.iter_mut().zip(rp.iter()).for_each(|(x, y)| *x -= c * y);
            }
        }
        let row = q.row_mut(k);
        let nrm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        row.iter_mut().for_each(|x| *x /= nrm);
    }
    q
}

/// Random Hermitian matrix with prescribed gapped spectrum and bandwidth.
///
/// Eigenvalues are drawn uniformly in the two intervals, conjugated by a
/// seeded Haar orthogonal matrix and Householder-reduced to bandwidth `m`.
pub fn gapped_random(p: &GappedParams) -> Result<GappedRandom> {
    let [o0, o1] = p.occupied;
    let [v0, v1] = p.unoccupied;
    if !(o0 <= o1 && o1 < v0 && v0 <= v1) {
        return Err(Error::invalid(
            "gapped_random",
            format!("intervals [{o0}, {o1}] and [{v0}, {v1}] must be ordered and disjoint"),
        ));
    }
    if p.n < 2 || p.n_e == 0 || p.n_e >= p.n || p.m == 0 {
        return Err(Error::invalid(
            "gapped_random",
            format!("need n >= 2, 0 < n_e < n, m >= 1 (n = {}, n_e = {}, m = {})", p.n, p.n_e, p.m),
        ));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(p.seed);
    let mut eig: Vec<f64> = (0..p.n)
        .map(|k| {
            let (a, b) = if k < p.n_e { (o0, o1) } else { (v0, v1) };
            if a == b {
                a
            } else {
                rng.gen_range(a..=b)
            }
        })
        .collect();
    let q = haar_orthogonal(p.n, &mut rng);
    let mut w = q.clone();
    for (k, &l) in eig.iter().enumerate() {
        w.row_mut(k).iter_mut().for_each(|x| *x *= l);
    }
    let mut a = q.adjoint().matmul(&w);
    a.symmetrize();
    let m = p.m.min(p.n - 1);
    reduce_to_band(&mut a, m, false)?;
    let mut entries = Vec::new();
    for i in 0..p.n {
        for j in i..(i + m + 1).min(p.n) {
            entries.push((i, j, a[(i, j)]));
        }
    }
    let h = SparseHermitian::from_real_triplets(p.n, entries)?.with_bandwidth_hint(m);
    eig.sort_by(f64::total_cmp);
    let model = SpectralModel::new(o0, v1, 0.5 * (o1 + v0), o1, v0, p.n_e)?;
    Ok(GappedRandom {
        h,
        model,
        eigenvalues: eig,
    })
}

/// Phase pattern of [`synthetic_decay`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    /// All entries `c exp(-alpha |i-j|)`.
    Exact,
    /// Random signs on off-diagonal entries.
    Sign,
    /// Random complex unit phases on off-diagonal entries.
    Complex,
}

/// Hermitian matrix with `|A_ij| = c exp(-alpha |i - j|)`.
pub fn synthetic_decay(n: usize, c: f64, alpha: f64, phase: Phase, seed: u64) -> Result<SparseHermitian> {
    if n == 0 || !(c > 0.0) || !(alpha > 0.0) {
        return Err(Error::invalid(
            "synthetic_decay",
            format!("need n > 0, c > 0, alpha > 0 (got {n}, {c}, {alpha})"),
        ));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut e = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let mag = c * (-alpha * (j - i) as f64).exp();
            if mag < f64::MIN_POSITIVE {
                continue;
            }
            let v = if i == j {
                Complex64::new(mag, 0.0)
            } else {
                match phase {
                    Phase::Exact => Complex64::new(mag, 0.0),
                    Phase::Sign => Complex64::new(if rng.gen::<bool>() { mag } else { -mag }, 0.0),
                    Phase::Complex => Complex64::from_polar(mag, rng.gen_range(0.0..std::f64::consts::TAU)),
                }
            };
            e.push((i, j, v));
        }
    }
    SparseHermitian::from_triplets(n, e)
}

/// Random `m`-banded SPD matrix with condition number `kappa` and unit
/// maximal diagonal.
pub fn banded_spd(n: usize, m: usize, kappa: f64, seed: u64) -> Result<SparseHermitian> {
    if n < 2 || m == 0 || !(kappa > 1.0) || !kappa.is_finite() {
        return Err(Error::invalid(
            "banded_spd",
            format!("need n >= 2, m >= 1, kappa > 1 (got {n}, {m}, {kappa})"),
        ));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut b = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..(i + m + 1).min(n) {
            let v: f64 = rng.gen_range(-1.0..1.0);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    let eig = symmetric_eigenvalues(&b)?;
    let (lo, hi) = (eig[0], eig[n - 1]);
    if !(hi > lo) {
        return Err(Error::invalid("banded_spd", "degenerate random draw"));
    }
    let shift = (hi - kappa * lo) / (kappa - 1.0);
    for i in 0..n {
        b[(i, i)] += shift;
    }
    let dmax = (0..n).map(|i| b[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
    let mut e = Vec::new();
    for i in 0..n {
        for j in i..(i + m + 1).min(n) {
            e.push((i, j, b[(i, j)] / dmax));
        }
    }
    Ok(SparseHermitian::from_real_triplets(n, e)?.with_bandwidth_hint(m))
}
