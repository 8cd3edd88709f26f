//! Spectral models, interval estimation and normalization to `[-1, 1]`.

use super::SparseHermitian;
use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen_rows;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// Spectrum description of a gapped Hermitian operator.
///
/// Invariant: `lo <= eps_minus < mu < eps_plus <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    pub lo: f64,
    pub hi: f64,
    pub mu: f64,
    /// Highest occupied eigenvalue.
    pub eps_minus: f64,
    /// Lowest unoccupied eigenvalue.
    pub eps_plus: f64,
    /// Number of eigenvalues below `mu`.
    pub n_e: usize,
    /// Inverse temperature, when a Fermi-Dirac model is attached.
    pub beta: Option<f64>,
}

impl SpectralModel {
    pub fn new(lo: f64, hi: f64, mu: f64, eps_minus: f64, eps_plus: f64, n_e: usize) -> Result<Self> {
        let vals = [lo, hi, mu, eps_minus, eps_plus];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("SpectralModel::new", "non-finite parameter"));
        }
        if !(lo <= eps_minus && eps_minus < mu && mu < eps_plus && eps_plus <= hi) {
            return Err(Error::invalid(
                "SpectralModel::new",
                format!(
                    "need lo <= eps_minus < mu < eps_plus <= hi, got {lo}, {eps_minus}, {mu}, {eps_plus}, {hi}"
                ),
            ));
        }
        Ok(Self {
            lo,
            hi,
            mu,
            eps_minus,
            eps_plus,
            n_e,
            beta: None,
        })
    }

    /// Model of a known spectrum split at `mu`.
    pub fn from_eigenvalues(eigs: &[f64], mu: f64) -> Result<Self> {
        let below = eigs.iter().copied().filter(|&x| x < mu);
        let above = eigs.iter().copied().filter(|&x| x > mu);
        let eps_minus = below.clone().fold(f64::NEG_INFINITY, f64::max);
        let eps_plus = above.fold(f64::INFINITY, f64::min);
        if !eps_minus.is_finite() || !eps_plus.is_finite() {
            return Err(Error::invalid(
                "SpectralModel::from_eigenvalues",
                "mu must have eigenvalues on both sides",
            ));
        }
        if let Some(&x) = eigs.iter().find(|&&x| x == mu) {
            return Err(Error::EigenvalueAtFermiLevel {
                mu,
                eigenvalue: x,
                tol: 0.0,
            });
        }
        let lo = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::new(lo, hi, mu, eps_minus, eps_plus, below.count())
    }

    /// Model with the lowest `n_e` eigenvalues occupied and `mu` at the
    /// midpoint of the gap.
    pub fn from_eigenvalues_count(eigs: &[f64], n_e: usize) -> Result<Self> {
        let mut s = eigs.to_vec();
        s.sort_by(f64::total_cmp);
        if n_e == 0 || n_e >= s.len() {
            return Err(Error::invalid(
                "SpectralModel::from_eigenvalues_count",
                format!("n_e = {n_e} must be in 1..{}", s.len()),
            ));
        }
        let (em, ep) = (s[n_e - 1], s[n_e]);
        if em >= ep {
            return Err(Error::invalid(
                "SpectralModel::from_eigenvalues_count",
                "no gap between occupied and unoccupied eigenvalues",
            ));
        }
        Self::new(s[0], s[s.len() - 1], 0.5 * (em + ep), em, ep, n_e)
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    /// Absolute gap `eps_plus - eps_minus`.
    pub fn gap(&self) -> f64 {
        self.eps_plus - self.eps_minus
    }

    /// `2 min(mu - eps_minus, eps_plus - mu)`: the gap of the symmetric
    /// window around `mu`, equal to [`Self::gap`] when `mu` is centred.
    pub fn effective_gap(&self) -> f64 {
        2.0 * (self.mu - self.eps_minus).min(self.eps_plus - self.mu)
    }

    /// The model in the coordinates where `[lo, hi]` maps to `[-1, 1]`.
    pub fn normalized(&self) -> Result<(Self, AffineMap)> {
        let map = AffineMap::to_unit(self.lo, self.hi)?;
        let beta = self.beta.map(|b| b / map.scale);
        Ok((
            Self {
                lo: -1.0,
                hi: 1.0,
                mu: map.apply(self.mu),
                eps_minus: map.apply(self.eps_minus),
                eps_plus: map.apply(self.eps_plus),
                n_e: self.n_e,
                beta,
            },
            map,
        ))
    }

    /// Occupation density `n_b = n / n_e`.
    pub fn n_b(&self, n: usize) -> f64 {
        n as f64 / self.n_e as f64
    }
}

/// Affine map `x -> scale * x + shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub scale: f64,
    pub shift: f64,
}

impl AffineMap {
    /// The map sending `[lo, hi]` onto `[-1, 1]`.
    pub fn to_unit(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::DegenerateInterval { lo, hi });
        }
        let w = hi - lo;
        Ok(Self {
            scale: 2.0 / w,
            shift: -(lo + hi) / w,
        })
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.shift
    }

    #[inline]
    pub fn invert(&self, y: f64) -> f64 {
        (y - self.shift) / self.scale
    }
}

/// `(2 / (hi - lo)) H - ((lo + hi) / (hi - lo)) I`.
pub fn normalize(h: &SparseHermitian, lo: f64, hi: f64) -> Result<(SparseHermitian, AffineMap)> {
    let map = AffineMap::to_unit(lo, hi)?;
    Ok((h.scale_shift(map.scale, map.shift), map))
}

/// How a [`SpectralInterval`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalMethod {
    Lanczos,
    Gershgorin,
}

/// Enclosure `[lo, hi]` of the spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralInterval {
    pub lo: f64,
    pub hi: f64,
    pub method: IntervalMethod,
    /// Extreme Ritz values, when Lanczos ran.
    pub ritz: Option<(f64, f64)>,
}

/// Gershgorin disc enclosure.
pub fn gershgorin_interval(h: &SparseHermitian) -> (f64, f64) {
    let n = h.n();
    let mut radius = vec![0.0; n];
    let mut center = vec![0.0; n];
    for (i, j, v) in h.iter_upper() {
        if i == j {
            center[i] = v.re;
        } else {
            let m = v.norm();
            radius[i] += m;
            radius[j] += m;
        }
    }
    let lo = (0..n).map(|i| center[i] - radius[i]).fold(f64::INFINITY, f64::min);
    let hi = (0..n).map(|i| center[i] + radius[i]).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

const LANCZOS_STEPS: usize = 60;
/// Cap on `n * steps^2`, the cost of the reorthogonalized run.
const LANCZOS_WORK: usize = 2_000_000_000;
const SAFETY: f64 = 0.01;

/// Spectrum enclosure from a Lanczos run with full reorthogonalization.
///
/// The run starts with 60 steps and doubles while the extreme Ritz pairs
/// have not converged, within a fixed work budget. Extreme Ritz values are
/// widened by their residual plus 1% of the width and intersected with the
/// Gershgorin interval. If the extreme residuals stay large the Gershgorin
/// interval is returned.
pub fn spectral_interval(h: &SparseHermitian) -> Result<SpectralInterval> {
    if h.n() == 0 {
        return Err(Error::invalid("spectral_interval", "empty matrix"));
    }
    let (g_lo, g_hi) = gershgorin_interval(h);
    let gersh = SpectralInterval {
        lo: g_lo,
        hi: g_hi,
        method: IntervalMethod::Gershgorin,
        ritz: None,
    };
    let real = h.real_form();
    let a = real.to_full_csr();
    let n = a.n;
    let mut max_steps = LANCZOS_STEPS.min(n);
    while max_steps < n && n.saturating_mul(4 * max_steps * max_steps) <= LANCZOS_WORK {
        max_steps = (2 * max_steps).min(n);
    }

    let mut rng = ChaCha20Rng::seed_from_u64(0x5eed_1a2c);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nq = dot(&q, &q).sqrt();
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_steps);
    let mut alpha = Vec::with_capacity(max_steps);
    let mut beta: Vec<f64> = Vec::with_capacity(max_steps);
    let mut w = vec![0.0; n];
    let mut checkpoint = LANCZOS_STEPS.min(n);
    loop {
        let k = alpha.len();
        a.matvec(&q, &mut w);
        let ak = dot(&w, &q);
        alpha.push(ak);
        basis.push(q.clone());
        // Two passes of Gram-Schmidt against the whole basis.
        for _ in 0..2 {
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let bk = dot(&w, &w).sqrt();
        let exhausted = bk <= 1e-12 * (g_hi - g_lo).abs().max(1e-300);
        if k + 1 == checkpoint || k + 1 == max_steps || exhausted {
            let (theta, last) = tridiagonal_eigen_rows(&alpha, &beta, &[k])?;
            let (t_lo, t_hi) = (theta[0], theta[k]);
            let r_lo = (bk * last[(0, 0)]).abs();
            let r_hi = (bk * last[(0, k)]).abs();
            let width = (t_hi - t_lo).max(0.0);
            let scale = width.max(t_lo.abs()).max(t_hi.abs()).max(f64::MIN_POSITIVE);
            if r_lo.max(r_hi) <= 1e-3 * scale {
                return Ok(SpectralInterval {
                    lo: (t_lo - r_lo - SAFETY * width).max(g_lo),
                    hi: (t_hi + r_hi + SAFETY * width).min(g_hi),
                    method: IntervalMethod::Lanczos,
                    ritz: Some((t_lo, t_hi)),
                });
            }
            if k + 1 >= max_steps || exhausted {
                return Ok(gersh);
            }
            checkpoint = (2 * checkpoint).min(max_steps);
        }
        beta.push(bk);
        q = w.iter().map(|x| x / bk).collect();
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
