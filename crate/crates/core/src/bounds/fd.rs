//! Bernstein-type bounds for the Fermi-Dirac function and the spectral
//! projector.

use super::decay::{envelope, BoundFamily, DecayBound, Metric, Shape};
use super::ellipse::{chi_bar_fd, ellipse_max_fd};
use crate::error::{Error, Result};
use crate::matrix::SpectralModel;
use crate::par;
use serde::Serialize;

/// Default distance at which the automatic `chi` minimizes the bound.
pub const DEFAULT_TARGET_DISTANCE: f64 = 10.0;

const CHI_GRID: usize = 100;
const CHI_MARGIN: f64 = 1e-6;

/// Inverse temperature at which `f_FD` is within `delta` of the step
/// function outside `(mu - gamma/2, mu + gamma/2)`:
/// `(2 / gamma) ln((1 - delta) / delta)`.
pub fn beta_from_gap(gamma: f64, delta: f64) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::invalid("beta_from_gap", format!("gap {gamma} must be positive")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::invalid(
            "beta_from_gap",
            format!("delta = {delta} must lie in (0, 1/2)"),
        ));
    }
    Ok(2.0 / gamma * ((1.0 - delta) / delta).ln())
}

/// Chebyshev truncation error bound `2M / (chi^k (chi - 1))`.
pub fn bernstein_error(m: f64, chi: f64, k: usize) -> f64 {
    2.0 * m / (chi.powi(k as i32) * (chi - 1.0))
}

fn rate(chi: f64, metric: Metric) -> f64 {
    chi.ln() / metric.step()
}

/// `|[f_FD(H)]_ij| <= c exp(-alpha d)` with `c = 2 chi M(chi) / (chi - 1)`
/// and `alpha = ln(chi) / m` (band) or `ln(chi)` (graph).
pub fn bernstein_fd_bound(beta: f64, mu: f64, chi: f64, metric: Metric) -> Result<DecayBound> {
    let m = ellipse_max_fd(beta, mu, chi)?;
    let c = 2.0 * chi * m / (chi - 1.0);
    Ok(DecayBound::exponential(
        BoundFamily::Bernstein,
        metric,
        c,
        rate(chi, metric),
    ))
}

/// Log-spaced admissible grid in `(1 + 1e-6, chi_bar - 1e-6)`.
pub fn chi_grid(chi_bar: f64, points: usize) -> Result<Vec<f64>> {
    let hi = chi_bar - 1.0 - CHI_MARGIN;
    if !(hi > CHI_MARGIN) {
        return Err(Error::invalid(
            "auto_chi",
            format!("admissible interval (1, {chi_bar}) too narrow"),
        ));
    }
    let (l0, l1) = (CHI_MARGIN.ln(), hi.ln());
    Ok((0..points)
        .map(|k| 1.0 + (l0 + (l1 - l0) * k as f64 / (points - 1) as f64).exp())
        .collect())
}

/// The `chi` on a 100-point grid minimizing the Bernstein bound at
/// `target_distance`, with its bound.
pub fn auto_chi(beta: f64, mu: f64, metric: Metric, target_distance: f64) -> Result<(f64, DecayBound)> {
    let chi_bar = chi_bar_fd(beta, mu);
    let grid = chi_grid(chi_bar, CHI_GRID)?;
    let bounds = par::map_slice(&grid, |&chi| bernstein_fd_bound(beta, mu, chi, metric));
    let mut best: Option<(f64, DecayBound, f64)> = None;
    for (chi, b) in grid.into_iter().zip(bounds) {
        let b = b?;
        let v = b.eval(target_distance);
        if best.as_ref().is_none_or(|(_, _, bv)| v < *bv) {
            best = Some((chi, b, v));
        }
    }
    let (chi, b, _) = best.expect("grid is non-empty");
    Ok((chi, b))
}

/// How `chi` is chosen for the projector bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ChiChoice {
    Fixed { chi: f64 },
    Auto { target_distance: f64 },
}

impl Default for ChiChoice {
    fn default() -> Self {
        ChiChoice::Auto {
            target_distance: DEFAULT_TARGET_DISTANCE,
        }
    }
}

/// Projector bound with the parameters it was built from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorBound {
    pub bound: DecayBound,
    pub beta: f64,
    pub chi: f64,
    pub chi_bar: f64,
    /// Gap used for `beta`: `2 min(mu - eps_minus, eps_plus - mu)`.
    pub gamma: f64,
    pub delta: f64,
}

/// `|P_ij| <= min(1, c exp(-alpha d)) + delta` for the spectral projector
/// of a normalized gapped operator, via `f_FD` at
/// `beta = beta_from_gap(gamma, delta)`.
pub fn projector_bound(
    spec: &SpectralModel,
    delta: f64,
    chi: ChiChoice,
    metric: Metric,
) -> Result<ProjectorBound> {
    let tol = 1e-10;
    if spec.lo < -1.0 - tol || spec.hi > 1.0 + tol {
        return Err(Error::NotNormalized {
            lo: spec.lo,
            hi: spec.hi,
        });
    }
    let gamma = spec.effective_gap();
    let beta = beta_from_gap(gamma, delta)?;
    let chi_bar = chi_bar_fd(beta, spec.mu);
    let (chi, b) = match chi {
        ChiChoice::Fixed { chi } => (chi, bernstein_fd_bound(beta, spec.mu, chi, metric)?),
        ChiChoice::Auto { target_distance } => auto_chi(beta, spec.mu, metric, target_distance)?,
    };
    let (c, alpha) = b.exp_constants().expect("exponential");
    Ok(ProjectorBound {
        bound: DecayBound {
            family: BoundFamily::Projector,
            metric,
            shape: Shape::Projector { c, alpha, delta },
        },
        beta,
        chi,
        chi_bar,
        gamma,
        delta,
    })
}

/// Envelope of Bernstein bounds over the given `chi` values.
pub fn fd_envelope(beta: f64, mu: f64, metric: Metric, chis: &[f64]) -> Result<DecayBound> {
    let parts = par::map_slice(chis, |&chi| bernstein_fd_bound(beta, mu, chi, metric))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    envelope(parts)
}
