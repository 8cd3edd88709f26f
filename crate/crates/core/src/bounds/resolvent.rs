//! Decay of the spectral projector through the resolvent on a contour.
//!
//! For `z` on the contour, `A = zI - H` is normal with singular values in
//! `[smin, smax]`, `smin >= dist(z, [lo, eps-] U [eps+, hi])` and
//! `smax <= max(|z - lo|, |z - hi|)`. Writing `A^{-1} = A* (A A*)^{-1}` and
//! bounding `(A A*)^{-1}` (bandwidth `2m`) by the inverse-decay constants
//! gives `|[A^{-1}]_ij| <= c(z) lambda(z)^{|i-j|}`, which is integrated
//! over the contour.

use super::decay::{BoundFamily, DecayBound, Metric};
use super::demko::demko_constants;
use crate::error::{Error, Result};
use crate::matrix::SpectralModel;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Circle in the complex plane with a real centre.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Circle {
    pub center: f64,
    pub radius: f64,
}

impl Circle {
    /// Trapezoidal node `k` of `n`, at angle `2 pi (k + 1/2) / n`.
    pub fn node(&self, k: usize, n: usize) -> Complex64 {
        let t = 2.0 * PI * (k as f64 + 0.5) / n as f64;
        Complex64::new(self.center, 0.0) + Complex64::from_polar(self.radius, t)
    }

    /// Check that the circle encloses `[lo, eps_minus]` and excludes
    /// `[eps_plus, hi]`.
    pub fn validate(&self, spec: &SpectralModel) -> Result<()> {
        let left = self.center - self.radius;
        let right = self.center + self.radius;
        if !(self.radius > 0.0 && left < spec.lo && right > spec.eps_minus && right < spec.eps_plus) {
            return Err(Error::precondition(
                "contour",
                format!(
                    "circle [{left}, {right}] must enclose [{}, {}] and exclude [{}, {}]",
                    spec.lo, spec.eps_minus, spec.eps_plus, spec.hi
                ),
            ));
        }
        Ok(())
    }
}

/// Centre `(lo + mu) / 2`, radius `(mu - lo) / 2 + gamma / 4` with the
/// effective gap: the circle crosses the axis at `lo - gamma/4` and
/// `mu + gamma/4`.
pub fn default_circle(spec: &SpectralModel) -> Circle {
    let g = spec.effective_gap();
    Circle {
        center: 0.5 * (spec.lo + spec.mu),
        radius: 0.5 * (spec.mu - spec.lo) + 0.25 * g,
    }
}

fn dist_to_segment(z: Complex64, p: f64, q: f64) -> f64 {
    (z - Complex64::new(z.re.clamp(p, q), 0.0)).norm()
}

/// Exponential bound `C lambda^{|i-j|}` on the projector of an `m`-banded
/// operator, with `samples` points on the contour plus its two real-axis
/// crossings.
pub fn resolvent_contour_bound(
    spec: &SpectralModel,
    m: usize,
    circle: Option<Circle>,
    samples: usize,
) -> Result<DecayBound> {
    if m == 0 || samples == 0 {
        return Err(Error::invalid("resolvent_contour_bound", "m and samples must be positive"));
    }
    let circle = circle.unwrap_or_else(|| default_circle(spec));
    circle.validate(spec)?;
    let mut c_max = 0.0f64;
    let mut lambda_max = 0.0f64;
    // The axis crossings are the contour points nearest the spectrum.
    let crossings = [
        Complex64::new(circle.center + circle.radius, 0.0),
        Complex64::new(circle.center - circle.radius, 0.0),
    ];
    for z in (0..samples).map(|k| circle.node(k, samples)).chain(crossings) {
        let smin = dist_to_segment(z, spec.lo, spec.eps_minus)
            .min(dist_to_segment(z, spec.eps_plus, spec.hi));
        let smax = (z - spec.lo).norm().max((z - spec.hi).norm());
        if !(smin > 0.0) {
            return Err(Error::precondition(
                "resolvent_contour_bound",
                "contour touches the spectrum",
            ));
        }
        let d = demko_constants(smin * smin, smax * smax, 2 * m)?;
        let c = (2 * m + 1) as f64 * smax * d.k * d.lambda.powi(-(m as i32));
        c_max = c_max.max(c);
        lambda_max = lambda_max.max(d.lambda);
    }
    if !(lambda_max < 1.0) {
        return Err(Error::precondition(
            "resolvent_contour_bound",
            format!("decay factor {lambda_max} is not below 1"),
        ));
    }
    let length = 2.0 * PI * circle.radius;
    Ok(DecayBound::exponential(
        BoundFamily::Resolvent,
        Metric::Band { m },
        c_max * length / (2.0 * PI),
        -lambda_max.ln(),
    ))
}
