//! Bernstein ellipses and the Fermi-Dirac function on them.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Bernstein ellipse with foci `-1, 1` and semi-axis sum `chi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipseParam {
    pub chi: f64,
    /// Semi-major axis `(chi + 1/chi) / 2`.
    pub kappa1: f64,
    /// Semi-minor axis `(chi - 1/chi) / 2`.
    pub kappa2: f64,
}

impl EllipseParam {
    pub fn new(chi: f64) -> Result<Self> {
        if !(chi > 1.0) || !chi.is_finite() {
            return Err(Error::invalid("EllipseParam::new", format!("chi = {chi} must exceed 1")));
        }
        Ok(Self {
            chi,
            kappa1: 0.5 * (chi + 1.0 / chi),
            kappa2: 0.5 * (chi - 1.0 / chi),
        })
    }

    /// `kappa1 cos t + i kappa2 sin t`.
    #[inline]
    pub fn point(&self, t: f64) -> Complex64 {
        Complex64::new(self.kappa1 * t.cos(), self.kappa2 * t.sin())
    }
}

/// Fermi-Dirac function `1 / (1 + exp(beta (z - mu)))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermiDirac {
    pub beta: f64,
    pub mu: f64,
}

impl FermiDirac {
    pub fn new(beta: f64, mu: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() || !mu.is_finite() {
            return Err(Error::invalid(
                "FermiDirac::new",
                format!("need beta > 0 and finite mu, got beta = {beta}, mu = {mu}"),
            ));
        }
        Ok(Self { beta, mu })
    }

    /// Evaluate without overflow for large `|beta (z - mu)|`.
    #[inline]
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = (z - self.mu) * self.beta;
        if w.re > 0.0 {
            let e = (-w).exp();
            e / (e + 1.0)
        } else {
            1.0 / (w.exp() + 1.0)
        }
    }

    #[inline]
    pub fn eval_real(&self, x: f64) -> f64 {
        let w = self.beta * (x - self.mu);
        if w > 0.0 {
            let e = (-w).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + w.exp())
        }
    }

    /// Regularity-ellipse parameter, see [`chi_bar_fd`].
    pub fn chi_bar(&self) -> f64 {
        chi_bar_fd(self.beta, self.mu)
    }
}

/// Largest `chi` for which `f_FD` is analytic inside the Bernstein ellipse:
/// the ellipse through the poles `mu +- i pi / beta`.
///
/// `[sqrt(A - b2 (1 - mu^2) + pi^2) + sqrt(A + b2 (1 + mu^2) + pi^2)] / (sqrt(2) beta)`
/// with `b2 = beta^2`, `A = sqrt((b2 (1 - mu^2) - pi^2)^2 + 4 pi^2 b2)`.
pub fn chi_bar_fd(beta: f64, mu: f64) -> f64 {
    let b2 = beta * beta;
    let p2 = PI * PI;
    let m2 = mu * mu;
    let a = ((b2 * (1.0 - m2) - p2).powi(2) + 4.0 * p2 * b2).sqrt();
    ((a - b2 * (1.0 - m2) + p2).sqrt() + (a + b2 * (1.0 + m2) + p2).sqrt())
        / (std::f64::consts::SQRT_2 * beta)
}

const SAMPLES: usize = 4096;

/// Maximum of `|f|` on the ellipse boundary: dense sampling followed by a
/// golden-section refinement around the best sample.
pub fn ellipse_max(f: impl Fn(Complex64) -> f64, chi: f64) -> Result<f64> {
    let e = EllipseParam::new(chi)?;
    let h = 2.0 * PI / SAMPLES as f64;
    let g = |t: f64| f(e.point(t));
    let (mut best_t, mut best) = (0.0, f64::NEG_INFINITY);
    for k in 0..SAMPLES {
        let t = k as f64 * h;
        let v = g(t);
        if v > best {
            best = v;
            best_t = t;
        }
    }
    if !best.is_finite() {
        return Ok(f64::INFINITY);
    }
    let (mut a, mut b) = (best_t - h, best_t + h);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (g(c), g(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = g(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = g(d);
        }
    }
    Ok(best.max(fc).max(fd))
}

/// `M(chi) = max |f_FD|` on the ellipse; requires `1 < chi < chi_bar`.
pub fn ellipse_max_fd(beta: f64, mu: f64, chi: f64) -> Result<f64> {
    let f = FermiDirac::new(beta, mu)?;
    let chi_bar = f.chi_bar();
    if !(chi > 1.0 && chi < chi_bar) {
        return Err(Error::InadmissibleChi { chi, chi_bar });
    }
    ellipse_max(|z| f.eval(z).norm(), chi)
}
