//! Zero-temperature bounds for spectra `[-b, -a] U [a, b]`.

use super::decay::{BoundFamily, DecayBound, Metric, Shape};
use crate::error::{Error, Result};

fn check_ab(op: &'static str, a: f64, b: f64) -> Result<()> {
    if a > 0.0 && b > a && b.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(op, format!("need 0 < a < b, got a = {a}, b = {b}")))
    }
}

/// Asymptotic shape `k exp(-xi d) / (2 sqrt(d))`, `xi = ln((b+a)/(b-a)) / 2`.
///
/// Only the shape is known; `k` is supplied by the caller (1 by default).
pub fn hasson_bound(a: f64, b: f64, k: f64, metric: Metric) -> Result<DecayBound> {
    check_ab("hasson_bound", a, b)?;
    if !(k > 0.0) {
        return Err(Error::invalid("hasson_bound", "k must be positive"));
    }
    let xi = 0.5 * ((b + a) / (b - a)).ln();
    Ok(DecayBound {
        family: BoundFamily::Hasson,
        metric,
        shape: Shape::Hasson { k, xi },
    })
}

/// Upper end `(b + a) / (b - a)` of the admissible `xi` range.
pub fn chui_hasson_xi_bar(a: f64, b: f64) -> f64 {
    (b + a) / (b - a)
}

/// Constant `C = sqrt(xi) K4 b`, `K4 = 2M / (xi - 1)`, `M = 1 / sqrt(z0)`.
fn chui_hasson_constant(a: f64, b: f64, xi: f64) -> f64 {
    let (a2, b2) = (a * a, b * b);
    let z0 = (-(xi + 1.0 / xi) / 2.0 + (a2 + b2) / (b2 - a2)) * (b2 - a2) / 2.0;
    let m = 1.0 / z0.sqrt();
    let k4 = 2.0 * m / (xi - 1.0);
    xi.sqrt() * k4 * b
}

/// `C xi^{-d / (2m)}` (band) or `C xi^{-d / 2}` (graph), `1 < xi < xi_bar`.
pub fn chui_hasson_bound(a: f64, b: f64, xi: f64, metric: Metric) -> Result<DecayBound> {
    check_ab("chui_hasson_bound", a, b)?;
    let xi_bar = chui_hasson_xi_bar(a, b);
    if !(xi > 1.0 && xi < xi_bar) {
        return Err(Error::InadmissibleChi { chi: xi, chi_bar: xi_bar });
    }
    let c = chui_hasson_constant(a, b, xi);
    Ok(DecayBound::exponential(
        BoundFamily::ChuiHasson,
        metric,
        c,
        xi.ln() / (2.0 * metric.step()),
    ))
}

/// Largest admissible `xi` (fastest rate) with `C <= c_max`.
pub fn chui_hasson_auto(a: f64, b: f64, c_max: f64, metric: Metric) -> Result<(f64, DecayBound)> {
    check_ab("chui_hasson_auto", a, b)?;
    let xi_bar = chui_hasson_xi_bar(a, b);
    let grid: Vec<f64> = (1..200)
        .map(|k| 1.0 + (xi_bar - 1.0) * k as f64 / 200.0)
        .collect();
    let (mut lo, cmin) = grid
        .iter()
        .map(|&x| (x, chui_hasson_constant(a, b, x)))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .expect("non-empty grid");
    if cmin > c_max {
        return Err(Error::precondition(
            "chui_hasson_auto",
            format!("smallest constant {cmin} exceeds {c_max}"),
        ));
    }
    // C increases from its minimum towards xi_bar; bisect C(xi) = c_max.
    let mut hi = xi_bar;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chui_hasson_constant(a, b, mid) <= c_max {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, chui_hasson_bound(a, b, lo, metric)?))
}
