//! Achieser's bound on the best uniform polynomial approximation of a
//! function whose real part is bounded by one inside a Bernstein ellipse.

use super::decay::{BoundFamily, DecayBound, Metric, Shape};
use super::ellipse::{ellipse_max, FermiDirac};
use crate::error::{Error, Result};
use std::f64::consts::PI;

const MAX_TERMS: usize = 10_000_000;

/// Number of series terms: smallest `nu0` with `r^nu0 < tau (1 - r)`,
/// `r = chi^{-(k+1)/2}`.
pub fn achieser_terms(chi: f64, k: f64, tau: f64) -> usize {
    let r = chi.powf(-(k + 1.0) / 2.0);
    if r <= 0.0 {
        return 1;
    }
    let target = tau * (1.0 - r);
    if !(target > 0.0) {
        return MAX_TERMS;
    }
    let nu = (target.ln() / r.ln()).ceil();
    if nu.is_finite() {
        (nu.max(1.0) as usize + 1).min(MAX_TERMS)
    } else {
        MAX_TERMS
    }
}

/// `(4/pi) sum_nu (-1)^nu / ((2nu+1) cosh((2nu+1)(k+1) ln chi))`, truncated
/// by [`achieser_terms`].
pub fn achieser_series(chi: f64, k: f64, tau: f64) -> f64 {
    let l = (k + 1.0) * chi.ln();
    let terms = achieser_terms(chi, k, tau);
    let mut s = 0.0;
    for nu in 0..terms {
        let o = (2 * nu + 1) as f64;
        let arg = o * l;
        if arg > 700.0 {
            break;
        }
        let t = 1.0 / (o * arg.cosh());
        s += if nu % 2 == 0 { t } else { -t };
    }
    4.0 / PI * s
}

fn check_fd(beta: f64, mu: f64, chi: f64) -> Result<FermiDirac> {
    let f = FermiDirac::new(beta, mu)?;
    let chi_bar = f.chi_bar();
    if !(chi > 1.0 && chi < chi_bar) {
        return Err(Error::InadmissibleChi { chi, chi_bar });
    }
    let re_max = ellipse_max(|z| f.eval(z).re.abs(), chi)?;
    if !(re_max < 1.0) {
        return Err(Error::precondition(
            "achieser_bound",
            format!("max |Re f| = {re_max} on the ellipse with chi = {chi} is not below 1"),
        ));
    }
    Ok(f)
}

/// Achieser bound on `E_k(f_FD)` for degree `k`.
pub fn achieser_bound(beta: f64, mu: f64, chi: f64, k: usize, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    check_fd(beta, mu, chi)?;
    Ok(achieser_series(chi, k as f64, tau))
}

/// Entry bound for `f_FD(H)`: the series with `d + 1` in place of `k + 1`.
pub fn achieser_decay(beta: f64, mu: f64, chi: f64, tau: f64, metric: Metric) -> Result<DecayBound> {
    check_tau(tau)?;
    check_fd(beta, mu, chi)?;
    Ok(DecayBound {
        family: BoundFamily::Achieser,
        metric,
        shape: Shape::Achieser { chi, tau },
    })
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("achieser", format!("tau = {tau} must lie in (0, 1)")))
    }
}
