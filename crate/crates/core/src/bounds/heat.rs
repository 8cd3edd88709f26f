//! Decay of `exp(-beta H)` for `H` with spectrum in `[0, ||H||]`.

use super::decay::{BoundFamily, DecayBound, Metric};
use super::ellipse::EllipseParam;
use crate::error::{Error, Result};

/// `c = (2 chi / (chi - 1)) exp(beta ||H|| (kappa1 - 1) / 2)` with rate
/// `ln(chi) / m` (band) or `ln(chi)` (graph), for any `chi > 1`.
///
/// `H` must be shifted so that its spectrum lies in `[0, norm_h]`.
pub fn heat_bound(beta: f64, norm_h: f64, chi: f64, metric: Metric) -> Result<DecayBound> {
    if !(beta > 0.0 && norm_h > 0.0) || !beta.is_finite() || !norm_h.is_finite() {
        return Err(Error::invalid(
            "heat_bound",
            format!("need beta > 0 and ||H|| > 0, got {beta}, {norm_h}"),
        ));
    }
    let e = EllipseParam::new(chi)?;
    let m = (beta * norm_h * (e.kappa1 - 1.0) / 2.0).exp();
    let c = 2.0 * chi / (chi - 1.0) * m;
    Ok(DecayBound::exponential(
        BoundFamily::Heat,
        metric,
        c,
        chi.ln() / metric.step(),
    ))
}
