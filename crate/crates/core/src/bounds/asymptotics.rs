//! Small-gap and low-temperature behaviour of the decay rates.

use super::ellipse::chi_bar_fd;
use serde::Serialize;
use std::f64::consts::PI;

/// Decay rate `atanh(a)` of the zero-temperature bound against its
/// expansion `a + a^3 / 3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapAsymptotics {
    pub a: f64,
    pub alpha_exact: f64,
    pub alpha_series: f64,
    pub remainder: f64,
}

pub fn gap_asymptotics(a: f64) -> GapAsymptotics {
    let exact = a.atanh();
    let series = a + a.powi(3) / 3.0;
    GapAsymptotics {
        a,
        alpha_exact: exact,
        alpha_series: series,
        remainder: exact - series,
    }
}

/// `ln chi_bar(beta, 0)` against its large-`beta` limit `pi / beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TemperatureAsymptotics {
    pub beta: f64,
    pub decay_length: f64,
    pub linear_model: f64,
    /// `decay_length / linear_model`, which tends to 1.
    pub ratio: f64,
}

pub fn temperature_asymptotics(beta: f64) -> TemperatureAsymptotics {
    let x = PI / beta;
    // Same value as chi_bar_fd(beta, 0).ln(), without the cancellation.
    let decay = x.asinh();
    debug_assert!((decay - chi_bar_fd(beta, 0.0).ln()).abs() <= 1e-9 * decay.max(1e-300) + 1e-12);
    TemperatureAsymptotics {
        beta,
        decay_length: decay,
        linear_model: x,
        ratio: decay / x,
    }
}
