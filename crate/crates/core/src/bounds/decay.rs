//! The common decay-bound representation.

use super::achieser::achieser_series;
use crate::error::{Error, Result};
use crate::matrix::{GraphDistance, UNREACHABLE};
use serde::Serialize;
use std::collections::BTreeMap;

/// Which theorem produced a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFamily {
    Bernstein,
    Projector,
    Achieser,
    Hasson,
    ChuiHasson,
    Resolvent,
    Heat,
    Demko,
    InverseCholesky,
    Product,
    /// Caller-supplied `c exp(-alpha d)`.
    Exponential,
    Envelope,
}

/// Distance used by a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Metric {
    /// `|i - j|` for a matrix of bandwidth `m`.
    Band { m: usize },
    /// Geodesic distance in the graph of the sparsity pattern.
    Graph,
}

impl Metric {
    /// Distance units per polynomial degree.
    pub fn step(&self) -> f64 {
        match *self {
            Metric::Band { m } => m.max(1) as f64,
            Metric::Graph => 1.0,
        }
    }
}

/// Functional form of a bound as a function of the distance `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    /// `c exp(-alpha d)`.
    Exponential { c: f64, alpha: f64 },
    /// `min(1, c exp(-alpha d)) + delta`.
    Projector { c: f64, alpha: f64, delta: f64 },
    /// `k exp(-xi d') / (2 sqrt(d'))` with `d' = d / step`.
    Hasson { k: f64, xi: f64 },
    /// Achieser series evaluated at degree index `d / step`.
    Achieser { chi: f64, tau: f64 },
    /// Pointwise minimum.
    Envelope { parts: Vec<DecayBound> },
}

/// An entrywise decay bound `|A_ij| <= B(dist(i, j))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayBound {
    pub family: BoundFamily,
    pub metric: Metric,
    pub shape: Shape,
}

/// Serializable snapshot of a bound: constants and `(d, B(d))` samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub family: BoundFamily,
    pub metric: Metric,
    pub constants: BTreeMap<String, f64>,
    pub samples: Vec<(usize, f64)>,
}

/// Result of checking a matrix against a bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub checked: usize,
    pub violations: usize,
    /// `max |a_ij| / (bound + floor)`.
    pub max_ratio: f64,
    /// `(i, j, |a_ij|, bound)` at the largest ratio.
    pub worst: Option<(usize, usize, f64, f64)>,
    pub floor: f64,
}

impl DecayBound {
    pub fn exponential(family: BoundFamily, metric: Metric, c: f64, alpha: f64) -> Self {
        Self {
            family,
            metric,
            shape: Shape::Exponential { c, alpha },
        }
    }

    /// Bound at distance `d` (in metric units).
    pub fn eval(&self, d: f64) -> f64 {
        let step = self.metric.step();
        match &self.shape {
            Shape::Exponential { c, alpha } => c * (-alpha * d).exp(),
            Shape::Projector { c, alpha, delta } => (c * (-alpha * d).exp()).min(1.0) + delta,
            Shape::Hasson { k, xi } => {
                let x = d / step;
                if x <= 0.0 {
                    f64::INFINITY
                } else {
                    k * (-xi * x).exp() / (2.0 * x.sqrt())
                }
            }
            Shape::Achieser { chi, tau } => achieser_series(*chi, d / step, *tau),
            Shape::Envelope { parts } => parts
                .iter()
                .map(|b| b.eval(d))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// `(c, alpha)` for exponential bounds.
    pub fn exp_constants(&self) -> Option<(f64, f64)> {
        match self.shape {
            Shape::Exponential { c, alpha } | Shape::Projector { c, alpha, .. } => Some((c, alpha)),
            _ => None,
        }
    }

    /// Distance between `i` and `j` under this bound's metric. Pairs beyond
    /// the table radius are assigned `radius + 1`, which keeps the bound
    /// conservative because every shape is nonincreasing.
    pub fn distance(&self, i: usize, j: usize, dist: Option<&GraphDistance>) -> Result<f64> {
        match self.metric {
            Metric::Band { .. } => Ok(i.abs_diff(j) as f64),
            Metric::Graph => {
                let table = dist.ok_or_else(|| {
                    Error::invalid("DecayBound::distance", "graph metric needs a distance table")
                })?;
                match table.get(i, j) {
                    Some(UNREACHABLE) => Ok((table.radius() + 1) as f64),
                    Some(d) => Ok(d as f64),
                    None => Err(Error::invalid(
                        "DecayBound::distance",
                        format!("no distance data for ({i}, {j})"),
                    )),
                }
            }
        }
    }

    /// Bound for entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize, dist: Option<&GraphDistance>) -> Result<f64> {
        Ok(self.eval(self.distance(i, j, dist)?))
    }

    /// `(d, B(d))` for `d = 1..=dmax`.
    pub fn samples(&self, dmax: usize) -> Vec<(usize, f64)> {
        (1..=dmax).map(|d| (d, self.eval(d as f64))).collect()
    }

    pub fn report(&self, dmax: usize) -> BoundReport {
        BoundReport {
            family: self.family,
            metric: self.metric,
            constants: self.constants(),
            samples: self.samples(dmax),
        }
    }

    /// Named constants, for reports.
    pub fn constants(&self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        match &self.shape {
            Shape::Exponential { c, alpha } => {
                m.insert("c".into(), *c);
                m.insert("alpha".into(), *alpha);
            }
            Shape::Projector { c, alpha, delta } => {
                m.insert("c".into(), *c);
                m.insert("alpha".into(), *alpha);
                m.insert("delta".into(), *delta);
            }
            Shape::Hasson { k, xi } => {
                m.insert("k".into(), *k);
                m.insert("xi".into(), *xi);
            }
            Shape::Achieser { chi, tau } => {
                m.insert("chi".into(), *chi);
                m.insert("tau".into(), *tau);
            }
            Shape::Envelope { parts } => {
                m.insert("parts".into(), parts.len() as f64);
            }
        }
        if let Metric::Band { m: bw } = self.metric {
            m.insert("bandwidth".into(), bw as f64);
        }
        m
    }

    /// Compare `|entry(i, j)|` against `bound + floor` for all pairs of an
    /// `n x n` matrix (diagonal included when `diagonal` is set).
    pub fn check(
        &self,
        n: usize,
        entry: impl Fn(usize, usize) -> f64,
        dist: Option<&GraphDistance>,
        floor: f64,
        diagonal: bool,
    ) -> Result<BoundCheck> {
        let mut out = BoundCheck {
            checked: 0,
            violations: 0,
            max_ratio: 0.0,
            worst: None,
            floor,
        };
        for i in 0..n {
            for j in 0..n {
                if i == j && !diagonal {
                    continue;
                }
                let a = entry(i, j).abs();
                let b = self.entry(i, j, dist)?;
                out.checked += 1;
                let ratio = a / (b + floor);
                if a > b + floor {
                    out.violations += 1;
                }
                if ratio > out.max_ratio {
                    out.max_ratio = ratio;
                    out.worst = Some((i, j, a, b));
                }
            }
        }
        Ok(out)
    }
}

/// Pointwise minimum of bounds sharing a metric.
pub fn envelope(bounds: Vec<DecayBound>) -> Result<DecayBound> {
    let metric = bounds
        .first()
        .ok_or_else(|| Error::invalid("envelope", "need at least one bound"))?
        .metric;
    if bounds.iter().any(|b| b.metric != metric) {
        return Err(Error::invalid("envelope", "bounds use different metrics"));
    }
    Ok(DecayBound {
        family: BoundFamily::Envelope,
        metric,
        shape: Shape::Envelope { parts: bounds },
    })
}

/// Smallest truncation bandwidth guaranteeing `||A - A^(m)||_1 <= eps` for
/// `|A_ij| <= c exp(-alpha |i - j|)`:
/// `floor((1 / alpha) ln(2c / ((1 - exp(-alpha)) eps)))`, clamped at 0.
pub fn prescribe_bandwidth(bound: &DecayBound, eps: f64) -> Result<usize> {
    let Shape::Exponential { c, alpha } = bound.shape else {
        return Err(Error::invalid(
            "prescribe_bandwidth",
            "bound must have the form c exp(-alpha d)",
        ));
    };
    if !(c > 0.0 && alpha > 0.0 && eps > 0.0) || !c.is_finite() || !alpha.is_finite() {
        return Err(Error::invalid(
            "prescribe_bandwidth",
            format!("need c > 0, alpha > 0, eps > 0; got c = {c}, alpha = {alpha}, eps = {eps}"),
        ));
    }
    let x = (2.0 * c / ((1.0 - (-alpha).exp()) * eps)).ln() / alpha;
    Ok(if x <= 0.0 { 0 } else { x.floor() as usize })
}
