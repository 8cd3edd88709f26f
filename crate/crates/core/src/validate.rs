//! Acceptance checks.
//!
//! Each criterion is a deterministic function of a base seed and returns
//! named metrics alongside its verdict, so repeated runs can be compared.

use crate::bounds::{
    bernstein_error, beta_from_gap, chi_bar_fd, chui_hasson_xi_bar, demko_constants, ellipse_max_fd,
    gap_asymptotics, prescribe_bandwidth, projector_bound, BoundFamily, ChiChoice, DecayBound, Metric,
};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, DenseMatrix, LowerBand};
use crate::matrix::{norms, truncate_band, SparseHermitian, SpectralModel};
use crate::models::{gapped_random, toeplitz_1d, GappedParams};
use crate::orthobasis::product_decay_check;
use crate::projector::{
    cheb_coeffs_fd, contour_projector, difference, energy, energy_error_bounds, entry_count,
    entry_count_bound, oracle_projector, oracle_projector_block, two_norm, NormPair, Scaling,
};
use crate::par;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::str::FromStr;
use std::time::Instant;

/// Topic of a criterion, used by `--only`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Bounds,
    Toeplitz,
    Projector,
    Ortho,
    Asymptotics,
    Energy,
}

impl Group {
    pub const ALL: [Group; 6] = [
        Group::Bounds,
        Group::Toeplitz,
        Group::Projector,
        Group::Ortho,
        Group::Asymptotics,
        Group::Energy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Bounds => "bounds",
            Group::Toeplitz => "toeplitz",
            Group::Projector => "projector",
            Group::Ortho => "ortho",
            Group::Asymptotics => "asymptotics",
            Group::Energy => "energy",
        }
    }
}

impl FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Group::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::invalid("Group", format!("unknown group '{s}'")))
    }
}

/// Verdict and measurements of one criterion run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
            metrics: BTreeMap::new(),
        }
    }

    fn metric(mut self, key: &str, v: f64) -> Self {
        self.metrics.insert(key.to_string(), v);
        self
    }
}

/// A registered acceptance criterion.
#[derive(Clone, Copy)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub group: Group,
    /// Wall-clock budget, part of the verdict.
    pub time_limit_ms: Option<f64>,
    pub run: fn(u64) -> Result<Outcome>,
}

/// Result of running a [`Criterion`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub group: Group,
    pub passed: bool,
    pub detail: String,
    pub metrics: BTreeMap<String, f64>,
    pub elapsed_ms: f64,
    pub time_limit_ms: Option<f64>,
    pub error: Option<String>,
}

impl Criterion {
    pub fn evaluate(&self, seed: u64) -> CriterionResult {
        let t = Instant::now();
        let out = (self.run)(seed);
        let elapsed_ms = t.elapsed().as_secs_f64() * 1e3;
        let in_time = self.time_limit_ms.is_none_or(|l| elapsed_ms <= l);
        let (passed, detail, metrics, error) = match out {
            Ok(o) => {
                let detail = if in_time {
                    o.detail
                } else {
                    format!("{}; over time limit", o.detail)
                };
                (o.passed && in_time, detail, o.metrics, None)
            }
            Err(e) => (false, "error".to_string(), BTreeMap::new(), Some(e.to_string())),
        };
        CriterionResult {
            id: self.id,
            name: self.name,
            group: self.group,
            passed,
            detail,
            metrics,
            elapsed_ms,
            time_limit_ms: self.time_limit_ms,
            error,
        }
    }
}

/// All acceptance criteria in order.
pub fn criteria() -> Vec<Criterion> {
    let c = |id, name, group, time_limit_ms, run| Criterion {
        id,
        name,
        group,
        time_limit_ms,
        run,
    };
    vec![
        c(1, "chi-bar reproduction", Group::Bounds, Some(1.0), chi_bar_reproduction as fn(u64) -> Result<Outcome>),
        c(2, "bandwidth reproduction", Group::Bounds, Some(1.0), bandwidth_reproduction),
        c(3, "toeplitz exactness", Group::Toeplitz, Some(5e3), toeplitz_exactness),
        c(4, "toeplitz limit", Group::Toeplitz, Some(6e4), toeplitz_limit),
        c(5, "projector bound validity", Group::Bounds, Some(3e5), projector_bound_validity),
        c(6, "bernstein chain", Group::Bounds, None, bernstein_chain),
        c(7, "contour convergence", Group::Projector, None, contour_convergence),
        c(8, "inverse decay suite", Group::Ortho, None, demko_suite),
        c(9, "product decay", Group::Ortho, None, product_decay),
        c(10, "asymptotics", Group::Asymptotics, None, asymptotics),
        c(11, "disjoint-interval comparison", Group::Asymptotics, None, disjoint_intervals),
        c(12, "energy error estimate", Group::Energy, None, energy_estimate),
        c(13, "entry-count scaling", Group::Projector, None, entry_count_scaling),
    ]
}

/// Which criteria to run and how often.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateConfig {
    /// Empty means all groups.
    pub only: Vec<Group>,
    pub seed: u64,
    pub repeat: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            only: Vec::new(),
            seed: 0,
            repeat: 1,
        }
    }
}

/// Results of a validation run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub repeat: usize,
    /// Results of the first repetition.
    pub results: Vec<CriterionResult>,
    /// Verdicts and metrics identical across repetitions.
    pub deterministic: bool,
    pub passed: bool,
}

pub fn run(config: &ValidateConfig) -> ValidationReport {
    let selected: Vec<Criterion> = criteria()
        .into_iter()
        .filter(|c| config.only.is_empty() || config.only.contains(&c.group))
        .collect();
    let repeat = config.repeat.max(1);
    let runs: Vec<Vec<CriterionResult>> = (0..repeat)
        .map(|_| selected.iter().map(|c| c.evaluate(config.seed)).collect())
        .collect();
    let key = |r: &CriterionResult| (r.passed, r.metrics.clone(), r.error.clone());
    let deterministic = runs
        .iter()
        .all(|run| run.iter().zip(&runs[0]).all(|(a, b)| key(a) == key(b)));
    let results = runs.into_iter().next().unwrap_or_default();
    let passed = results.iter().all(|r| r.passed) && deterministic;
    ValidationReport {
        seed: config.seed,
        repeat,
        results,
        deterministic,
        passed,
    }
}

// Criteria.

fn chi_bar_reproduction(_: u64) -> Result<Outcome> {
    let v = chi_bar_fd(10.0, 0.0);
    let err = (v - 1.3623463).abs();
    Ok(Outcome::new(err <= 1e-6, format!("chi_bar(10, 0) = {v:.9}")).metric("chi_bar", v))
}

fn bandwidth_reproduction(_: u64) -> Result<Outcome> {
    let b = DecayBound::exponential(BoundFamily::Exponential, Metric::Band { m: 1 }, 10.0, 0.6);
    let m = prescribe_bandwidth(&b, 1e-6)?;
    Ok(Outcome::new(m == 29, format!("bandwidth = {m}")).metric("bandwidth", m as f64))
}

fn toeplitz_exactness(_: u64) -> Result<Outcome> {
    let n = 200;
    let p = oracle_projector(&toeplitz_1d(n)?, 0.0)?.matrix;
    let mut diag_err = 0.0f64;
    let mut even_max = 0.0f64;
    for i in 0..n {
        diag_err = diag_err.max((p.get_re(i, i) - 0.5).abs());
        for j in (i + 2..n).step_by(2) {
            even_max = even_max.max(p.get(i, j).norm());
        }
    }
    Ok(Outcome::new(
        diag_err <= 1e-12 && even_max <= 1e-12,
        format!("max |P_ii - 1/2| = {diag_err:.2e}, max |P_i,i+2l| = {even_max:.2e}"),
    )
    .metric("diag_error", diag_err)
    .metric("even_offset_max", even_max))
}

fn toeplitz_limit(_: u64) -> Result<Outcome> {
    let b = oracle_projector_block(&toeplitz_1d(2000)?, 0.0, &[0, 1])?;
    let v = b[(0, 1)];
    let want = -4.0 / (3.0 * PI);
    let err = (v - want).abs();
    Ok(Outcome::new(err <= 2e-3, format!("P_12 = {v:.6}, limit {want:.6}, diff {err:.2e}"))
        .metric("p12", v)
        .metric("error", err))
}

fn projector_bound_validity(seed: u64) -> Result<Outcome> {
    let cases: Vec<(f64, usize, u64)> = [0.2, 0.5, 1.0]
        .iter()
        .flat_map(|&g| (0..7u64).map(move |k| (g, 1 + (k as usize) % 3, seed.wrapping_add(k))))
        .collect();
    let checks = par::map_slice(&cases, |&(gap, m, s)| -> Result<(usize, usize, f64)> {
        let g = gapped_random(&GappedParams::symmetric(200, m, gap, s))?;
        let pb = projector_bound(&g.model, 1e-8, ChiChoice::default(), Metric::Band { m })?;
        let p = oracle_projector(&g.h, g.model.mu)?.matrix;
        let c = pb.bound.check(200, |i, j| p.get(i, j).norm(), None, 0.0, true)?;
        Ok((c.checked, c.violations, c.max_ratio))
    });
    let (mut checked, mut violations, mut worst) = (0, 0, 0.0f64);
    for c in checks {
        let (a, b, r) = c?;
        checked += a;
        violations += b;
        worst = worst.max(r);
    }
    Ok(Outcome::new(
        violations == 0,
        format!("{} instances, {checked} entries, {violations} violations, max ratio {worst:.3}", cases.len()),
    )
    .metric("instances", cases.len() as f64)
    .metric("violations", violations as f64)
    .metric("max_ratio", worst))
}

fn bernstein_chain(_: u64) -> Result<Outcome> {
    let (beta, mu) = (10.0, 0.0);
    let bar = chi_bar_fd(beta, mu);
    let chis: Vec<f64> = (1..=40).map(|s| 1.0 + (bar - 1.0) * s as f64 / 41.0).collect();
    let ms = par::map_slice(&chis, |&chi| ellipse_max_fd(beta, mu, chi))
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let grid: Vec<f64> = (0..=4000).map(|i| -1.0 + i as f64 / 2000.0).collect();
    let f = |x: f64| 1.0 / (1.0 + (beta * (x - mu)).exp());
    let degrees: Vec<usize> = (5..=60).collect();
    let rows = par::map_slice(&degrees, |&k| -> Result<(usize, f64)> {
        let c = cheb_coeffs_fd(beta, mu, k)?;
        let err = grid.iter().map(|&x| (f(x) - c.eval(x)).abs()).fold(0.0, f64::max);
        let v = chis
            .iter()
            .zip(&ms)
            .filter(|&(&chi, &m)| err > bernstein_error(m, chi, k))
            .count();
        Ok((v, err))
    });
    let mut violations = 0;
    let mut err60 = 0.0;
    for (k, r) in degrees.iter().zip(rows) {
        let (v, e) = r?;
        violations += v;
        if *k == 60 {
            err60 = e;
        }
    }
    Ok(Outcome::new(
        violations == 0,
        format!("{} degrees x {} chi, {violations} violations, E_60 = {err60:.2e}", degrees.len(), chis.len()),
    )
    .metric("violations", violations as f64)
    .metric("error_k60", err60))
}

/// Least squares line through `(x, y)`: slope and coefficient of
/// determination.
fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxy / sxx, sxy * sxy / (sxx * syy))
}

/// Tridiagonal chain with on-site energies `+-a` and hopping `t`.
fn gapped_chain(n: usize, a: f64, t: f64) -> Result<SparseHermitian> {
    let diag: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { a } else { -a }).collect();
    SparseHermitian::tridiagonal(&diag, &vec![t; n - 1])
}

fn contour_convergence(_: u64) -> Result<Outcome> {
    let h = gapped_chain(100, 0.7, 0.35)?;
    let eig = symmetric_eigenvalues(&h.to_dense_real()?)?;
    let spec = SpectralModel::from_eigenvalues(&eig, 0.0)?;
    let oracle = oracle_projector(&h, 0.0)?.matrix;
    let nodes: Vec<usize> = (1..=16).map(|k| 4 * k).collect();
    let errs = nodes
        .iter()
        .map(|&k| two_norm(&difference(&contour_projector(&h, &spec, k, None)?.matrix, &oracle)?))
        .collect::<Result<Vec<f64>>>()?;
    let err64 = errs[errs.len() - 1];
    let pts: Vec<(f64, f64)> = nodes
        .iter()
        .zip(&errs)
        .filter(|&(_, &e)| e > 1e-12)
        .map(|(&k, &e)| (k as f64, e.ln()))
        .collect();
    let (slope, r2) = if pts.len() >= 3 { linear_fit(&pts) } else { (f64::NAN, f64::NAN) };
    Ok(Outcome::new(
        err64 <= 1e-8 && slope < 0.0 && r2 >= 0.99,
        format!("error(64) = {err64:.2e}, slope {slope:.4}, R^2 {r2:.5} over {} points", pts.len()),
    )
    .metric("error_64", err64)
    .metric("slope", slope)
    .metric("r2", r2))
}

fn demko_suite(seed: u64) -> Result<Outcome> {
    let n = 100;
    let cases: Vec<(f64, usize, u64)> = (0..20)
        .map(|k| (2.0 * 5000f64.powf(k as f64 / 19.0), 1 + k % 3, seed.wrapping_add(k as u64)))
        .collect();
    let checks = par::map_slice(&cases, |&(kappa, m, s)| -> Result<(usize, f64)> {
        let a = crate::models::banded_spd(n, m, kappa, s)?;
        let e = symmetric_eigenvalues(&a.to_dense_real()?)?;
        let c = demko_constants(e[0], e[n - 1], m)?;
        let l = LowerBand::cholesky(n, m, |i, j| a.get_re(i, j))?;
        let mut v = 0;
        let mut worst = 0.0f64;
        for j in 0..n {
            let mut ej = vec![0.0; n];
            ej[j] = 1.0;
            let col = l.solve(&ej);
            for (i, x) in col.iter().enumerate() {
                let r = x.abs() / c.inverse_entry(i.abs_diff(j));
                worst = worst.max(r);
                if r > 1.0 {
                    v += 1;
                }
            }
        }
        Ok((v, worst))
    });
    let (mut violations, mut worst) = (0, 0.0f64);
    for c in checks {
        let (v, w) = c?;
        violations += v;
        worst = worst.max(w);
    }
    Ok(Outcome::new(
        violations == 0,
        format!("20 matrices, kappa in [2, 1e4], {violations} violations, max ratio {worst:.3}"),
    )
    .metric("violations", violations as f64)
    .metric("max_ratio", worst))
}

fn product_decay(_: u64) -> Result<Outcome> {
    let (n, alpha, ap, c1, c2) = (200, 1.0, 0.5, 2.0, 0.5);
    let kernel = |c: f64| DenseMatrix::from_fn(n, n, |i, j| c * (-alpha * i.abs_diff(j) as f64).exp());
    let chk = product_decay_check(&kernel(c1), &kernel(c2), alpha, c1, c2, ap)?;
    Ok(Outcome::new(
        chk.violations == 0,
        format!("c = {:.4}, {} violations, max ratio {:.3}", chk.c, chk.violations, chk.max_ratio),
    )
    .metric("c", chk.c)
    .metric("violations", chk.violations as f64)
    .metric("max_ratio", chk.max_ratio))
}

fn asymptotics(_: u64) -> Result<Outcome> {
    let mut ok = true;
    let mut out = Outcome::new(true, "");
    for a in [0.2, 0.1, 0.05, 0.01] {
        let g = gap_asymptotics(a);
        ok &= g.remainder.abs() <= a.powi(5);
        out = out.metric(&format!("gap_remainder_{a}"), g.remainder);
    }
    for beta in [1e2, 1e3, 1e4] {
        let r = chi_bar_fd(beta, 0.0).ln() * beta / PI;
        ok &= (r - 1.0).abs() <= 10.0 / (beta * beta);
        out = out.metric(&format!("temperature_ratio_{beta:e}"), r);
    }
    out.passed = ok;
    out.detail = "gap remainder <= a^5, temperature ratio within 10/beta^2".into();
    Ok(out)
}

fn disjoint_intervals(_: u64) -> Result<Outcome> {
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    for k in 0..20 {
        let gap = 0.05 + 0.45 * k as f64 / 19.0;
        let xi_bar = chui_hasson_xi_bar(gap / 2.0, 1.0);
        let chi_bar = chi_bar_fd(beta_from_gap(gap, 1e-5)?, 0.0);
        let margin = 1.0 / chi_bar - 1.0 / xi_bar;
        min_margin = min_margin.min(margin);
        if margin <= 0.0 {
            failures += 1;
        }
    }
    Ok(Outcome::new(
        failures == 0,
        format!("20 gaps, {failures} failures, min (1/chi_bar - 1/xi_bar) = {min_margin:.4}"),
    )
    .metric("failures", failures as f64)
    .metric("min_margin", min_margin))
}

fn energy_estimate(seed: u64) -> Result<Outcome> {
    let seeds: Vec<u64> = (0..10).map(|k| seed.wrapping_add(k)).collect();
    let rows = par::map_slice(&seeds, |&s| -> Result<(f64, f64)> {
        let g = gapped_random(&GappedParams::symmetric(200, 4, 0.4, s))?;
        let scale = g.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let h = g.h.scale_shift(1.0 / scale, 0.0);
        let ht = h.filter(|i, j, v| i == j || v.norm() >= 2e-2);
        let p = oracle_projector(&h, 0.0)?.matrix;
        let pt = truncate_band(&oracle_projector(&ht, 0.0)?.matrix, 8);
        let dh = difference(&ht, &h)?;
        let dp = difference(&pt, &p)?;
        let pair = |a: &SparseHermitian| -> Result<NormPair> {
            Ok(NormPair {
                two: two_norm(a)?,
                frobenius: norms(a).frobenius,
            })
        };
        let b = energy_error_bounds(pair(&dh)?, pair(&dp)?, 100, 2.0, Scaling::TwoNorm)?;
        let measured = (energy(&pt, &ht)? - energy(&p, &h)?).abs() / 100.0;
        Ok((measured, b.total))
    });
    let (mut violations, mut worst) = (0, 0.0f64);
    for r in rows {
        let (m, b) = r?;
        worst = worst.max(m / b);
        if m > b {
            violations += 1;
        }
    }
    Ok(Outcome::new(
        violations == 0,
        format!("10 experiments, {violations} violations, max measured/bound {worst:.3e}"),
    )
    .metric("violations", violations as f64)
    .metric("max_ratio", worst))
}

fn entry_count_scaling(seed: u64) -> Result<Outcome> {
    let eps = 1e-3;
    let sizes = [100usize, 200, 400, 800];
    let draws = 4u64;
    let mut out = Outcome::new(true, "");
    let mut ratios = Vec::new();
    let mut bound_ok = true;
    for &n in &sizes {
        let seeds: Vec<u64> = (0..draws).map(|k| seed.wrapping_add(1000 * k + n as u64)).collect();
        let counts = par::map_slice(&seeds, |&s| -> Result<usize> {
            let g = gapped_random(&GappedParams::symmetric(n, 2, 1.0, s))?;
            let p = oracle_projector(&g.h, g.model.mu)?.matrix;
            Ok(entry_count(&p, eps))
        })
        .into_iter()
        .collect::<Result<Vec<usize>>>()?;
        bound_ok &= counts.iter().all(|&k| (k as f64) <= entry_count_bound(n, n / 2, eps));
        let mean = counts.iter().sum::<usize>() as f64 / draws as f64;
        ratios.push(mean / n as f64);
        out = out.metric(&format!("mean_count_{n}"), mean);
    }
    let mono = ratios.windows(2).all(|w| w[1] <= 1.1 * w[0]);
    out.passed = bound_ok && mono;
    out.detail = format!(
        "mean count/n over {draws} draws = {}",
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
    );
    Ok(out)
}
