//! `decayproj bounds`.

use crate::error::{check, usage, CliError};
use clap::{Args, ValueEnum};
use decayproj::bounds::{
    achieser_decay, auto_chi, bernstein_fd_bound, chi_bar_fd, chi_grid, chui_hasson_auto,
    chui_hasson_bound, chui_hasson_xi_bar, demko_constants, ellipse_max_fd, fd_envelope, hasson_bound,
    heat_bound, projector_bound, resolvent_contour_bound, BoundFamily, ChiChoice, DecayBound, Metric,
};
use decayproj::report::{write_csv, write_json_path, Cell};
use decayproj::SpectralModel;
use serde_json::{json, Value};
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Fermi-Dirac function, Bernstein ellipse bound.
    Bernstein,
    /// Spectral projector of a gapped operator.
    Projector,
    /// Fermi-Dirac function, Achieser series.
    Achieser,
    /// Asymptotic shape for spectra `[-b, -a] U [a, b]`.
    Hasson,
    /// Explicit bound for spectra `[-b, -a] U [a, b]`.
    ChuiHasson,
    /// `exp(-beta H)` for spectrum in `[0, ||H||]`.
    Heat,
    /// Inverse of a banded SPD matrix with spectrum in `[a, b]`.
    Demko,
    /// Projector through the resolvent on a circle.
    Resolvent,
    /// Envelope of Bernstein bounds over a grid of `chi`.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Bernstein bounds for several `chi` and their envelope against distance.
    FdBounds,
    /// `M(chi)`, `c(chi)` and the rate over the admissible `chi` range.
    FdConstants,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum, default_value_t = Family::Bernstein)]
    family: Family,
    /// Inverse temperature.
    #[arg(long, default_value_t = 10.0)]
    beta: f64,
    /// Fermi level.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    /// Ellipse parameter; chosen automatically when omitted.
    #[arg(long)]
    chi: Option<f64>,
    /// Print the upper end of the admissible `chi` range and exit.
    #[arg(long)]
    chi_bar: bool,
    /// Bandwidth of the operator.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Use graph distance instead of `|i - j|`.
    #[arg(long)]
    graph: bool,
    /// Largest distance sampled.
    #[arg(long)]
    dmax: Option<usize>,
    /// Number of `chi` values in the envelope grid.
    #[arg(long, default_value_t = 50)]
    grid: usize,
    /// Emit figure data instead of a single bound.
    #[arg(long, value_enum)]
    figure: Option<Figure>,
    /// `chi` values for `--figure fd-bounds`.
    #[arg(long, value_delimiter = ',', default_values_t = [1.2, 1.3, 1.362346])]
    chis: Vec<f64>,
    /// Gap of the normalized spectrum `[-1, -gap/2] U [gap/2, 1]` (projector, resolvent).
    #[arg(long)]
    gap: Option<f64>,
    /// Highest occupied eigenvalue, when `--gap` is not given.
    #[arg(long, allow_hyphen_values = true)]
    eps_minus: Option<f64>,
    /// Lowest unoccupied eigenvalue, when `--gap` is not given.
    #[arg(long, allow_hyphen_values = true)]
    eps_plus: Option<f64>,
    /// Lower end of the spectrum.
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    lo: f64,
    /// Upper end of the spectrum.
    #[arg(long, default_value_t = 1.0)]
    hi: f64,
    /// Tolerance between the projector and the Fermi-Dirac function.
    #[arg(long, default_value_t = 1e-8)]
    delta: f64,
    /// Distance at which the automatic `chi` minimizes the bound.
    #[arg(long, default_value_t = 10.0)]
    target_distance: f64,
    /// Inner spectral edge (hasson, chui-hasson) or smallest eigenvalue (demko).
    #[arg(long)]
    a: Option<f64>,
    /// Outer spectral edge (hasson, chui-hasson) or largest eigenvalue (demko).
    #[arg(long)]
    b: Option<f64>,
    /// Constant of the asymptotic shape (hasson).
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Ellipse parameter (chui-hasson); chosen from `--c-max` when omitted.
    #[arg(long)]
    xi: Option<f64>,
    /// Largest admissible constant for the automatic `xi`.
    #[arg(long, default_value_t = 100.0)]
    c_max: f64,
    /// Series parameter in `(0, 1)` (achieser).
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    /// Spectral radius of `H` (heat).
    #[arg(long)]
    norm_h: Option<f64>,
    /// Contour sample points (resolvent).
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// CSV output (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report output.
    #[arg(long)]
    json: Option<PathBuf>,
}

impl BoundsArgs {
    fn metric(&self) -> Metric {
        if self.graph {
            Metric::Graph
        } else {
            Metric::Band { m: self.m }
        }
    }

    fn fd_chi_bar(&self) -> Result<f64, CliError> {
        check(self.beta > 0.0 && self.beta.is_finite(), "--beta", "must be positive")?;
        check(self.mu.is_finite(), "--mu", "must be finite")?;
        Ok(chi_bar_fd(self.beta, self.mu))
    }

    fn admissible_chi(&self, chi: f64) -> Result<(), CliError> {
        let bar = self.fd_chi_bar()?;
        check(chi > 1.0 && chi < bar, "--chi", &format!("{chi} must lie in (1, {bar})"))
    }

    fn ab(&self) -> Result<(f64, f64), CliError> {
        match (self.a, self.b) {
            (Some(a), Some(b)) if a > 0.0 && b > a && b.is_finite() => Ok((a, b)),
            (Some(_), Some(_)) => usage("--a, --b: need 0 < a < b"),
            _ => usage(format!("--a and --b are required for --family {:?}", self.family).to_lowercase()),
        }
    }

    fn spectral_model(&self) -> Result<SpectralModel, CliError> {
        let (em, ep) = match (self.gap, self.eps_minus, self.eps_plus) {
            (Some(g), None, None) => {
                check(g > 0.0 && g < self.hi - self.lo, "--gap", "must be positive and fit in [lo, hi]")?;
                (self.mu - 0.5 * g, self.mu + 0.5 * g)
            }
            (None, Some(em), Some(ep)) => (em, ep),
            _ => return usage("give either --gap or both --eps-minus and --eps-plus"),
        };
        SpectralModel::new(self.lo, self.hi, self.mu, em, ep, 0)
            .map_err(|e| CliError::Usage(e.to_string()))
    }
}

/// The bound and the parameters that defined it.
fn build(a: &BoundsArgs) -> Result<(DecayBound, Value), CliError> {
    let metric = a.metric();
    Ok(match a.family {
        Family::Bernstein => {
            let (chi, b) = match a.chi {
                Some(chi) => {
                    a.admissible_chi(chi)?;
                    (chi, bernstein_fd_bound(a.beta, a.mu, chi, metric)?)
                }
                None => {
                    a.fd_chi_bar()?;
                    auto_chi(a.beta, a.mu, metric, a.target_distance)?
                }
            };
            let m = ellipse_max_fd(a.beta, a.mu, chi)?;
            let p = json!({"beta": a.beta, "mu": a.mu, "chi": chi, "chi_bar": chi_bar_fd(a.beta, a.mu), "ellipse_max": m});
            (b, p)
        }
        Family::Envelope => {
            check(a.grid >= 2, "--grid", "must be at least 2")?;
            let bar = a.fd_chi_bar()?;
            let chis = chi_grid(bar, a.grid)?;
            let b = fd_envelope(a.beta, a.mu, metric, &chis)?;
            (b, json!({"beta": a.beta, "mu": a.mu, "chi_bar": bar, "chis": chis}))
        }
        Family::Achieser => {
            let Some(chi) = a.chi else {
                return usage("--chi is required for --family achieser");
            };
            a.admissible_chi(chi)?;
            check(a.tau > 0.0 && a.tau < 1.0, "--tau", "must lie in (0, 1)")?;
            let b = achieser_decay(a.beta, a.mu, chi, a.tau, metric)?;
            (b, json!({"beta": a.beta, "mu": a.mu, "chi": chi, "tau": a.tau}))
        }
        Family::Projector => {
            let spec = a.spectral_model()?;
            check(a.delta > 0.0 && a.delta < 0.5, "--delta", "must lie in (0, 1/2)")?;
            let choice = match a.chi {
                Some(chi) => ChiChoice::Fixed { chi },
                None => ChiChoice::Auto {
                    target_distance: a.target_distance,
                },
            };
            let pb = projector_bound(&spec, a.delta, choice, metric)?;
            let p = json!({
                "spectral_model": spec, "delta": pb.delta, "gamma": pb.gamma,
                "beta": pb.beta, "chi": pb.chi, "chi_bar": pb.chi_bar,
            });
            (pb.bound, p)
        }
        Family::Resolvent => {
            let spec = a.spectral_model()?;
            check(!a.graph, "--graph", "the resolvent bound uses band distance")?;
            check(a.m >= 1, "--m", "must be positive")?;
            check(a.samples >= 1, "--samples", "must be positive")?;
            let b = resolvent_contour_bound(&spec, a.m, None, a.samples)?;
            (b, json!({"spectral_model": spec, "samples": a.samples}))
        }
        Family::Hasson => {
            let (lo, hi) = a.ab()?;
            check(a.k > 0.0, "--k", "must be positive")?;
            (hasson_bound(lo, hi, a.k, metric)?, json!({"a": lo, "b": hi, "k": a.k}))
        }
        Family::ChuiHasson => {
            let (lo, hi) = a.ab()?;
            let bar = chui_hasson_xi_bar(lo, hi);
            let (xi, b) = match a.xi {
                Some(xi) => {
                    check(xi > 1.0 && xi < bar, "--xi", &format!("{xi} must lie in (1, {bar})"))?;
                    (xi, chui_hasson_bound(lo, hi, xi, metric)?)
                }
                None => chui_hasson_auto(lo, hi, a.c_max, metric)?,
            };
            (b, json!({"a": lo, "b": hi, "xi": xi, "xi_bar": bar}))
        }
        Family::Heat => {
            let Some(norm_h) = a.norm_h else {
                return usage("--norm-h is required for --family heat");
            };
            let Some(chi) = a.chi else {
                return usage("--chi is required for --family heat");
            };
            check(chi > 1.0 && chi.is_finite(), "--chi", "must exceed 1")?;
            let b = heat_bound(a.beta, norm_h, chi, metric)?;
            (b, json!({"beta": a.beta, "norm_h": norm_h, "chi": chi}))
        }
        Family::Demko => {
            check(!a.graph, "--graph", "the inverse bound uses band distance")?;
            let (lo, hi) = match (a.a, a.b) {
                (Some(lo), Some(hi)) if lo > 0.0 && hi >= lo => (lo, hi),
                _ => return usage("--a, --b: need 0 < a <= b"),
            };
            check(a.m >= 1, "--m", "must be positive")?;
            let d = demko_constants(lo, hi, a.m)?;
            let b = DecayBound::exponential(BoundFamily::Demko, Metric::Band { m: a.m }, d.k, d.alpha());
            (b, serde_json::to_value(d).map_err(decayproj::Error::from)?)
        }
    })
}

fn csv_sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn figure_fd_bounds(a: &BoundsArgs) -> Result<(), CliError> {
    let metric = a.metric();
    let bar = a.fd_chi_bar()?;
    check(!a.chis.is_empty(), "--chis", "needs at least one value")?;
    for &chi in &a.chis {
        check(chi > 1.0 && chi < bar, "--chis", &format!("{chi} must lie in (1, {bar})"))?;
    }
    check(a.grid >= 2, "--grid", "must be at least 2")?;
    let dmax = a.dmax.unwrap_or(199);
    let bounds = a
        .chis
        .iter()
        .map(|&chi| bernstein_fd_bound(a.beta, a.mu, chi, metric))
        .collect::<Result<Vec<_>, _>>()?;
    let env = fd_envelope(a.beta, a.mu, metric, &chi_grid(bar, a.grid)?)?;
    let names: Vec<String> = a.chis.iter().map(|c| format!("chi={c}")).collect();
    let mut headers: Vec<&str> = vec!["d"];
    headers.extend(names.iter().map(String::as_str));
    headers.push("envelope");
    let rows = (1..=dmax).map(|d| {
        let mut row = vec![Cell::from(d)];
        row.extend(bounds.iter().map(|b| Cell::from(b.eval(d as f64))));
        row.push(Cell::from(env.eval(d as f64)));
        row
    });
    write_csv(csv_sink(&a.out)?, &headers, rows)?;
    if let Some(p) = &a.json {
        let curves: Vec<Value> = a
            .chis
            .iter()
            .zip(&bounds)
            .map(|(chi, b)| json!({"chi": chi, "constants": b.constants()}))
            .collect();
        let data = json!({"beta": a.beta, "mu": a.mu, "chi_bar": bar, "metric": metric, "dmax": dmax, "curves": curves, "grid": a.grid});
        write_json_path(p, "figure-fd-bounds", &data)?;
    }
    Ok(())
}

fn figure_fd_constants(a: &BoundsArgs) -> Result<(), CliError> {
    let metric = a.metric();
    let bar = a.fd_chi_bar()?;
    check(a.grid >= 2, "--grid", "must be at least 2")?;
    let mut rows = Vec::new();
    for chi in chi_grid(bar, a.grid)? {
        let b = bernstein_fd_bound(a.beta, a.mu, chi, metric)?;
        let (c, alpha) = b.exp_constants().expect("exponential bound");
        let m = ellipse_max_fd(a.beta, a.mu, chi)?;
        rows.push(vec![Cell::from(chi), Cell::from(m), Cell::from(c), Cell::from(alpha)]);
    }
    write_csv(csv_sink(&a.out)?, &["chi", "ellipse_max", "c", "alpha"], rows)?;
    if let Some(p) = &a.json {
        let data = json!({"beta": a.beta, "mu": a.mu, "chi_bar": bar, "metric": metric, "grid": a.grid});
        write_json_path(p, "figure-fd-constants", &data)?;
    }
    Ok(())
}

pub fn run(a: BoundsArgs) -> Result<(), CliError> {
    if a.chi_bar {
        let v = match a.family {
            Family::Bernstein | Family::Envelope | Family::Achieser => a.fd_chi_bar()?,
            Family::ChuiHasson => {
                let (lo, hi) = a.ab()?;
                chui_hasson_xi_bar(lo, hi)
            }
            f => return usage(format!("--chi-bar is not defined for --family {f:?}").to_lowercase()),
        };
        println!("{v:.7}");
        return Ok(());
    }
    match a.figure {
        Some(Figure::FdBounds) => return figure_fd_bounds(&a),
        Some(Figure::FdConstants) => return figure_fd_constants(&a),
        None => {}
    }
    check(a.m >= 1, "--m", "must be positive")?;
    let dmax = a.dmax.unwrap_or(100);
    check(dmax >= 1, "--dmax", "must be positive")?;
    let (bound, params) = build(&a)?;
    let report = bound.report(dmax);
    write_csv(
        csv_sink(&a.out)?,
        &["d", "bound"],
        report.samples.iter().map(|&(d, v)| vec![Cell::from(d), Cell::from(v)]),
    )?;
    if let Some(p) = &a.json {
        let mut v = serde_json::to_value(&report).map_err(decayproj::Error::from)?;
        v["parameters"] = params;
        write_json_path(p, "bound", &v)?;
    }
    Ok(())
}
