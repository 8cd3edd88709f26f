//! `decayproj project`.

use crate::error::{check, usage, CliError};
use clap::{Args, ValueEnum};
use decayproj::bounds::{
    bernstein_error, ellipse_max_fd, prescribe_bandwidth, projector_bound, BoundFamily, ChiChoice, DecayBound,
    Metric,
};
use decayproj::linalg::symmetric_eigenvalues;
use decayproj::matrix::{normalize, read_matrix_market_path, spectral_interval, write_matrix_market_path};
use decayproj::projector::{
    cheb_apply, cheb_coeffs_fd, cheb_coeffs_step, contour_projector, oracle_fd, oracle_projector, verify_density,
    DensityResult, PatternSpec,
};
use decayproj::report::write_json_path;
use decayproj::{SparseHermitian, SpectralModel};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

const MAX_AUTO_DEGREE: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Dense eigendecomposition, projector at `--mu`.
    Oracle,
    /// Dense eigendecomposition, Fermi-Dirac function at `--beta`, `--mu`.
    OracleFd,
    /// Truncated Chebyshev recurrence.
    Chebyshev,
    /// Trapezoidal rule on a circle around the occupied spectrum.
    Contour,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Hamiltonian in Matrix Market format.
    input: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Fermi level.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Number of occupied states; sets `mu` to the middle of the gap.
    #[arg(long)]
    n_e: Option<usize>,
    /// Inverse temperature (oracle-fd; chebyshev with a Fermi-Dirac target).
    #[arg(long)]
    beta: Option<f64>,
    /// Chebyshev degree.
    #[arg(long)]
    degree: Option<usize>,
    /// Contour nodes.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    /// Truncation pattern: none, band:M or graph:M.
    #[arg(long, default_value = "none")]
    pattern: PatternSpec,
    /// Choose pattern and degree from the decay bound for entrywise accuracy EPS.
    #[arg(long, value_name = "EPS")]
    auto_band: Option<f64>,
    /// Use graph distance for `--auto-band`.
    #[arg(long)]
    graph: bool,
    /// Projector tolerance used by `--auto-band`.
    #[arg(long, default_value_t = 1e-8)]
    delta: f64,
    /// Output matrix (default: input with extension `.P.mtx`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Metrics JSON (default: input with extension `.metrics.json`).
    #[arg(long)]
    metrics: Option<PathBuf>,
    /// Skip the comparison with the dense reference.
    #[arg(long)]
    no_reference: bool,
}

fn eigenvalues(h: &SparseHermitian) -> Result<Vec<f64>, CliError> {
    let e = symmetric_eigenvalues(&h.real_form().to_dense_real()?)?;
    Ok(if h.is_real() { e } else { e.into_iter().step_by(2).collect() })
}

/// Spectral model from the dense spectrum, split at `--mu` or after `--n-e` states.
fn model(h: &SparseHermitian, a: &ProjectArgs) -> Result<SpectralModel, CliError> {
    let e = eigenvalues(h)?;
    Ok(match (a.mu, a.n_e) {
        (Some(mu), None) => SpectralModel::from_eigenvalues(&e, mu)?,
        (None, Some(k)) => SpectralModel::from_eigenvalues_count(&e, k)?,
        (Some(_), Some(_)) => return usage("give only one of --mu and --n-e"),
        (None, None) => return usage("one of --mu and --n-e is required"),
    })
}

fn with_extension(input: &Path, ext: &str) -> PathBuf {
    let mut s = input.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

struct Computed {
    result: DensityResult,
    reference: Option<DensityResult>,
    extra: Value,
}

fn chebyshev(h: &SparseHermitian, a: &ProjectArgs) -> Result<Computed, CliError> {
    if let Some(eps) = a.auto_band {
        check(eps > 0.0 && eps < 1.0, "--auto-band", "must lie in (0, 1)")?;
        check(a.pattern == PatternSpec::None, "--pattern", "conflicts with --auto-band")?;
        check(a.beta.is_none(), "--beta", "conflicts with --auto-band, which derives beta from the gap")?;
        check(a.delta > 0.0 && a.delta < 0.5, "--delta", "must lie in (0, 1/2)")?;
        let spec = model(h, a)?;
        let (spec_n, map) = spec.normalized()?;
        let (hn, _) = normalize(h, spec.lo, spec.hi)?;
        let metric = if a.graph {
            Metric::Graph
        } else {
            Metric::Band { m: h.bandwidth().max(1) }
        };
        let pb = projector_bound(&spec_n, a.delta, ChiChoice::default(), metric)?;
        let (c, alpha) = pb.bound.exp_constants().expect("exponential");
        let mbar = prescribe_bandwidth(&DecayBound::exponential(BoundFamily::Exponential, metric, c, alpha), eps)?;
        let degree = match a.degree {
            Some(k) => k,
            None => {
                let m = ellipse_max_fd(pb.beta, spec_n.mu, pb.chi)?;
                (0..=MAX_AUTO_DEGREE)
                    .find(|&k| bernstein_error(m, pb.chi, k) <= eps)
                    .ok_or_else(|| {
                        CliError::Core(decayproj::Error::Precondition {
                            op: "auto-band",
                            reason: format!("degree above {MAX_AUTO_DEGREE} needed for eps = {eps}"),
                        })
                    })?
            }
        };
        let pattern = if a.graph {
            PatternSpec::Graph { m: mbar }
        } else {
            PatternSpec::Band { m: mbar }
        };
        let coeffs = cheb_coeffs_fd(pb.beta, spec_n.mu, degree)?;
        let mut result = cheb_apply(&hn, &coeffs, pattern)?;
        result.spec = Some(spec);
        let reference = if a.no_reference {
            None
        } else {
            Some(oracle_projector(h, spec.mu)?)
        };
        let extra = json!({
            "auto_band": {
                "eps": eps, "delta": a.delta, "bandwidth": mbar, "degree": degree,
                "beta_normalized": pb.beta, "chi": pb.chi, "chi_bar": pb.chi_bar, "gamma_normalized": pb.gamma,
                "c": c, "alpha": alpha, "metric": metric,
            },
            "affine_map": map,
        });
        return Ok(Computed { result, reference, extra });
    }

    let Some(degree) = a.degree else {
        return usage("--degree or --auto-band is required for --method chebyshev");
    };
    let spec = match (a.mu, a.n_e) {
        (Some(_), None) if a.no_reference => None,
        _ => Some(model(h, a)?),
    };
    let mu = spec.map_or_else(|| a.mu.expect("checked"), |s| s.mu);
    let iv = spectral_interval(h)?;
    let (hn, map) = normalize(h, iv.lo, iv.hi)?;
    let mu_n = map.apply(mu);
    let (coeffs, reference) = match a.beta {
        Some(beta) => {
            check(beta > 0.0 && beta.is_finite(), "--beta", "must be positive")?;
            let r = if a.no_reference { None } else { Some(oracle_fd(h, beta, mu)?) };
            (cheb_coeffs_fd(beta / map.scale, mu_n, degree)?, r)
        }
        None => {
            check(mu_n > -1.0 && mu_n < 1.0, "--mu", "must lie inside the spectral interval")?;
            let r = if a.no_reference { None } else { Some(oracle_projector(h, mu)?) };
            (cheb_coeffs_step(mu_n, degree)?, r)
        }
    };
    let mut result = cheb_apply(&hn, &coeffs, a.pattern)?;
    result.spec = spec;
    let extra = json!({
        "degree": degree,
        "target": coeffs.target,
        "interval": iv,
        "affine_map": map,
    });
    Ok(Computed { result, reference, extra })
}

fn compute(h: &SparseHermitian, a: &ProjectArgs) -> Result<Computed, CliError> {
    match a.method {
        MethodArg::Oracle => {
            let spec = model(h, a)?;
            Ok(Computed {
                result: oracle_projector(h, spec.mu)?,
                reference: None,
                extra: json!({}),
            })
        }
        MethodArg::OracleFd => {
            let Some(beta) = a.beta else {
                return usage("--beta is required for --method oracle-fd");
            };
            check(beta > 0.0 && beta.is_finite(), "--beta", "must be positive")?;
            let mu = match (a.mu, a.n_e) {
                (Some(mu), None) => mu,
                _ => model(h, a)?.mu,
            };
            Ok(Computed {
                result: oracle_fd(h, beta, mu)?,
                reference: None,
                extra: json!({ "beta": beta }),
            })
        }
        MethodArg::Contour => {
            check(a.nodes >= 1, "--nodes", "must be positive")?;
            let spec = model(h, a)?;
            let result = contour_projector(h, &spec, a.nodes, None)?;
            let reference = if a.no_reference {
                None
            } else {
                Some(oracle_projector(h, spec.mu)?)
            };
            Ok(Computed {
                result,
                reference,
                extra: json!({ "nodes": a.nodes }),
            })
        }
        MethodArg::Chebyshev => chebyshev(h, a),
    }
}

pub fn run(a: ProjectArgs) -> Result<(), CliError> {
    if let Some(mu) = a.mu {
        check(mu.is_finite(), "--mu", "must be finite")?;
    }
    let h = read_matrix_market_path(&a.input)?;
    let c = compute(&h, &a)?;
    let v = verify_density(&c.result, c.reference.as_ref())?;
    let out = a.out.clone().unwrap_or_else(|| with_extension(&a.input, ".P.mtx"));
    let metrics_path = a.metrics.clone().unwrap_or_else(|| with_extension(&a.input, ".metrics.json"));
    write_matrix_market_path(&c.result.matrix, &out)?;
    let data = json!({
        "input": a.input.display().to_string(),
        "output": out.display().to_string(),
        "method": c.result.method,
        "pattern": c.result.pattern,
        "n": c.result.matrix.n(),
        "nnz": c.result.matrix.nnz(),
        "spectral_model": c.result.spec,
        "reference": c.reference.is_some(),
        "metrics": v,
        "details": c.extra,
    });
    write_json_path(&metrics_path, "project", &data)?;
    print!("trace = {:.12}, idempotency defect = {:e}", v.trace, v.idempotency_defect);
    if let Some(e) = v.sup_error {
        print!(", sup error = {e:e}");
    }
    println!();
    Ok(())
}
