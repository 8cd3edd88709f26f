//! `decayproj model`.

use crate::error::{check, usage, CliError};
use clap::{Args, ValueEnum};
use decayproj::matrix::write_matrix_market_path;
use decayproj::models::{GappedParams, ModelSpec, Phase};
use decayproj::report::write_json_path;
use serde_json::json;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    /// Toeplitz chain `tridiag(1/2, 0, 1/2)`.
    Toeplitz1d,
    /// Square lattice `(H (x) I + I (x) H) / 2` on `n^2` sites.
    Kron2d,
    /// Kronecker product `H (x) H` of the chain.
    KronProduct,
    /// Random banded matrix with prescribed gapped spectrum.
    GappedRandom,
    /// Matrix with entries of magnitude `c exp(-alpha |i-j|)`.
    SyntheticDecay,
    /// Random banded SPD matrix with prescribed condition number.
    BandedSpd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Exact,
    Sign,
    Complex,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(value_enum)]
    kind: ModelKind,
    /// Matrix dimension (per axis for the Kronecker models).
    #[arg(long)]
    n: usize,
    /// Bandwidth (gapped-random, banded-spd).
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Gap of the symmetric spectrum `[-1, -gap/2] U [gap/2, 1]` (gapped-random).
    #[arg(long)]
    gap: Option<f64>,
    /// Condition number (banded-spd).
    #[arg(long)]
    kappa: Option<f64>,
    /// Amplitude (synthetic-decay).
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Decay rate (synthetic-decay).
    #[arg(long)]
    alpha: Option<f64>,
    /// Off-diagonal phases (synthetic-decay).
    #[arg(long, value_enum, default_value_t = PhaseArg::Exact)]
    phase: PhaseArg,
    /// Seed, required by the randomized models.
    #[arg(long)]
    seed: Option<u64>,
    /// Output Matrix Market file.
    #[arg(long)]
    out: PathBuf,
    /// Provenance JSON (default: the output path with extension `.json`).
    #[arg(long)]
    provenance: Option<PathBuf>,
}

fn seed(a: &ModelArgs) -> Result<u64, CliError> {
    a.seed
        .map_or_else(|| usage("--seed is required for randomized models"), Ok)
}

fn spec(a: &ModelArgs) -> Result<ModelSpec, CliError> {
    check(a.n >= 2, "--n", "must be at least 2")?;
    Ok(match a.kind {
        ModelKind::Toeplitz1d => ModelSpec::Toeplitz1d { n: a.n },
        ModelKind::Kron2d => ModelSpec::Kron2d { n: a.n },
        ModelKind::KronProduct => ModelSpec::KronProduct { n: a.n },
        ModelKind::GappedRandom => {
            let Some(gap) = a.gap else {
                return usage("--gap is required for gapped-random");
            };
            check(gap > 0.0 && gap < 2.0, "--gap", "must lie in (0, 2)")?;
            check(a.m >= 1, "--m", "must be positive")?;
            ModelSpec::GappedRandom(GappedParams::symmetric(a.n, a.m, gap, seed(a)?))
        }
        ModelKind::SyntheticDecay => {
            let Some(alpha) = a.alpha else {
                return usage("--alpha is required for synthetic-decay");
            };
            check(alpha > 0.0 && alpha.is_finite(), "--alpha", "must be positive")?;
            check(a.c > 0.0 && a.c.is_finite(), "--c", "must be positive")?;
            let phase = match a.phase {
                PhaseArg::Exact => Phase::Exact,
                PhaseArg::Sign => Phase::Sign,
                PhaseArg::Complex => Phase::Complex,
            };
            ModelSpec::SyntheticDecay {
                n: a.n,
                c: a.c,
                alpha,
                phase,
                seed: seed(a)?,
            }
        }
        ModelKind::BandedSpd => {
            let Some(kappa) = a.kappa else {
                return usage("--kappa is required for banded-spd");
            };
            check(kappa > 1.0 && kappa.is_finite(), "--kappa", "must exceed 1")?;
            check(a.m >= 1, "--m", "must be positive")?;
            ModelSpec::BandedSpd {
                n: a.n,
                m: a.m,
                kappa,
                seed: seed(a)?,
            }
        }
    })
}

pub fn run(a: ModelArgs) -> Result<(), CliError> {
    let spec = spec(&a)?;
    let built = spec.build()?;
    write_matrix_market_path(&built.h, &a.out)?;
    let prov = a.provenance.clone().unwrap_or_else(|| a.out.with_extension("json"));
    let record = json!({
        "model": spec,
        "matrix": a.out.display().to_string(),
        "n": built.h.n(),
        "nnz": built.h.nnz(),
        "bandwidth": built.h.bandwidth(),
        "spectral_model": built.model,
    });
    write_json_path(&prov, "model", &record)?;
    println!("wrote {} (n = {}, nnz = {})", a.out.display(), built.h.n(), built.h.nnz());
    Ok(())
}
