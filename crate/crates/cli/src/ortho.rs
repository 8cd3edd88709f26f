//! `decayproj ortho`.

use crate::error::{check, CliError};
use clap::{Args, ValueEnum};
use decayproj::linalg::symmetric_eigenvalues;
use decayproj::matrix::{read_matrix_market_path, write_dense_general, write_matrix_market_path};
use decayproj::orthobasis::{
    cholesky_banded, congruence, decay_slope, demko_constants, drop_sweep, generalized_eigenvalues,
    inverse_cholesky, lowdin, orthogonality_defect, FactorMatrix, FactorSet,
};
use decayproj::report::{write_csv_path, write_json_path, Cell};
use decayproj::SparseHermitian;
use serde_json::json;
use std::fs::{self, File};
use std::path::PathBuf;

/// Drop tolerances of the sweep table, from loose to exact.
const SWEEP: [f64; 9] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8, 1e-10, 0.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FactorArg {
    /// `Z = S^{-1/2}`.
    Lowdin,
    /// `Z = L^{-*}` with `S = L L*`.
    Cholesky,
}

#[derive(Debug, Args)]
pub struct OrthoArgs {
    /// Overlap matrix (Hermitian positive definite), Matrix Market.
    #[arg(long)]
    overlap: PathBuf,
    /// Hamiltonian to transform, Matrix Market.
    #[arg(long)]
    hamiltonian: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FactorArg::Cholesky)]
    factor: FactorArg,
    /// Relative drop tolerance for the inverse Cholesky factor.
    #[arg(long, default_value_t = 0.0)]
    drop_tol: f64,
    /// Also write a drop-tolerance sweep table.
    #[arg(long)]
    sweep: bool,
    /// Output directory for Z.mtx, Htilde.mtx, report.json and sweep.csv.
    #[arg(long)]
    out_dir: PathBuf,
}

fn spectrum(h: &SparseHermitian) -> Result<Vec<f64>, CliError> {
    let e = symmetric_eigenvalues(&h.real_form().to_dense_real()?)?;
    Ok(if h.is_real() { e } else { e.into_iter().step_by(2).collect() })
}

fn write_factor(z: &FactorMatrix, path: &PathBuf) -> Result<(), CliError> {
    let f = File::create(path)?;
    match z {
        FactorMatrix::Real(m) => write_dense_general(m, 0.0, f)?,
        FactorMatrix::Complex(m) => write_dense_general(m, 0.0, f)?,
    }
    Ok(())
}

pub fn run(a: OrthoArgs) -> Result<(), CliError> {
    check(a.drop_tol >= 0.0 && a.drop_tol < 1.0, "--drop-tol", "must lie in [0, 1)")?;
    check(
        a.factor == FactorArg::Cholesky || a.drop_tol == 0.0,
        "--drop-tol",
        "applies to --factor cholesky only",
    )?;
    let s = read_matrix_market_path(&a.overlap)?;
    let h = a.hamiltonian.as_ref().map(read_matrix_market_path).transpose()?;
    if let Some(h) = &h {
        check(h.n() == s.n(), "--hamiltonian", "dimension differs from the overlap")?;
    }
    fs::create_dir_all(&a.out_dir)?;

    let set: FactorSet = match a.factor {
        FactorArg::Lowdin => lowdin(&s)?,
        FactorArg::Cholesky => inverse_cholesky(&s, a.drop_tol)?,
    };
    let n = s.n();
    let m = s.bandwidth().max(1);
    let defect = orthogonality_defect(&s, &set.z)?;
    let cholesky_residual = match a.factor {
        FactorArg::Cholesky => Some(cholesky_banded(&s)?.residual(&s)),
        FactorArg::Lowdin => None,
    };
    let demko = demko_constants(set.a, set.b, m)?;
    let env = set.z.diagonal_envelope();
    let floor = 1e-14 * env.first().copied().unwrap_or(1.0);
    let slope = decay_slope(&env, 1..=n.saturating_sub(1), floor);
    write_factor(&set.z, &a.out_dir.join("Z.mtx"))?;

    let spectrum_check = match &h {
        Some(h) => {
            let ht = congruence(h, &set.z)?;
            write_matrix_market_path(&ht, a.out_dir.join("Htilde.mtx"))?;
            let ev = spectrum(&ht)?;
            let gen = generalized_eigenvalues(h, &s)?;
            let diff = ev.iter().zip(&gen).fold(0.0f64, |d, (x, y)| d.max((x - y).abs()));
            Some(json!({
                "eigenvalues": ev,
                "generalized_eigenvalues": gen,
                "max_abs_difference": diff,
            }))
        }
        None => None,
    };

    let sweep = if a.sweep {
        let rows = drop_sweep(&s, &SWEEP)?;
        write_csv_path(
            a.out_dir.join("sweep.csv"),
            &["drop_tol", "nnz", "defect"],
            rows.iter()
                .map(|r| vec![Cell::from(r.drop_tol), Cell::from(r.nnz), Cell::from(r.defect)]),
        )?;
        Some(rows)
    } else {
        None
    };

    let report = json!({
        "factor": set.kind,
        "overlap": a.overlap.display().to_string(),
        "n": n,
        "bandwidth": m,
        "drop_tol": set.drop_tol,
        "nnz": set.nnz,
        "spectrum": {"a": set.a, "b": set.b, "kappa": set.kappa},
        "orthogonality_defect": defect,
        "cholesky_residual": cholesky_residual,
        "decay": {
            "envelope_slope": slope,
            "bound_slope": -demko.alpha(),
            "constants": demko,
        },
        "spectrum_check": spectrum_check,
        "sweep": sweep,
    });
    write_json_path(a.out_dir.join("report.json"), "ortho", &report)?;
    println!(
        "factor {:?}: kappa = {:e}, defect = {:e}, nnz = {}",
        a.factor, set.kappa, defect, set.nnz
    );
    Ok(())
}
