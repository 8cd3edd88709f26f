//! `decayproj` command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 usage or input error,
//! 3 numeric precondition violation.

mod bounds;
mod error;
mod model;
mod ortho;
mod project;
mod validate;

use clap::{Parser, Subcommand};
use error::CliError;
use std::process::ExitCode;

/// Decay bounds and density matrices of gapped Hermitian operators.
#[derive(Debug, Parser)]
#[command(name = "decayproj", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a model Hamiltonian as Matrix Market plus a JSON provenance record.
    Model(model::ModelArgs),
    /// Evaluate a decay bound and write its samples.
    Bounds(bounds::BoundsArgs),
    /// Compute a density matrix from a Matrix Market Hamiltonian.
    Project(project::ProjectArgs),
    /// Orthogonalize a basis given its overlap matrix.
    Ortho(ortho::OrthoArgs),
    /// Run the acceptance checks.
    Validate(validate::ValidateArgs),
}

/// Size the global thread pool from `DECAYPROJ_THREADS`.
fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("DECAYPROJ_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("DECAYPROJ_THREADS must be a positive integer, got '{v}'")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Model(a) => model::run(a),
        Command::Bounds(a) => bounds::run(a),
        Command::Project(a) => project::run(a),
        Command::Ortho(a) => ortho::run(a),
        Command::Validate(a) => validate::run(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::ValidationFailed) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
