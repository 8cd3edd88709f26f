//! `decayproj validate`.

use crate::error::{check, CliError};
use clap::Args;
use decayproj::report::write_json_path;
use decayproj::validate::{run as run_checks, Group, ValidateConfig};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Comma-separated groups: bounds, toeplitz, projector, ortho, asymptotics, energy.
    #[arg(long, value_delimiter = ',')]
    only: Vec<Group>,
    /// Base seed of the randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of repetitions; the report records whether they agree.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    /// JSON report output.
    #[arg(long)]
    json: Option<PathBuf>,
}

pub fn run(a: ValidateArgs) -> Result<(), CliError> {
    check(a.repeat >= 1, "--repeat", "must be positive")?;
    let config = ValidateConfig {
        only: a.only,
        seed: a.seed,
        repeat: a.repeat,
    };
    let report = run_checks(&config);
    for r in &report.results {
        println!(
            "[{}] {:>2} {:<40} {:>9.1} ms  {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.elapsed_ms,
            r.detail
        );
    }
    if a.repeat > 1 {
        println!("deterministic over {} runs: {}", a.repeat, report.deterministic);
    }
    if let Some(p) = &a.json {
        write_json_path(p, "validation", &report)?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::ValidationFailed)
    }
}
