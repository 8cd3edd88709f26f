//! Model Hamiltonians with closed-form or seeded constructions.

mod kron;
mod random;
mod toeplitz;

pub use kron::{kron_2d, kron_dense, kron_product_hamiltonian, kron_projector_formula};
pub use random::{banded_spd, gapped_random, synthetic_decay, GappedParams, GappedRandom, Phase};
pub use toeplitz::{
    toeplitz_1d, toeplitz_eigenpairs, toeplitz_fd_finite, toeplitz_fd_limit, toeplitz_projector_entry,
    toeplitz_projector_exact, toeplitz_projector_limit,
};

use crate::error::Result;
use crate::matrix::{SparseHermitian, SpectralModel};
use serde::{Deserialize, Serialize};

/// Serializable description of a model, written next to generated
/// matrices as provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSpec {
    Toeplitz1d { n: usize },
    Kron2d { n: usize },
    KronProduct { n: usize },
    GappedRandom(GappedParams),
    SyntheticDecay {
        n: usize,
        c: f64,
        alpha: f64,
        phase: Phase,
        seed: u64,
    },
    BandedSpd {
        n: usize,
        m: usize,
        kappa: f64,
        seed: u64,
    },
}

/// A generated matrix and, when known, its spectral model.
#[derive(Debug, Clone)]
pub struct BuiltModel {
    pub h: SparseHermitian,
    pub model: Option<SpectralModel>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<BuiltModel> {
        Ok(match self {
            ModelSpec::Toeplitz1d { n } => {
                let h = toeplitz_1d(*n)?;
                let (vals, _) = toeplitz_eigenpairs(*n);
                let model = if n % 2 == 0 {
                    Some(SpectralModel::from_eigenvalues_count(&vals, n / 2)?)
                } else {
                    None
                };
                BuiltModel { h, model }
            }
            ModelSpec::Kron2d { n } => BuiltModel {
                h: kron_2d(*n)?,
                model: None,
            },
            ModelSpec::KronProduct { n } => BuiltModel {
                h: kron_product_hamiltonian(*n)?,
                model: None,
            },
            ModelSpec::GappedRandom(p) => {
                let g = gapped_random(p)?;
                BuiltModel {
                    h: g.h,
                    model: Some(g.model),
                }
            }
            ModelSpec::SyntheticDecay {
                n,
                c,
                alpha,
                phase,
                seed,
            } => BuiltModel {
                h: synthetic_decay(*n, *c, *alpha, *phase, *seed)?,
                model: None,
            },
            ModelSpec::BandedSpd { n, m, kappa, seed } => BuiltModel {
                h: banded_spd(*n, *m, *kappa, *seed)?,
                model: None,
            },
        })
    }
}
