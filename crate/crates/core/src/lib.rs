//! Decay bounds and linear-scaling construction of density matrices for
//! gapped Hermitian operators.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense kernels (Householder band reduction, implicit QL,
//!   banded Cholesky and LU) generic over real and complex scalars.
//! * [`matrix`]: sparse Hermitian storage, graph distances, truncation,
//!   norms, spectral interval estimation and Matrix Market I/O.
//! * [`bounds`]: a-priori off-diagonal decay bounds.
//! * [`projector`]: spectral projector and Fermi-Dirac constructions.
//! * [`orthobasis`]: orthogonalization of non-orthogonal bases.
//! * [`models`]: model Hamiltonians with closed-form references.
//! * [`validate`]: the acceptance checks, shared by tests and the CLI.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod models;
pub mod orthobasis;
pub mod par;
pub mod projector;
pub mod report;
pub mod validate;

pub use error::{Error, Result};
pub use matrix::{GraphDistance, SparseHermitian, SpectralModel};

/// Version tag written into every JSON and CSV artifact.
pub const SCHEMA_VERSION: &str = "1.0";
