//! Overlap-matrix pipeline: Cholesky and inverse factors, the congruence
//! transform to an orthonormal basis, and decay checks on the factors.

mod factor;
mod product;

pub use crate::bounds::{demko_constants, DemkoConstants};
pub use factor::{
    cholesky_banded, congruence, decay_slope, drop_sweep, generalized_eigenvalues, inverse_cholesky,
    lowdin, orthogonality_defect, CholeskyFactor, DropSweepRow, FactorKind, FactorMatrix, FactorSet,
};
pub use product::{product_constant, product_decay_check, ProductCheck};
