//! Spectral projector and Fermi-Dirac matrix constructions.

mod chebyshev;
mod contour;
mod density;
mod energy;
mod oracle;
mod pattern;

pub use chebyshev::{cheb_apply, cheb_coeffs, cheb_coeffs_fd, cheb_coeffs_step, ChebCoeffs, ChebTarget};
pub use contour::contour_projector;
pub use density::{
    difference, two_norm,
    entry_count, entry_count_bound, lemma_ratio, verify_density, DensityResult, Method,
    Verification,
};
pub use energy::{energy, energy_error_bounds, EnergyErrorBound, NormPair, Scaling};
pub use oracle::{oracle_fd, oracle_function, oracle_projector, oracle_projector_block};
pub use pattern::{Pattern, PatternSpec};
