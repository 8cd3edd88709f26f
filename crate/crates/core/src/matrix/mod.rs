//! Sparse Hermitian storage and the primitives built on it.

mod graph;
mod mm;
mod norms;
mod sparse;
mod spectral;
mod truncate;

pub use graph::{graph_distances, GraphDistance, UNREACHABLE};
pub use mm::{
    read_matrix_market, read_matrix_market_path, write_dense_general, write_matrix_market,
    write_matrix_market_path,
};
pub use norms::{norms, Norms};
pub use sparse::{FullCsr, SparseHermitian};
pub use spectral::{
    gershgorin_interval, normalize, spectral_interval, AffineMap, IntervalMethod,
    SpectralInterval, SpectralModel,
};
pub use truncate::{truncate_band, truncate_graph};
