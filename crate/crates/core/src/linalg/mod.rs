//! Dense and banded linear algebra kernels.

mod banded;
mod dense;
mod eigen;
mod scalar;

pub use banded::{BandLu, LowerBand};
pub use dense::{complexify, realify, DenseMatrix};
pub use eigen::{
    reduce_to_band, symmetric_eigen, symmetric_eigen_rows, symmetric_eigenvalues,
    tridiagonal_eigen_rows, EigenDecomposition,
};
pub use scalar::Scalar;
