//! Spectral projector by trapezoidal quadrature of the resolvent on a
//! circle around the occupied spectrum.

use super::density::{DensityResult, Method};
use super::pattern::PatternSpec;
use crate::bounds::{default_circle, Circle};
use crate::error::{Error, Result};
use crate::linalg::{BandLu, DenseMatrix};
use crate::matrix::{SparseHermitian, SpectralModel};
use crate::par;
use num_complex::Complex64;

const NODE_CLEARANCE: f64 = 1e-8;

fn distance_to_spectrum(z: Complex64, spec: &SpectralModel) -> f64 {
    let seg = |p: f64, q: f64| (z - Complex64::new(z.re.clamp(p, q), 0.0)).norm();
    seg(spec.lo, spec.eps_minus).min(seg(spec.eps_plus, spec.hi))
}

/// `P ~ sum_k (r e^{i theta_k} / N) (z_k I - H)^{-1}` over `nodes` points
/// `z_k = c + r e^{i theta_k}` of `circle` (default: [`default_circle`]).
///
/// For real `H` only nodes in the upper half plane are solved and the
/// real part doubled. Each resolvent is formed column by column from a
/// banded LU factorization. A circle that misses part of the occupied
/// spectrum is not an error; it shows up as a trace deviation in
/// [`super::verify_density`].
pub fn contour_projector(
    h: &SparseHermitian,
    spec: &SpectralModel,
    nodes: usize,
    circle: Option<Circle>,
) -> Result<DensityResult> {
    if nodes == 0 {
        return Err(Error::invalid("contour_projector", "nodes must be positive"));
    }
    let circle = circle.unwrap_or_else(|| default_circle(spec));
    if !(circle.radius > 0.0) {
        return Err(Error::invalid("contour_projector", "radius must be positive"));
    }
    let n = h.n();
    let m = h.bandwidth();
    let real = h.is_real();
    let solved: Vec<usize> = if real {
        (0..nodes.div_ceil(2)).collect()
    } else {
        (0..nodes).collect()
    };
    for &k in &solved {
        let z = circle.node(k, nodes);
        let d = distance_to_spectrum(z, spec);
        if d < NODE_CLEARANCE {
            return Err(Error::precondition(
                "contour_projector",
                format!("node {z} lies within {d:e} of the spectrum"),
            ));
        }
    }

    let mut sum = DenseMatrix::<Complex64>::zeros(n, n);
    for &k in &solved {
        let z = circle.node(k, nodes);
        let w = (z - circle.center) / nodes as f64;
        let lu = BandLu::factor(n, m, m, |i, j| {
            let v = -h.get(i, j);
            if i == j {
                v + z
            } else {
                v
            }
        })?;
        let cols = par::map_range(n, |j| lu.inverse_column(j));
        // A middle node on the real axis (odd count) is its own conjugate.
        let weight = if real && !(nodes % 2 == 1 && k == nodes / 2) {
            2.0
        } else {
            1.0
        };
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                sum[(i, j)] += weight * w * v;
            }
        }
    }
    if real {
        sum = sum.map(|v| Complex64::new(v.re, 0.0));
    }
    let herm = sum.hermiticity_residual();
    sum.symmetrize();
    let matrix = SparseHermitian::from_dense(&sum, 0.0)?;
    Ok(DensityResult {
        matrix,
        method: Method::Contour { nodes, circle },
        pattern: PatternSpec::None,
        spec: Some(*spec),
        hermiticity_residual: herm,
    })
}
