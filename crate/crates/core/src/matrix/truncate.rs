//! Band and graph-distance truncation.

use super::{GraphDistance, SparseHermitian};
use crate::error::{Error, Result};

/// Keep entries with `|i - j| <= m`.
pub fn truncate_band(a: &SparseHermitian, m: usize) -> SparseHermitian {
    a.filter(|i, j, _| j - i <= m)
}

/// Keep entries whose graph distance is at most `m` (ties kept).
pub fn truncate_graph(a: &SparseHermitian, d: &GraphDistance, m: usize) -> Result<SparseHermitian> {
    if d.n() != a.n() {
        return Err(Error::DimensionMismatch {
            op: "truncate_graph",
            expected: a.n(),
            got: d.n(),
        });
    }
    if d.radius() < m {
        return Err(Error::InsufficientRadius {
            needed: m,
            available: d.radius(),
        });
    }
    for (i, j, _) in a.iter_upper() {
        if d.get(i, j).is_none() {
            return Err(Error::invalid(
                "truncate_graph",
                format!("no distance data for pair ({i}, {j})"),
            ));
        }
    }
    Ok(a.filter(|i, j, _| d.get(i, j).is_some_and(|x| x as usize <= m)))
}
