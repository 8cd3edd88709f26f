//! Sparsity patterns for truncated matrix recurrences.

use crate::error::{Error, Result};
use crate::matrix::{graph_distances, SparseHermitian};
use crate::par;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

/// Requested truncation pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PatternSpec {
    /// No truncation.
    None,
    /// `|i - j| <= m`.
    Band { m: usize },
    /// Graph distance `<= m` in the pattern of `H`.
    Graph { m: usize },
}

impl FromStr for PatternSpec {
    type Err = Error;

    /// Parses `none`, `band:M` or `graph:M`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("PatternSpec", format!("expected none, band:M or graph:M, got '{s}'"));
        if s == "none" {
            return Ok(PatternSpec::None);
        }
        let (kind, m) = s.split_once(':').ok_or_else(bad)?;
        let m: usize = m.parse().map_err(|_| bad())?;
        match kind {
            "band" => Ok(PatternSpec::Band { m }),
            "graph" => Ok(PatternSpec::Graph { m }),
            _ => Err(bad()),
        }
    }
}

/// Symmetric pattern with sorted column lists (both triangles, diagonal
/// always present).
#[derive(Debug, Clone)]
pub struct Pattern {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
}

impl Pattern {
    pub fn build(h: &SparseHermitian, spec: PatternSpec) -> Result<Self> {
        let n = h.n();
        let rows: Vec<Vec<usize>> = match spec {
            PatternSpec::None => par::map_range(n, |_| (0..n).collect()),
            PatternSpec::Band { m } => par::map_range(n, |i| {
                (i.saturating_sub(m)..(i + m + 1).min(n)).collect()
            }),
            PatternSpec::Graph { m } => {
                let d = graph_distances(h, m, None)?;
                par::map_range(n, |i| {
                    d.ball(i)
                        .expect("all sources computed")
                        .iter()
                        .map(|&(j, _)| j as usize)
                        .collect()
                })
            }
        };
        Ok(Self::from_rows(n, rows))
    }

    fn from_rows(n: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for r in rows {
            col_idx.extend(r);
            row_ptr.push(col_idx.len());
        }
        Self { n, row_ptr, col_idx }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    /// Pattern of the real embedding: `(i, j)` becomes the 2x2 block.
    pub fn lift(&self) -> Self {
        let rows = (0..2 * self.n)
            .map(|r| {
                self.row(r / 2)
                    .iter()
                    .flat_map(|&j| [2 * j, 2 * j + 1])
                    .collect()
            })
            .collect();
        Self::from_rows(2 * self.n, rows)
    }

    /// Position of `(i, j)` in the value array.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        self.row(i).binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }
}
