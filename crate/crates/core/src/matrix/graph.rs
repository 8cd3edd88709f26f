//! Truncated breadth-first graph distances on a sparsity pattern.

use super::SparseHermitian;
use crate::error::{Error, Result};
use crate::par;
use std::collections::VecDeque;

/// Distance reported for pairs farther apart than the radius, or
/// disconnected.
pub const UNREACHABLE: u32 = u32::MAX;

/// Source-indexed table of graph distances up to a fixed radius.
#[derive(Debug, Clone)]
pub struct GraphDistance {
    n: usize,
    radius: usize,
    max_degree: usize,
    /// Per source: sorted `(node, distance)` for nodes within the radius.
    balls: Vec<Option<Vec<(u32, u32)>>>,
}

impl GraphDistance {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Largest number of distinct off-diagonal neighbours of any vertex.
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn has_source(&self, i: usize) -> bool {
        self.balls.get(i).is_some_and(Option::is_some)
    }

    /// Distance from `i` to `j`, [`UNREACHABLE`] beyond the radius. Uses the
    /// table for `j` when `i` is not a source. `None` if neither is.
    pub fn get(&self, i: usize, j: usize) -> Option<u32> {
        let lookup = |s: usize, t: usize| {
            self.balls[s].as_ref().map(|ball| {
                ball.binary_search_by_key(&(t as u32), |p| p.0)
                    .map(|k| ball[k].1)
                    .unwrap_or(UNREACHABLE)
            })
        };
        lookup(i, j).or_else(|| lookup(j, i))
    }

    /// Nodes within the radius of `source`, with distances.
    pub fn ball(&self, source: usize) -> Option<&[(u32, u32)]> {
        self.balls.get(source)?.as_deref()
    }
}

/// Breadth-first distances from `sources` (all vertices when `None`),
/// truncated at `radius`.
pub fn graph_distances(
    h: &SparseHermitian,
    radius: usize,
    sources: Option<&[usize]>,
) -> Result<GraphDistance> {
    let n = h.n();
    let adj = h.adjacency();
    let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
    let src: Vec<usize> = match sources {
        Some(s) => {
            if let Some(&bad) = s.iter().find(|&&x| x >= n) {
                return Err(Error::invalid(
                    "graph_distances",
                    format!("source {bad} out of range for n = {n}"),
                ));
            }
            s.to_vec()
        }
        None => (0..n).collect(),
    };
    let computed = par::map_slice(&src, |&s| bfs(&adj, s, radius));
    let mut balls = vec![None; n];
    for (s, ball) in src.into_iter().zip(computed) {
        balls[s] = Some(ball);
    }
    Ok(GraphDistance {
        n,
        radius,
        max_degree,
        balls,
    })
}

fn bfs(adj: &[Vec<usize>], source: usize, radius: usize) -> Vec<(u32, u32)> {
    let mut dist = std::collections::HashMap::new();
    dist.insert(source, 0u32);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du as usize >= radius {
            continue;
        }
        for &v in &adj[u] {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(v) {
                e.insert(du + 1);
                queue.push_back(v);
            }
        }
    }
    let mut ball: Vec<(u32, u32)> = dist.into_iter().map(|(k, d)| (k as u32, d)).collect();
    ball.sort_unstable();
    ball
}
