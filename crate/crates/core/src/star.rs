//! Bidirected stars and the dag-count lower bound for non-Steiner covers
//! of them.

use std::collections::HashSet;

use serde::Serialize;

use crate::cover::{certify, count_extra_edges, DagCover, VertexRef};
use crate::error::{Error, Result};
use crate::graph::{WeightedDigraph, REL_TOL};

/// Root `0` joined both ways to leaves `1..n` with unit weights.
pub fn make_bidirected_star(n: usize) -> Result<WeightedDigraph> {
    if n < 2 {
        return Err(Error::input(format!("a star needs at least 2 vertices, got {n}")));
    }
    WeightedDigraph::new(n, (1..n).flat_map(|i| [(0, i, 1.0), (i, 0, 1.0)]))
}

/// `log₂((n−1)² / (2μ + n − 1) + 1)`: the fewest dags any stretch-below-2
/// non-Steiner cover of the `n`-vertex star with `μ` extra edges can use.
pub fn star_lower_bound(n: usize, mu: usize) -> f64 {
    let leaves = (n - 1) as f64;
    (leaves * leaves / (2.0 * mu as f64 + leaves) + 1.0).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarCoverAnalysis {
    pub n: usize,
    pub dags: usize,
    pub extra_edges: usize,
    /// Bit `k` of leaf `i`'s word is set iff dag `k` has the edge `(i, rt)`.
    pub codewords: Vec<String>,
    /// Leaf pairs with no direct edge either way in any dag.
    pub q_size: usize,
    pub q_lower_bound: usize,
    pub bound: f64,
    /// A pair in Q whose codewords coincide.
    pub collision: Option<(usize, usize)>,
    pub consistent: bool,
}

/// Extracts leaf codewords from a certified non-Steiner cover of the star
/// and checks them against the counting argument behind [`star_lower_bound`].
pub fn analyze_star_cover(n: usize, cover: &DagCover, t: f64) -> Result<StarCoverAnalysis> {
    if t.is_nan() || t >= 2.0 {
        return Err(Error::input(format!("stretch {t} is not below 2")));
    }
    if cover.is_steiner() || cover.steiner_vertices() > 0 {
        return Err(Error::input("cover has Steiner vertices"));
    }
    if cover.graph_n() != n {
        return Err(Error::input(format!("cover is over {} vertices, star has {n}", cover.graph_n())));
    }
    let g = make_bidirected_star(n)?;
    let recheck = DagCover::new(n, t, false, cover.dags().to_vec(), cover.provenance.clone())?;
    let cert = certify(&g, &recheck)?;
    if !cert.passed() {
        return Err(Error::input("cover does not certify at the requested stretch"));
    }
    let leaf_pairs: HashSet<(usize, usize)> = cover
        .dags()
        .iter()
        .flat_map(|d| d.edges().iter())
        .filter_map(|&(a, b, _)| match (a, b) {
            (VertexRef::Original(x), VertexRef::Original(y)) if x > 0 && y > 0 => Some((x.min(y), x.max(y))),
            _ => None,
        })
        .collect();
    let words: Vec<Vec<bool>> = (1..n)
        .map(|i| {
            cover
                .dags()
                .iter()
                .map(|d| d.weight(VertexRef::Original(i), VertexRef::Original(0)).is_some())
                .collect()
        })
        .collect();
    let mut q_size = 0;
    let mut collision = None;
    for i in 1..n {
        for j in i + 1..n {
            if leaf_pairs.contains(&(i, j)) {
                continue;
            }
            q_size += 1;
            if collision.is_none() && words[i - 1] == words[j - 1] {
                collision = Some((i, j));
            }
        }
    }
    let mu = count_extra_edges(&g, cover);
    let all_pairs = (n - 1) * (n - 2) / 2;
    let q_lower_bound = all_pairs.saturating_sub(mu);
    let bound = star_lower_bound(n, mu);
    let dags = cover.dags().len();
    let consistent = collision.is_none() && q_size >= q_lower_bound && dags as f64 >= bound - REL_TOL;
    let codewords = words.iter().map(|w| w.iter().map(|&b| if b { '1' } else { '0' }).collect()).collect();
    Ok(StarCoverAnalysis { n, dags, extra_edges: mu, codewords, q_size, q_lower_bound, bound, collision, consistent })
}
