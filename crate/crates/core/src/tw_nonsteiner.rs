//! Exact non-Steiner cover with `2⌈log₂(n+1)⌉` dags, driven by antichain
//! codewords over the balanced-separator recursion.

use crate::cover::{DagCover, Provenance, SteinerDag, VertexRef};
use crate::decomposition::{split_active, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances_with, ceil_log2, DistanceMatrix, WeightedDigraph, REL_TOL};
use crate::par::{self, Exec};

/// Fixed-length binary codewords, one per component index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordFamily {
    field_bits: usize,
    words: Vec<Vec<bool>>,
}

impl CodewordFamily {
    /// Total word length: two fields.
    pub fn len(&self) -> usize {
        2 * self.field_bits
    }

    pub fn is_empty(&self) -> bool {
        self.field_bits == 0
    }

    pub fn words(&self) -> &[Vec<bool>] {
        &self.words
    }

    pub fn word(&self, j: usize) -> &[bool] {
        &self.words[j]
    }

    /// Whether no word bitwise-dominates another.
    pub fn is_antichain(&self) -> bool {
        is_antichain(&self.words)
    }
}

/// No word is bitwise at most another (distinct) word.
pub fn is_antichain(words: &[Vec<bool>]) -> bool {
    let below = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| !x || y);
    words.iter().enumerate().all(|(i, a)| {
        words.iter().enumerate().all(|(j, b)| i == j || !below(a, b))
    })
}

/// Word `j` (0-based) is `bin(j) ‖ bin(n − j)`, each field `⌈log₂(n+1)⌉`
/// bits, most significant bit first.
pub fn make_codewords(count: usize, n: usize) -> Result<CodewordFamily> {
    if count > n {
        return Err(Error::input(format!("{count} codewords requested for n = {n}")));
    }
    let field_bits = ceil_log2(n + 1) as usize;
    let field = |x: usize| (0..field_bits).rev().map(move |b| (x >> b) & 1 == 1);
    let words = (0..count).map(|j| field(j).chain(field(n - j)).collect()).collect();
    Ok(CodewordFamily { field_bits, words })
}

/// Number of dags: `2⌈log₂(n+1)⌉`.
pub fn dag_count(n: usize) -> usize {
    2 * ceil_log2(n + 1) as usize
}

/// Extra-edge budget `2n(w+1)⌈log₂(n+1)⌉²`.
pub fn extra_edge_budget(n: usize, width: usize) -> usize {
    let l = ceil_log2(n + 1) as usize;
    2 * n * (width + 1) * l * l
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonSteinerOptions {
    /// Add a direct edge for every pair the layered recursion leaves
    /// inexact (pairs inside one component whose shortest paths leave it).
    pub exactness_patch: bool,
}

impl Default for NonSteinerOptions {
    fn default() -> Self {
        NonSteinerOptions { exactness_patch: true }
    }
}

#[derive(Debug, Clone)]
pub struct NonSteinerCover {
    pub cover: DagCover,
    /// Pairs repaired by the exactness patch.
    pub patched: Vec<(usize, usize)>,
}

pub fn build_tw_nonsteiner_cover(g: &WeightedDigraph, td: &TreeDecomposition) -> Result<NonSteinerCover> {
    build_tw_nonsteiner_cover_with(g, td, NonSteinerOptions::default(), Exec::default())
}

pub fn build_tw_nonsteiner_cover_with(
    g: &WeightedDigraph,
    td: &TreeDecomposition,
    opts: NonSteinerOptions,
    exec: Exec,
) -> Result<NonSteinerCover> {
    let n = g.n();
    let count = dag_count(n);
    let d = all_pairs_distances_with(g, exec);
    let mut edges: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); count];
    let orders = if n == 0 {
        vec![Vec::new(); count]
    } else {
        Layered { g, td, d: &d, n, count }.build((0..n).collect(), &mut edges)?
    };
    let patched = if opts.exactness_patch { patch_pairs(&d, &edges, &orders, exec) } else { Vec::new() };
    for &(u, v, i) in &patched {
        edges[i].push((u, v, d.get(u, v).expect("patched pairs are reachable")));
    }
    let dags = edges
        .into_iter()
        .zip(&orders)
        .map(|(es, order)| {
            let es = es.into_iter().map(|(a, b, w)| (VertexRef::Original(a), VertexRef::Original(b), w)).collect();
            SteinerDag::new(n, (0..n).collect(), 0, es, order.iter().map(|&v| VertexRef::Original(v)).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let provenance = Provenance::new("tw-nonsteiner")
        .with("n", n)
        .with("td_width", td.width())
        .with("exactness_patch", opts.exactness_patch)
        .with("patched_pairs", patched.len());
    let cover = DagCover::new(n, 1.0, false, dags, provenance)?;
    Ok(NonSteinerCover { cover, patched: patched.into_iter().map(|(u, v, _)| (u, v)).collect() })
}

struct Layered<'a> {
    g: &'a WeightedDigraph,
    td: &'a TreeDecomposition,
    d: &'a DistanceMatrix,
    n: usize,
    count: usize,
}

impl Layered<'_> {
    /// Returns, per dag, the layered order of `active`; pushes edges.
    fn build(&self, active: Vec<usize>, edges: &mut [Vec<(usize, usize, f64)>]) -> Result<Vec<Vec<usize>>> {
        if active.len() == 1 {
            return Ok(vec![active; self.count]);
        }
        let (bag, comps) = split_active(self.g, self.td, &active)?;
        let child_orders = comps
            .iter()
            .map(|c| self.build(c.clone(), edges))
            .collect::<Result<Vec<_>>>()?;
        let words = make_codewords(comps.len(), self.n)?;
        let mut orders = Vec::with_capacity(self.count);
        for (i, dag_edges) in edges.iter_mut().enumerate() {
            let mut order = Vec::with_capacity(active.len());
            let bit = |j: usize| words.word(j)[i];
            for (j, comp) in comps.iter().enumerate() {
                if bit(j) {
                    order.extend_from_slice(&child_orders[j][i]);
                    for &c in comp {
                        for &b in &bag {
                            if let Some(w) = self.d.get(c, b) {
                                dag_edges.push((c, b, w));
                            }
                        }
                    }
                }
            }
            let mut bag_order = bag.clone();
            if i == 1 {
                bag_order.reverse();
            }
            if i < 2 {
                for (a, &x) in bag_order.iter().enumerate() {
                    for &y in &bag_order[a + 1..] {
                        if let Some(w) = self.d.get(x, y) {
                            dag_edges.push((x, y, w));
                        }
                    }
                }
            }
            order.extend_from_slice(&bag_order);
            for (j, comp) in comps.iter().enumerate() {
                if !bit(j) {
                    order.extend_from_slice(&child_orders[j][i]);
                    for &c in comp {
                        for &b in &bag {
                            if let Some(w) = self.d.get(b, c) {
                                dag_edges.push((b, c, w));
                            }
                        }
                    }
                }
            }
            orders.push(order);
        }
        Ok(orders)
    }
}

/// Pairs `(u, v)` with no exact dag path, each assigned to the first dag
/// ordering `u` before `v`.
fn patch_pairs(
    d: &DistanceMatrix,
    edges: &[Vec<(usize, usize, f64)>],
    orders: &[Vec<usize>],
    exec: Exec,
) -> Vec<(usize, usize, usize)> {
    let n = d.n();
    let pos: Vec<Vec<usize>> = orders
        .iter()
        .map(|o| {
            let mut p = vec![0; n];
            for (k, &v) in o.iter().enumerate() {
                p[v] = k;
            }
            p
        })
        .collect();
    let out: Vec<Vec<Vec<(usize, f64)>>> = edges
        .iter()
        .map(|es| {
            let mut adj = vec![Vec::new(); n];
            for &(a, b, w) in es {
                adj[a].push((b, w));
            }
            adj
        })
        .collect();
    let per_source = par::map_range(exec, n, |u| {
        let mut best = vec![f64::INFINITY; n];
        for (i, order) in orders.iter().enumerate() {
            let mut dist = vec![f64::INFINITY; n];
            dist[u] = 0.0;
            for &x in &order[pos[i][u]..] {
                if dist[x].is_finite() {
                    for &(y, w) in &out[i][x] {
                        dist[y] = dist[y].min(dist[x] + w);
                    }
                }
            }
            for v in 0..n {
                best[v] = best[v].min(dist[v]);
            }
        }
        (0..n)
            .filter(|&v| v != u)
            .filter_map(|v| {
                let dg = d.get(u, v)?;
                if best[v] <= dg * (1.0 + REL_TOL) {
                    return None;
                }
                let i = (0..orders.len()).find(|&i| pos[i][u] < pos[i][v])?;
                Some((u, v, i))
            })
            .collect::<Vec<_>>()
    });
    per_source.into_iter().flatten().collect()
}
