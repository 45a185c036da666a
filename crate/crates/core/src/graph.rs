//! Weighted digraphs, shortest paths and topological orders.
//!
//! Distances are `Option<f64>`: `None` is the explicit "unreachable" value and
//! never appears as a large in-band number. Shortest-path trees break ties
//! toward the smallest predecessor id so that every construction built on top
//! of them is reproducible.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// A shortest-path distance; `None` means the target is unreachable.
pub type Dist = Option<f64>;

/// Relative tolerance used by every stretch and domination comparison.
pub const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub weight: f64,
}

/// Compressed adjacency lists over `0..n` with non-negative weights.
#[derive(Debug, Clone, Default)]
pub(crate) struct Csr {
    start: Vec<usize>,
    adj: Vec<(usize, f64)>,
}

impl Csr {
    /// Builds adjacency from `(from, to, weight)` triples; neighbour lists are
    /// sorted by target id.
    pub(crate) fn from_triples(n: usize, triples: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut items: Vec<(usize, usize, f64)> = triples.into_iter().collect();
        items.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        let mut start = vec![0usize; n + 1];
        for &(u, _, _) in &items {
            start[u + 1] += 1;
        }
        for i in 0..n {
            start[i + 1] += start[i];
        }
        let adj = items.into_iter().map(|(_, v, w)| (v, w)).collect();
        Csr { start, adj }
    }

    pub(crate) fn n(&self) -> usize {
        self.start.len().saturating_sub(1)
    }

    pub(crate) fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[self.start[v]..self.start[v + 1]]
    }
}

/// A simple weighted digraph on the dense vertex set `0..n`.
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    n: usize,
    edges: Vec<Edge>,
    out: Csr,
    inc: Csr,
}

impl WeightedDigraph {
    /// Builds a digraph, rejecting self-loops, out-of-range endpoints and
    /// non-positive or non-finite weights. Parallel edges collapse to the
    /// minimum weight.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut list: Vec<Edge> = Vec::new();
        for (tail, head, weight) in edges {
            if tail >= n || head >= n {
                return Err(Error::input(format!("edge ({tail},{head}) outside 0..{n}")));
            }
            if tail == head {
                return Err(Error::input(format!("self-loop at vertex {tail}")));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::input(format!(
                    "edge ({tail},{head}) has invalid weight {weight}"
                )));
            }
            list.push(Edge { tail, head, weight });
        }
        list.sort_by(|a, b| {
            (a.tail, a.head)
                .cmp(&(b.tail, b.head))
                .then(a.weight.total_cmp(&b.weight))
        });
        list.dedup_by(|later, kept| later.tail == kept.tail && later.head == kept.head);
        let out = Csr::from_triples(n, list.iter().map(|e| (e.tail, e.head, e.weight)));
        let inc = Csr::from_triples(n, list.iter().map(|e| (e.head, e.tail, e.weight)));
        Ok(WeightedDigraph {
            n,
            edges: list,
            out,
            inc,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edges sorted by `(tail, head)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Outgoing `(head, weight)` pairs of `v`, sorted by head.
    pub fn out_edges(&self, v: usize) -> &[(usize, f64)] {
        self.out.neighbors(v)
    }

    /// Incoming `(tail, weight)` pairs of `v`, sorted by tail.
    pub fn in_edges(&self, v: usize) -> &[(usize, f64)] {
        self.inc.neighbors(v)
    }

    pub fn weight(&self, tail: usize, head: usize) -> Option<f64> {
        let nb = self.out.neighbors(tail);
        nb.binary_search_by(|&(h, _)| h.cmp(&head)).ok().map(|i| nb[i].1)
    }

    pub fn has_edge(&self, tail: usize, head: usize) -> bool {
        self.weight(tail, head).is_some()
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.edges.iter().map(|e| e.weight).min_by(f64::total_cmp)
    }

    /// Sorted neighbours of `v` in the underlying undirected graph.
    pub fn undirected_neighbors(&self, v: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .out_edges(v)
            .iter()
            .chain(self.in_edges(v))
            .map(|&(u, _)| u)
            .collect();
        set.into_iter().collect()
    }

    pub(crate) fn csr(&self, dir: Direction) -> &Csr {
        match dir {
            Direction::Forward => &self.out,
            Direction::Backward => &self.inc,
        }
    }
}

/// Search direction: `Forward` computes `d(s, ·)`, `Backward` computes `d(·, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem {
    dist: f64,
    vertex: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (dist, vertex)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) const NO_PRED: usize = usize::MAX;

/// Raw single-source (or multi-source) search result.
#[derive(Debug, Clone)]
pub(crate) struct Sssp {
    pub dist: Vec<f64>,
    pub pred: Vec<usize>,
}

impl Sssp {
    pub(crate) fn get(&self, v: usize) -> Dist {
        let d = self.dist[v];
        d.is_finite().then_some(d)
    }
}

/// Dijkstra over `csr` from `sources` (all at distance 0). Vertices with
/// `allowed[v] == false` are never entered; vertices farther than `radius`
/// stay unreached. Equal-distance predecessors resolve to the smallest id.
pub(crate) fn dijkstra(csr: &Csr, sources: &[usize], allowed: Option<&[bool]>, radius: Option<f64>) -> Sssp {
    let n = csr.n();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![NO_PRED; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &s in sources {
        if allowed.is_some_and(|a| !a[s]) {
            continue;
        }
        dist[s] = 0.0;
        heap.push(HeapItem { dist: 0.0, vertex: s });
    }
    while let Some(HeapItem { dist: d, vertex: u }) = heap.pop() {
        if done[u] || d > dist[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in csr.neighbors(u) {
            if done[v] || allowed.is_some_and(|a| !a[v]) {
                continue;
            }
            let nd = d + w;
            if radius.is_some_and(|r| nd > r) {
                continue;
            }
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u;
                heap.push(HeapItem { dist: nd, vertex: v });
            } else if nd == dist[v] && u < pred[v] {
                pred[v] = u;
            }
        }
    }
    Sssp { dist, pred }
}

/// Exact distances `d(source, ·)`.
pub fn single_source_distances(g: &WeightedDigraph, source: usize) -> Result<Vec<Dist>> {
    Ok(shortest_path_tree(g, source, Direction::Forward)?.0)
}

/// Distances and tie-broken predecessor pointers from (or, backward, to) `source`.
pub fn shortest_path_tree(
    g: &WeightedDigraph,
    source: usize,
    dir: Direction,
) -> Result<(Vec<Dist>, Vec<Option<usize>>)> {
    if source >= g.n() {
        return Err(Error::input(format!("source {source} outside 0..{}", g.n())));
    }
    let s = dijkstra(g.csr(dir), &[source], None, None);
    let dist = (0..g.n()).map(|v| s.get(v)).collect();
    let pred = s.pred.iter().map(|&p| (p != NO_PRED).then_some(p)).collect();
    Ok((dist, pred))
}

/// Distances from (or to) `source` inside the subgraph induced by `mask`.
pub fn distances_within(g: &WeightedDigraph, source: usize, mask: &[bool], dir: Direction) -> Vec<Dist> {
    let s = dijkstra(g.csr(dir), &[source], Some(mask), None);
    (0..g.n()).map(|v| s.get(v)).collect()
}

/// All-pairs shortest-path distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Dist>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<Dist>>) -> Self {
        let n = rows.len();
        let dist = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(dist.len(), n * n, "distance rows must be square");
        DistanceMatrix { n, dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Dist {
        self.dist[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[Dist] {
        &self.dist[u * self.n..(u + 1) * self.n]
    }

    /// Column `v`, i.e. `d(·, v)`.
    pub fn column(&self, v: usize) -> Vec<Dist> {
        (0..self.n).map(|u| self.get(u, v)).collect()
    }

    /// Iterates `(u, v, d)` over ordered pairs `u != v` with `u ⇝ v`.
    pub fn reachable_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |u| {
            (0..self.n).filter_map(move |v| match self.get(u, v) {
                Some(d) if u != v => Some((u, v, d)),
                _ => None,
            })
        })
    }
}

pub fn all_pairs_distances(g: &WeightedDigraph) -> DistanceMatrix {
    all_pairs_distances_with(g, Exec::default())
}

/// All-pairs distances; rows are computed independently under `exec`.
pub fn all_pairs_distances_with(g: &WeightedDigraph, exec: Exec) -> DistanceMatrix {
    let rows = par::map_range(exec, g.n(), |s| {
        let sp = dijkstra(g.csr(Direction::Forward), &[s], None, None);
        (0..g.n()).map(|v| sp.get(v)).collect::<Vec<_>>()
    });
    DistanceMatrix::from_rows(rows)
}

/// Ratio of the largest to the smallest finite distance over pairs `u != v`.
pub fn aspect_ratio(d: &DistanceMatrix) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (_, _, x) in d.reachable_pairs() {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !lo.is_finite() {
        return Err(Error::input("aspect ratio undefined: no reachable pair"));
    }
    Ok(hi / lo)
}

/// Divides every weight by the minimum weight; returns the scale that
/// restores the original weights. Edgeless graphs come back unchanged.
pub fn normalize_weights(g: &WeightedDigraph) -> (WeightedDigraph, f64) {
    let Some(scale) = g.min_weight() else {
        return (g.clone(), 1.0);
    };
    if scale == 1.0 {
        return (g.clone(), 1.0);
    }
    let edges = g.edges().iter().map(|e| (e.tail, e.head, e.weight / scale));
    let h = WeightedDigraph::new(g.n(), edges).expect("rescaled weights stay positive");
    (h, scale)
}

/// Outcome of [`check_acyclic_and_order`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    /// A topological order (Kahn's algorithm, smallest available id first).
    Dag(Vec<usize>),
    /// A closed directed walk `v0, v1, ..., v0` present in the edge set.
    Cycle(Vec<usize>),
}

impl Acyclicity {
    pub fn is_dag(&self) -> bool {
        matches!(self, Acyclicity::Dag(_))
    }
}

/// Topologically sorts `0..n` under `edges`, or returns a cycle witness.
pub fn check_acyclic_and_order(n: usize, edges: &[(usize, usize)]) -> Acyclicity {
    let mut indeg = vec![0usize; n];
    let out = Csr::from_triples(n, edges.iter().map(|&(u, v)| (u, v, 0.0)));
    for &(_, v) in edges {
        indeg[v] += 1;
    }
    let mut ready: BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(std::cmp::Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(u)) = ready.pop() {
        order.push(u);
        for &(v, _) in out.neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(std::cmp::Reverse(v));
            }
        }
    }
    if order.len() == n {
        return Acyclicity::Dag(order);
    }
    // Every leftover vertex has a leftover in-neighbour; walk backwards until a repeat.
    let left: Vec<bool> = indeg.iter().map(|&d| d > 0).collect();
    let inc = Csr::from_triples(n, edges.iter().map(|&(u, v)| (v, u, 0.0)));
    let start = (0..n).find(|&v| left[v]).expect("leftover vertex exists");
    let mut seen = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut cur = start;
    while seen[cur] == usize::MAX {
        seen[cur] = walk.len();
        walk.push(cur);
        cur = inc
            .neighbors(cur)
            .iter()
            .map(|&(p, _)| p)
            .find(|&p| left[p])
            .expect("leftover vertex has a leftover in-neighbour");
    }
    let mut cycle: Vec<usize> = walk[seen[cur]..].to_vec();
    cycle.reverse();
    let min_at = (0..cycle.len()).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(min_at);
    cycle.push(cycle[0]);
    Acyclicity::Cycle(cycle)
}

/// A permutation of `0..n` together with its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    order: Vec<usize>,
    inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut inverse = vec![usize::MAX; n];
        for (k, &v) in order.iter().enumerate() {
            if v >= n || inverse[v] != usize::MAX {
                return Err(Error::input(format!("order is not a permutation of 0..{n}")));
            }
            inverse[v] = k;
        }
        Ok(Permutation { order, inverse })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            order: (0..n).collect(),
            inverse: (0..n).collect(),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn position(&self, v: usize) -> usize {
        self.inverse[v]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let order: Vec<usize> = self.order.iter().rev().copied().collect();
        Permutation::new(order).expect("reversal of a permutation")
    }
}

/// Weakly connected components of the subgraph induced by `mask` (all
/// vertices when `None`), each sorted, ordered by smallest member.
pub fn weak_components(g: &WeightedDigraph, mask: Option<&[bool]>) -> Vec<Vec<usize>> {
    let inside = |v: usize| mask.is_none_or(|m| m[v]);
    let mut comp = vec![usize::MAX; g.n()];
    let mut out = Vec::new();
    for s in 0..g.n() {
        if !inside(s) || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, _) in g.out_edges(u).iter().chain(g.in_edges(u)) {
                if inside(v) && comp[v] == usize::MAX {
                    comp[v] = id;
                    members.push(v);
                    stack.push(v);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Smallest `b` with `2^b >= x` (0 for `x <= 1`).
pub fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}
