//! Tree and path decompositions: validation, min-fill construction and
//! balanced separator bags.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{weak_components, WeightedDigraph};

/// A tree decomposition. Bags are sorted vertex lists; `tree` lists the
/// undirected edges between bag indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree
    }

    /// Largest bag size minus one (0 for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn adjacency(&self) -> Result<Vec<Vec<usize>>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            if a >= self.bags.len() || b >= self.bags.len() {
                return Err(Error::structural(format!(
                    "tree edge ({a},{b}) references a missing bag"
                )));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(adj)
    }
}

/// A path decomposition: bag `i` is adjacent to bag `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathDecomposition {
    bags: Vec<Vec<usize>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<usize>>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        PathDecomposition { bags }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let tree = (1..self.bags.len()).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(self.bags.clone(), tree)
    }

    /// First vertex whose bag indices do not form a contiguous interval.
    pub fn non_contiguous_vertex(&self) -> Option<usize> {
        let mut first: Vec<Option<(usize, usize)>> = Vec::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= first.len() {
                    first.resize(v + 1, None);
                }
                match first[v] {
                    None => first[v] = Some((i, i)),
                    Some((lo, hi)) if hi + 1 == i => first[v] = Some((lo, i)),
                    Some(_) => return Some(v),
                }
            }
        }
        None
    }
}

/// Per-property outcome of [`validate_decomposition`], each with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidityReport {
    /// A graph vertex found in no bag.
    pub uncovered_vertex: Option<usize>,
    /// An edge whose endpoints share no bag.
    pub uncovered_edge: Option<(usize, usize)>,
    /// A vertex whose bags do not induce a connected subtree.
    pub disconnected_vertex: Option<usize>,
    /// The bag graph is not a tree (wrong edge count or disconnected).
    pub not_a_tree: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.uncovered_vertex.is_none()
            && self.uncovered_edge.is_none()
            && self.disconnected_vertex.is_none()
            && !self.not_a_tree
    }
}

pub fn validate_decomposition(g: &WeightedDigraph, td: &TreeDecomposition) -> Result<ValidityReport> {
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.tail, e.head)).collect();
    validate_decomposition_of(g.n(), &edges, td)
}

/// Validates `td` against the undirected skeleton of `edges` on `0..n`.
pub fn validate_decomposition_of(
    n: usize,
    edges: &[(usize, usize)],
    td: &TreeDecomposition,
) -> Result<ValidityReport> {
    let adj = td.adjacency()?;
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(Error::structural(format!("bag {i} holds vertex {v} outside 0..{n}")));
            }
            holders[v].push(i);
        }
    }
    let mut report = ValidityReport::default();
    let k = td.bags.len();
    if k > 0 {
        let reached = bfs_reach(&adj, 0, |_| true);
        report.not_a_tree = td.tree.len() != k - 1 || reached.iter().any(|r| !r);
    } else {
        report.not_a_tree = n > 0;
    }
    report.uncovered_vertex = (0..n).find(|&v| holders[v].is_empty());
    report.uncovered_edge = edges.iter().copied().find(|&(u, v)| {
        let (a, b) = (&holders[u], &holders[v]);
        !a.iter().any(|i| b.binary_search(i).is_ok())
    });
    let mut in_set = vec![false; k];
    report.disconnected_vertex = (0..n).find(|&v| {
        let hs = &holders[v];
        if hs.len() <= 1 {
            return false;
        }
        for &i in hs {
            in_set[i] = true;
        }
        let reached = bfs_reach(&adj, hs[0], |i| in_set[i]);
        let ok = hs.iter().all(|&i| reached[i]);
        for &i in hs {
            in_set[i] = false;
        }
        !ok
    });
    Ok(report)
}

fn bfs_reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] && allowed(v) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// Min-fill elimination on the undirected skeleton. Ties break by fewer
/// remaining neighbours, then by smaller vertex id. Bag `i` belongs to the
/// `i`-th eliminated vertex.
pub fn heuristic_tree_decomposition(g: &WeightedDigraph) -> TreeDecomposition {
    let n = g.n();
    let mut nbrs: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.undirected_neighbors(v).into_iter().collect())
        .collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![usize::MAX; n];
    let mut bags = Vec::with_capacity(n);
    let mut later_nbrs = Vec::with_capacity(n);
    for step in 0..n {
        let v = (0..n)
            .filter(|&v| !eliminated[v])
            .min_by_key(|&v| (fill_in(&nbrs, v), nbrs[v].len(), v))
            .expect("a vertex remains");
        let around: Vec<usize> = nbrs[v].iter().copied().collect();
        for (i, &a) in around.iter().enumerate() {
            for &b in &around[i + 1..] {
                nbrs[a].insert(b);
                nbrs[b].insert(a);
            }
        }
        for &a in &around {
            nbrs[a].remove(&v);
        }
        eliminated[v] = true;
        position[v] = step;
        let mut bag = around.clone();
        bag.push(v);
        bags.push(bag);
        later_nbrs.push(around);
    }
    let mut tree = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, later) in later_nbrs.iter().enumerate() {
        match later.iter().map(|&u| position[u]).min() {
            Some(j) => tree.push((i, j)),
            None => {
                if let Some(r) = last_root {
                    tree.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    TreeDecomposition::new(bags, tree)
}

fn fill_in(nbrs: &[BTreeSet<usize>], v: usize) -> usize {
    let around: Vec<usize> = nbrs[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in around.iter().enumerate() {
        for &b in &around[i + 1..] {
            if !nbrs[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Finds a bag whose removal leaves every weakly connected component of the
/// active set with at most `|active| / 2` vertices, by walking the tree from
/// bag 0 toward the unique side holding more than half of the active vertices.
///
/// `active` must be sorted; `td` is restricted to it implicitly.
pub fn find_balanced_bag(td: &TreeDecomposition, n: usize, active: &[usize]) -> Result<usize> {
    if td.bags.is_empty() {
        return Err(Error::structural("decomposition has no bags"));
    }
    let adj = td.adjacency()?;
    let mut mask = vec![false; n];
    for &v in active {
        mask[v] = true;
    }
    let k = td.bags.len();
    let mut parent = vec![usize::MAX; k];
    let mut seen = vec![false; k];
    let mut order = Vec::with_capacity(k);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(b) = queue.pop_front() {
        order.push(b);
        for &c in &adj[b] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = b;
                queue.push_back(c);
            }
        }
    }
    // Each active vertex is charged to the bag closest to the start that holds it.
    let mut charged = vec![false; n];
    let mut below = vec![0usize; k];
    for &b in &order {
        for &v in &td.bags[b] {
            if v < n && mask[v] && !charged[v] {
                charged[v] = true;
                below[b] += 1;
            }
        }
    }
    if let Some(&v) = active.iter().find(|&&v| !charged[v]) {
        return Err(Error::structural(format!("active vertex {v} is in no reachable bag")));
    }
    for &b in order.iter().rev() {
        if parent[b] != usize::MAX {
            below[parent[b]] += below[b];
        }
    }
    let total = active.len();
    let mut cur = 0usize;
    loop {
        let heavy = adj[cur]
            .iter()
            .copied()
            .filter(|&c| parent[c] == cur && 2 * below[c] > total)
            .min();
        match heavy {
            Some(c) => cur = c,
            None => return Ok(cur),
        }
    }
}

/// The active vertices of bag `b`.
pub fn restricted_bag(td: &TreeDecomposition, b: usize, mask: &[bool]) -> Vec<usize> {
    td.bags[b].iter().copied().filter(|&v| v < mask.len() && mask[v]).collect()
}

/// Weakly connected components of `G[active \ bag]`, ordered by smallest id.
pub fn restrict_components(g: &WeightedDigraph, active: &[usize], bag: &[usize]) -> Vec<Vec<usize>> {
    let mut mask = vec![false; g.n()];
    for &v in active {
        mask[v] = true;
    }
    for &v in bag {
        mask[v] = false;
    }
    weak_components(g, Some(&mask))
}

/// Balanced bag plus components, checking the half-size bound. Bag vertices
/// whose removal from the separator keeps it balanced are dropped, trying
/// them in ascending order.
pub(crate) fn split_active(
    g: &WeightedDigraph,
    td: &TreeDecomposition,
    active: &[usize],
) -> Result<(Vec<usize>, Vec<Vec<usize>>)> {
    let b = find_balanced_bag(td, g.n(), active)?;
    let mut mask = vec![false; g.n()];
    for &v in active {
        mask[v] = true;
    }
    let mut bag = restricted_bag(td, b, &mask);
    let balanced = |comps: &[Vec<usize>]| comps.iter().all(|c| 2 * c.len() <= active.len());
    let mut comps = restrict_components(g, active, &bag);
    if let Some(c) = comps.iter().find(|c| 2 * c.len() > active.len()) {
        return Err(Error::structural(format!(
            "bag {b} leaves a component of {} > {}/2 vertices; decomposition invalid",
            c.len(),
            active.len()
        )));
    }
    let mut i = 0;
    while i < bag.len() && bag.len() > 1 {
        let mut trial = bag.clone();
        trial.remove(i);
        let trial_comps = restrict_components(g, active, &trial);
        if balanced(&trial_comps) {
            bag = trial;
            comps = trial_comps;
        } else {
            i += 1;
        }
    }
    Ok((bag, comps))
}
