//! Exact two-dag Steiner cover for bounded-treewidth digraphs, with one
//! path decomposition per dag.

use crate::cover::{DagAssembler, DagCover, Provenance, SteinerDag, VertexRef};
use crate::decomposition::{split_active, PathDecomposition, TreeDecomposition};
use crate::error::{Error, Result};
use crate::gadget::{build_vertex_gadget, VertexGadget};
use crate::graph::{ceil_log2, distances_within, Direction, Permutation, WeightedDigraph};
use crate::par::{self, Exec};

/// One node of the balanced-separator recursion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecursionNode {
    pub active: Vec<usize>,
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nodes in creation order; node 0 is the root (absent for an empty graph).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecursionTree {
    pub nodes: Vec<RecursionNode>,
}

impl RecursionTree {
    /// Build the recursion over `g` using bags of `td` restricted to each
    /// active set.
    pub fn build(g: &WeightedDigraph, td: &TreeDecomposition) -> Result<Self> {
        let mut tree = RecursionTree::default();
        if g.n() > 0 {
            tree.grow(g, td, (0..g.n()).collect())?;
        }
        Ok(tree)
    }

    fn grow(&mut self, g: &WeightedDigraph, td: &TreeDecomposition, active: Vec<usize>) -> Result<usize> {
        let id = self.nodes.len();
        let (bag, comps) = if active.len() == 1 {
            (active.clone(), Vec::new())
        } else {
            split_active(g, td, &active)?
        };
        self.nodes.push(RecursionNode { active, bag, children: Vec::new() });
        for comp in comps {
            let child = self.grow(g, td, comp)?;
            self.nodes[id].children.push(child);
        }
        Ok(id)
    }

    /// Bag first, then each child's vertices contiguously, recursively.
    pub fn permutation(&self) -> Permutation {
        let mut order = Vec::new();
        if !self.nodes.is_empty() {
            self.emit(0, &mut order);
        }
        Permutation::new(order).expect("recursion partitions the vertex set")
    }

    fn emit(&self, id: usize, order: &mut Vec<usize>) {
        order.extend_from_slice(&self.nodes[id].bag);
        for &c in &self.nodes[id].children {
            self.emit(c, order);
        }
    }

    pub fn depth(&self) -> usize {
        fn go(t: &RecursionTree, id: usize) -> usize {
            1 + t.nodes[id].children.iter().map(|&c| go(t, c)).max().unwrap_or(0)
        }
        if self.nodes.is_empty() {
            0
        } else {
            go(self, 0)
        }
    }
}

pub fn pathwidth_friendly_permutation(
    g: &WeightedDigraph,
    td: &TreeDecomposition,
) -> Result<(Permutation, RecursionTree)> {
    let tree = RecursionTree::build(g, td)?;
    Ok((tree.permutation(), tree))
}

/// Per-dag edge budget `3n(w+1)⌈log₂ n⌉`.
pub fn edge_budget(n: usize, width: usize) -> usize {
    3 * n * (width + 1) * ceil_log2(n) as usize
}

/// Path-decomposition width budget `2(w+1)⌈log₂ n⌉`.
pub fn pathwidth_budget(n: usize, width: usize) -> usize {
    2 * (width + 1) * ceil_log2(n) as usize
}

#[derive(Debug, Clone)]
pub struct TwSteinerCover {
    pub cover: DagCover,
    /// Path decompositions of the two dags over their internal vertex
    /// indices: original `v` is `v`, Steiner `k` is `n + k`.
    pub path_decompositions: [PathDecomposition; 2],
    pub sigma: Permutation,
    pub recursion: RecursionTree,
}

/// Builds the cover from a tree decomposition of `g`.
pub fn tw_steiner_cover(g: &WeightedDigraph, td: &TreeDecomposition) -> Result<TwSteinerCover> {
    tw_steiner_cover_with(g, td, Exec::default())
}

pub fn tw_steiner_cover_with(g: &WeightedDigraph, td: &TreeDecomposition, exec: Exec) -> Result<TwSteinerCover> {
    let (sigma, tree) = pathwidth_friendly_permutation(g, td)?;
    let (cover, pds) = build_tw_steiner_cover(g, td, &sigma, &tree, exec)?;
    Ok(TwSteinerCover { cover, path_decompositions: pds, sigma, recursion: tree })
}

/// Gadget union over the recursion under `sigma` and under its reverse.
pub fn build_tw_steiner_cover(
    g: &WeightedDigraph,
    td: &TreeDecomposition,
    sigma: &Permutation,
    tree: &RecursionTree,
    exec: Exec,
) -> Result<(DagCover, [PathDecomposition; 2])> {
    let n = g.n();
    if sigma.len() != n {
        return Err(Error::input(format!("permutation has {} entries for {n} vertices", sigma.len())));
    }
    // Singleton nodes would only contribute a lone zero-weight edge.
    let jobs: Vec<(usize, usize)> = tree
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, node)| node.active.len() > 1)
        .flat_map(|(id, node)| node.bag.iter().map(move |&x| (id, x)))
        .collect();
    let gadgets: Vec<Result<(VertexGadget, VertexGadget)>> = par::map(exec, &jobs, |&(id, x)| {
        let node = &tree.nodes[id];
        let mut mask = vec![false; n];
        for &v in &node.active {
            mask[v] = true;
        }
        let to_x = distances_within(g, x, &mask, Direction::Backward);
        let from_x = distances_within(g, x, &mask, Direction::Forward);
        let mut members = node.active.clone();
        members.sort_by_key(|&v| sigma.position(v));
        let fwd = build_vertex_gadget(&to_x, &from_x, &members, x)?;
        members.reverse();
        let rev = build_vertex_gadget(&to_x, &from_x, &members, x)?;
        Ok((fwd, rev))
    });
    let reversed = sigma.reversed();
    let mut dags = Vec::with_capacity(2);
    let mut pds = Vec::with_capacity(2);
    for (side, perm) in [sigma, &reversed].into_iter().enumerate() {
        let mut asm = DagAssembler::new((0..n).map(|v| perm.position(v)).collect());
        let mut bags: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for gadget in &gadgets {
            let gadget = match gadget {
                Ok(pair) if side == 0 => &pair.0,
                Ok(pair) => &pair.1,
                Err(e) => return Err(Error::structural(e.to_string())),
            };
            let ids = asm.add_gadget(gadget);
            for (k, &v) in gadget.members().iter().enumerate() {
                for s in ids[k..].iter().take(2).flatten() {
                    bags[v].push(n + s);
                }
            }
        }
        dags.push(asm.finish()?);
        pds.push(PathDecomposition::new(perm.order().iter().map(|&v| std::mem::take(&mut bags[v])).collect()));
    }
    let provenance = Provenance::new("tw-steiner")
        .with("n", n)
        .with("td_width", td.width())
        .with("recursion_depth", tree.depth());
    let cover = DagCover::new(n, 1.0, true, dags, provenance)?;
    let pds: [PathDecomposition; 2] = pds.try_into().expect("two sides");
    Ok((cover, pds))
}

/// Edges of `dag` as pairs of internal indices (Steiner `k` is `n + k`),
/// for validating the emitted path decompositions.
pub fn internal_edge_pairs(dag: &SteinerDag) -> Vec<(usize, usize)> {
    let n = dag.graph_n();
    let idx = |r: VertexRef| match r {
        VertexRef::Original(v) => v,
        VertexRef::Steiner(k) => n + k,
    };
    dag.edges().iter().map(|&(a, b, _)| (idx(a), idx(b))).collect()
}
