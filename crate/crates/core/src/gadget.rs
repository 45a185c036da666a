//! The vertex gadget: a dag over an ordered member list that routes every
//! order-increasing pair through a fixed center along a zero-weight Steiner
//! chain.

use crate::cover::{SteinerDag, VertexRef};
use crate::error::{Error, Result};
use crate::graph::Dist;

/// A gadget node: the chain node preceding member `i`, or member `i` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetNode {
    Chain(usize),
    Member(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexGadget {
    center: usize,
    members: Vec<usize>,
    chain: Vec<usize>,
    edges: Vec<(GadgetNode, GadgetNode, f64)>,
}

/// Builds the gadget centered at `x` over `members` (in the order the dag
/// must respect). `dist_to_x[v]` is `d(v, x)` and `dist_from_x[v]` is `d(x, v)`.
pub fn build_vertex_gadget(
    dist_to_x: &[Dist],
    dist_from_x: &[Dist],
    members: &[usize],
    x: usize,
) -> Result<VertexGadget> {
    if members.is_empty() {
        return Err(Error::input("gadget needs at least one member"));
    }
    let limit = dist_to_x.len().min(dist_from_x.len());
    if let Some(&v) = members.iter().chain([&x]).find(|&&v| v >= limit) {
        return Err(Error::input(format!("vertex {v} missing from the distance vectors")));
    }
    let k = members.len();
    let mut edges = Vec::with_capacity(3 * k);
    for (i, &v) in members.iter().enumerate() {
        if i + 1 < k {
            edges.push((GadgetNode::Chain(i), GadgetNode::Chain(i + 1), 0.0));
        }
        if let Some(d) = dist_from_x[v] {
            edges.push((GadgetNode::Chain(i), GadgetNode::Member(i), d));
        }
        if i + 1 < k {
            if let Some(d) = dist_to_x[v] {
                edges.push((GadgetNode::Member(i), GadgetNode::Chain(i + 1), d));
            }
        }
    }
    Ok(VertexGadget { center: x, members: members.to_vec(), chain: (0..k).collect(), edges })
}

impl VertexGadget {
    pub fn center(&self) -> usize {
        self.center
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    /// Indices of the chain nodes present (all of them unless sparsified).
    pub fn chain(&self) -> &[usize] {
        &self.chain
    }

    pub fn edges(&self) -> impl Iterator<Item = (GadgetNode, GadgetNode, f64)> + '_ {
        self.edges.iter().copied()
    }

    pub fn steiner_count(&self) -> usize {
        self.chain.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `u_1, v_1, u_2, v_2, ...` restricted to the nodes present.
    pub fn topological_order(&self) -> Vec<GadgetNode> {
        let mut kept = vec![false; self.members.len()];
        for &i in &self.chain {
            kept[i] = true;
        }
        (0..self.members.len())
            .flat_map(|i| kept[i].then_some(GadgetNode::Chain(i)).into_iter().chain([GadgetNode::Member(i)]))
            .collect()
    }

    /// Drops chain nodes with no member edge, bridging the chain across them.
    /// Distances between members are unchanged.
    pub fn sparsified(&self) -> VertexGadget {
        let k = self.members.len();
        let mut used = vec![false; k];
        for &(a, b, _) in &self.edges {
            for node in [a, b] {
                if let GadgetNode::Chain(i) = node {
                    let touches_member = matches!(a, GadgetNode::Member(_)) || matches!(b, GadgetNode::Member(_));
                    used[i] |= touches_member;
                }
            }
        }
        let chain: Vec<usize> = (0..k).filter(|&i| used[i]).collect();
        let mut edges: Vec<_> = chain.windows(2).map(|w| (GadgetNode::Chain(w[0]), GadgetNode::Chain(w[1]), 0.0)).collect();
        edges.extend(self.edges.iter().copied().filter(|&(a, b, _)| {
            matches!(a, GadgetNode::Member(_)) || matches!(b, GadgetNode::Member(_))
        }));
        edges.sort_by_key(|e| (e.0, e.1));
        VertexGadget { center: self.center, members: self.members.clone(), chain, edges }
    }

    /// The gadget as a standalone dag over `0..graph_n`.
    pub fn to_dag(&self, graph_n: usize) -> Result<SteinerDag> {
        let mut sid = vec![usize::MAX; self.members.len()];
        for (j, &i) in self.chain.iter().enumerate() {
            sid[i] = j;
        }
        let map = |node| match node {
            GadgetNode::Chain(i) => VertexRef::Steiner(sid[i]),
            GadgetNode::Member(i) => VertexRef::Original(self.members[i]),
        };
        let mut originals = self.members.clone();
        originals.sort_unstable();
        let edges = self.edges.iter().map(|&(a, b, w)| (map(a), map(b), w)).collect();
        let order = self.topological_order().into_iter().map(map).collect();
        SteinerDag::new(graph_n, originals, self.chain.len(), edges, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{all_pairs_distances, WeightedDigraph};

    fn star7() -> WeightedDigraph {
        WeightedDigraph::new(7, (1..7).flat_map(|i| [(0, i, 1.0), (i, 0, 1.0)])).unwrap()
    }

    #[test]
    fn star_gadget_matches_figure() {
        let g = star7();
        let d = all_pairs_distances(&g);
        let members: Vec<usize> = (0..7).collect();
        let gadget = build_vertex_gadget(&d.column(0), d.row(0), &members, 0).unwrap();
        assert_eq!(gadget.steiner_count(), 7);
        // six chain edges, seven (u_i, v_i), six (v_i, u_{i+1})
        assert_eq!(gadget.edge_count(), 19);
        let dag = gadget.to_dag(7).unwrap();
        for i in 1..7 {
            assert_eq!(dag.distance(VertexRef::Original(0), VertexRef::Original(i)), Some(1.0));
            for j in i + 1..7 {
                assert_eq!(dag.distance(VertexRef::Original(i), VertexRef::Original(j)), Some(2.0));
                assert_eq!(dag.distance(VertexRef::Original(j), VertexRef::Original(i)), None);
            }
        }
        assert!(dag.find_cycle().is_none());
        assert!(dag.order_violation().is_none());
    }

    #[test]
    fn singleton_gadget() {
        let gadget = build_vertex_gadget(&[Some(0.0)], &[Some(0.0)], &[0], 0).unwrap();
        let edges: Vec<_> = gadget.edges().collect();
        assert_eq!(edges, vec![(GadgetNode::Chain(0), GadgetNode::Member(0), 0.0)]);
        assert_eq!(gadget.steiner_count(), 1);
    }

    #[test]
    fn missing_member_is_input_error() {
        assert!(matches!(
            build_vertex_gadget(&[Some(0.0)], &[Some(0.0)], &[0, 3], 0),
            Err(Error::Input(_))
        ));
        assert!(build_vertex_gadget(&[], &[], &[], 0).is_err());
    }

    #[test]
    fn topological_order_interleaves() {
        let gadget = build_vertex_gadget(&[Some(1.0); 3], &[Some(1.0); 3], &[2, 0, 1], 0).unwrap();
        use GadgetNode::*;
        assert_eq!(
            gadget.topological_order(),
            vec![Chain(0), Member(0), Chain(1), Member(1), Chain(2), Member(2)]
        );
    }

    #[test]
    fn sparsified_gadget_keeps_member_distances() {
        // member 1 is unreachable both ways, so its chain node is pure pass-through
        let to = [Some(1.0), None, Some(2.0), Some(0.0)];
        let from = [Some(3.0), None, None, Some(0.0)];
        let gadget = build_vertex_gadget(&to, &from, &[0, 1, 2, 3], 3).unwrap();
        let sparse = gadget.sparsified();
        assert!(sparse.steiner_count() < gadget.steiner_count());
        let (a, b) = (gadget.to_dag(4).unwrap(), sparse.to_dag(4).unwrap());
        for u in 0..4 {
            assert_eq!(a.distances_from(VertexRef::Original(u)), b.distances_from(VertexRef::Original(u)));
        }
    }
}
