//! Recursive halving of a path at its middle vertex.

use crate::error::{Error, Result};

/// A subpath `[lo, hi]` (positions on the path) split at `centroid`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentroidNode {
    pub lo: usize,
    pub hi: usize,
    pub centroid: usize,
    pub parent: Option<usize>,
    pub left: Option<usize>,
    pub right: Option<usize>,
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentroidHierarchy {
    vertices: Vec<usize>,
    nodes: Vec<CentroidNode>,
    /// Node whose centroid sits at each path position.
    node_at: Vec<usize>,
}

/// Node 0 is the whole path; an even-length subpath splits at the earlier of
/// its two middle vertices.
pub fn build_centroid_hierarchy(path: &[usize]) -> Result<CentroidHierarchy> {
    if path.is_empty() {
        return Err(Error::input("centroid hierarchy of an empty path"));
    }
    let mut h = CentroidHierarchy { vertices: path.to_vec(), nodes: Vec::new(), node_at: vec![0; path.len()] };
    let mut stack = vec![(0, path.len() - 1, None, 0usize, false)];
    while let Some((lo, hi, parent, depth, is_right)) = stack.pop() {
        let id = h.nodes.len();
        let centroid = lo + (hi - lo) / 2;
        h.nodes.push(CentroidNode { lo, hi, centroid, parent, left: None, right: None, depth });
        h.node_at[centroid] = id;
        if let Some(p) = parent {
            let slot: &mut CentroidNode = &mut h.nodes[p];
            if is_right {
                slot.right = Some(id);
            } else {
                slot.left = Some(id);
            }
        }
        if centroid < hi {
            stack.push((centroid + 1, hi, Some(id), depth + 1, true));
        }
        if centroid > lo {
            stack.push((lo, centroid - 1, Some(id), depth + 1, false));
        }
    }
    Ok(h)
}

impl CentroidHierarchy {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn nodes(&self) -> &[CentroidNode] {
        &self.nodes
    }

    pub fn centroid_vertex(&self, node: usize) -> usize {
        self.vertices[self.nodes[node].centroid]
    }

    /// Number of levels.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth + 1).max().unwrap_or(0)
    }

    /// Nodes whose subpath contains position `pos`, root first; the last one
    /// has its centroid at `pos`.
    pub fn ancestors(&self, pos: usize) -> Vec<usize> {
        let mut chain = Vec::new();
        let mut cur = Some(self.node_at[pos]);
        while let Some(c) = cur {
            chain.push(c);
            cur = self.nodes[c].parent;
        }
        chain.reverse();
        chain
    }

    /// The smallest subpath containing both positions.
    pub fn deepest_common(&self, a: usize, b: usize) -> usize {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut cur = 0;
        loop {
            let node = &self.nodes[cur];
            if hi < node.centroid {
                cur = node.left.expect("position lies in the left part");
            } else if lo > node.centroid {
                cur = node.right.expect("position lies in the right part");
            } else {
                return cur;
            }
        }
    }
}
