//! Seeded instance generators. The same seed and parameters always produce
//! the same instance.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::planar::PlanarEmbedding;
use crate::star::make_bidirected_star;

/// A generated graph with whatever structure its kind comes with.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: WeightedDigraph,
    pub embedding: Option<PlanarEmbedding>,
    pub decomposition: Option<TreeDecomposition>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KTreeParams {
    pub n: usize,
    pub k: usize,
    /// Probability of keeping each skeleton edge.
    pub keep: f64,
    /// Weights are integers drawn uniformly from `1..=max_weight`.
    pub max_weight: u32,
}

impl KTreeParams {
    pub fn new(n: usize, k: usize) -> Self {
        KTreeParams { n, k, keep: 0.8, max_weight: 10 }
    }
}

fn weight(rng: &mut ChaCha8Rng, max_weight: u32) -> f64 {
    f64::from(rng.gen_range(1..=max_weight))
}

fn check_weight(max_weight: u32) -> Result<()> {
    if max_weight == 0 {
        return Err(Error::input("max weight must be at least 1"));
    }
    Ok(())
}

/// The bidirected star with its width-1 decomposition (one bag per leaf).
pub fn star(n: usize) -> Result<Instance> {
    let graph = make_bidirected_star(n)?;
    let bags: Vec<Vec<usize>> = (1..n).map(|i| vec![0, i]).collect();
    let tree = (1..bags.len()).map(|i| (0, i)).collect();
    Ok(Instance { graph, embedding: None, decomposition: Some(TreeDecomposition::new(bags, tree)) })
}

/// A random partial k-tree: each new vertex attaches to a random k-clique of
/// the skeleton, skeleton edges survive with probability `keep` and become
/// forward, backward or bidirected arcs. Vertex ids are shuffled; the
/// decomposition is the natural one of width `min(k, n - 1)`.
pub fn ktree(p: KTreeParams, seed: u64) -> Result<Instance> {
    let KTreeParams { n, k, keep, max_weight } = p;
    if n == 0 || k == 0 {
        return Err(Error::input(format!("k-tree needs n >= 1 and k >= 1, got n={n}, k={k}")));
    }
    if !(0.0..=1.0).contains(&keep) {
        return Err(Error::input(format!("keep probability {keep} outside [0, 1]")));
    }
    check_weight(max_weight)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = n.min(k + 1);
    let mut skeleton: Vec<(usize, usize)> = (0..base).flat_map(|a| (a + 1..base).map(move |b| (a, b))).collect();
    let mut bags: Vec<Vec<usize>> = vec![(0..base).collect()];
    let mut tree = Vec::new();
    // every k-clique with the bag that holds it
    let mut cliques: Vec<(Vec<usize>, usize)> = if base == k + 1 {
        (0..base).map(|skip| ((0..base).filter(|&v| v != skip).collect(), 0)).collect()
    } else {
        Vec::new()
    };
    for v in base..n {
        let (clique, bag) = cliques[rng.gen_range(0..cliques.len())].clone();
        skeleton.extend(clique.iter().map(|&u| (u, v)));
        let id = bags.len();
        let mut new_bag = clique.clone();
        new_bag.push(v);
        bags.push(new_bag);
        tree.push((bag, id));
        for skip in 0..clique.len() {
            let mut c: Vec<usize> = clique.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &u)| u).collect();
            c.push(v);
            cliques.push((c, id));
        }
    }
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut edges = Vec::new();
    for (a, b) in skeleton {
        if !rng.gen_bool(keep) {
            continue;
        }
        let (a, b) = (label[a], label[b]);
        match rng.gen_range(0..3) {
            0 => edges.push((a, b, weight(&mut rng, max_weight))),
            1 => edges.push((b, a, weight(&mut rng, max_weight))),
            _ => {
                edges.push((a, b, weight(&mut rng, max_weight)));
                edges.push((b, a, weight(&mut rng, max_weight)));
            }
        }
    }
    let bags = bags.into_iter().map(|b| b.into_iter().map(|v| label[v]).collect()).collect();
    Ok(Instance {
        graph: WeightedDigraph::new(n, edges)?,
        embedding: None,
        decomposition: Some(TreeDecomposition::new(bags, tree)),
    })
}

/// The bidirected `rows × cols` grid, vertex `(i, j)` at id `i·cols + j`,
/// independent weights per direction, rotations right, down, left, up.
pub fn grid(rows: usize, cols: usize, max_weight: u32, seed: u64) -> Result<Instance> {
    if rows == 0 || cols == 0 {
        return Err(Error::input(format!("grid dimensions must be positive, got {rows}x{cols}")));
    }
    check_weight(max_weight)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = |i: usize, j: usize| i * cols + j;
    let mut edges = Vec::new();
    let mut rotation = vec![Vec::new(); rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            let v = id(i, j);
            if j + 1 < cols {
                edges.push((v, id(i, j + 1), weight(&mut rng, max_weight)));
                edges.push((id(i, j + 1), v, weight(&mut rng, max_weight)));
                rotation[v].push(id(i, j + 1));
            }
            if i + 1 < rows {
                edges.push((v, id(i + 1, j), weight(&mut rng, max_weight)));
                edges.push((id(i + 1, j), v, weight(&mut rng, max_weight)));
                rotation[v].push(id(i + 1, j));
            }
            if j > 0 {
                rotation[v].push(id(i, j - 1));
            }
            if i > 0 {
                rotation[v].push(id(i - 1, j));
            }
        }
    }
    Ok(Instance {
        graph: WeightedDigraph::new(rows * cols, edges)?,
        embedding: Some(PlanarEmbedding::new(rotation)),
        decomposition: None,
    })
}

/// The directed cycle `0 → 1 → … → n−1 → 0`.
pub fn dicycle(n: usize, max_weight: u32, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::input(format!("a directed cycle needs at least 2 vertices, got {n}")));
    }
    check_weight(max_weight)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, weight(&mut rng, max_weight))).collect();
    let rotation = (0..n)
        .map(|i| {
            let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
            if prev == next {
                vec![next]
            } else {
                vec![prev, next]
            }
        })
        .collect();
    Ok(Instance {
        graph: WeightedDigraph::new(n, edges)?,
        embedding: Some(PlanarEmbedding::new(rotation)),
        decomposition: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::validate_decomposition;
    use crate::planar::validate_embedding;

    #[test]
    fn star_seven() {
        let inst = star(7).unwrap();
        assert_eq!(inst.graph.edge_count(), 12);
        let td = inst.decomposition.unwrap();
        assert_eq!(td.width(), 1);
        assert!(validate_decomposition(&inst.graph, &td).unwrap().is_valid());
    }

    #[test]
    fn ktree_decomposition_is_valid() {
        let inst = ktree(KTreeParams::new(50, 3), 42).unwrap();
        let td = inst.decomposition.unwrap();
        assert_eq!(td.width(), 3);
        assert!(validate_decomposition(&inst.graph, &td).unwrap().is_valid());
        for n in 1..6 {
            let inst = ktree(KTreeParams::new(n, 3), 7).unwrap();
            assert!(validate_decomposition(&inst.graph, inst.decomposition.as_ref().unwrap()).unwrap().is_valid());
        }
    }

    #[test]
    fn same_seed_same_instance() {
        let a = ktree(KTreeParams::new(30, 2), 9).unwrap();
        let b = ktree(KTreeParams::new(30, 2), 9).unwrap();
        let c = ktree(KTreeParams::new(30, 2), 10).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_ne!(a.graph.edges(), c.graph.edges());
    }

    #[test]
    fn grid_two_by_two() {
        let inst = grid(2, 2, 5, 1).unwrap();
        assert_eq!(inst.graph.n(), 4);
        assert_eq!(inst.graph.edge_count(), 8);
        assert!(validate_embedding(&inst.graph, inst.embedding.as_ref().unwrap()).unwrap().passed());
        let five = grid(5, 5, 5, 1).unwrap();
        assert_eq!(validate_embedding(&five.graph, five.embedding.as_ref().unwrap()).unwrap().faces(), 17);
    }

    #[test]
    fn dicycles_embed() {
        for n in [2, 3, 10] {
            let inst = dicycle(n, 3, 0).unwrap();
            assert_eq!(inst.graph.edge_count(), n);
            assert!(validate_embedding(&inst.graph, inst.embedding.as_ref().unwrap()).unwrap().passed());
        }
        assert!(dicycle(1, 3, 0).is_err());
    }

    #[test]
    fn bad_params() {
        assert!(ktree(KTreeParams::new(0, 2), 0).is_err());
        assert!(ktree(KTreeParams { keep: 1.5, ..KTreeParams::new(5, 2) }, 0).is_err());
        assert!(grid(0, 3, 1, 0).is_err());
        assert!(grid(2, 3, 0, 0).is_err());
    }
}
