//! Rotation systems and the Euler-formula face check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{weak_components, WeightedDigraph};

/// Per vertex, its undirected neighbours in cyclic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarEmbedding {
    rotation: Vec<Vec<usize>>,
}

impl PlanarEmbedding {
    pub fn new(rotation: Vec<Vec<usize>>) -> Self {
        PlanarEmbedding { rotation }
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentFaces {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl ComponentFaces {
    pub fn euler_holds(&self) -> bool {
        self.vertices + self.faces == self.edges + 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub components: Vec<ComponentFaces>,
    /// Index of the first component violating `V − E + F = 2`.
    pub violated_component: Option<usize>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.violated_component.is_none()
    }

    pub fn faces(&self) -> usize {
        self.components.iter().map(|c| c.faces).sum()
    }
}

/// Traces faces of the rotation system and checks Euler's formula on every
/// weakly connected component. Rotations must list exactly the undirected
/// neighbours of each vertex.
pub fn validate_embedding(g: &WeightedDigraph, emb: &PlanarEmbedding) -> Result<EmbeddingReport> {
    let n = g.n();
    if emb.n() != n {
        return Err(Error::structural(format!("embedding has {} vertices, graph has {n}", emb.n())));
    }
    for v in 0..n {
        let mut listed = emb.rotation[v].clone();
        listed.sort_unstable();
        if listed != g.undirected_neighbors(v) {
            return Err(Error::structural(format!("rotation at {v} does not match its neighbours")));
        }
    }
    // Dart (u, slot i) is u -> rotation[u][i].
    let offset: Vec<usize> = std::iter::once(0)
        .chain(emb.rotation.iter().scan(0, |acc, r| {
            *acc += r.len();
            Some(*acc)
        }))
        .collect();
    let slot_of = |u: usize, v: usize| emb.rotation[u].iter().position(|&x| x == v).expect("checked above");
    let darts = offset[n];
    let mut face_of = vec![usize::MAX; darts];
    let comps = weak_components(g, None);
    let mut comp_of = vec![0; n];
    for (c, vs) in comps.iter().enumerate() {
        for &v in vs {
            comp_of[v] = c;
        }
    }
    let mut face_count = vec![0usize; comps.len()];
    for u in 0..n {
        for i in 0..emb.rotation[u].len() {
            if face_of[offset[u] + i] != usize::MAX {
                continue;
            }
            let face = face_count[comp_of[u]];
            face_count[comp_of[u]] += 1;
            let (mut a, mut s) = (u, i);
            while face_of[offset[a] + s] == usize::MAX {
                face_of[offset[a] + s] = face;
                let b = emb.rotation[a][s];
                let back = slot_of(b, a);
                let next = (back + 1) % emb.rotation[b].len();
                a = b;
                s = next;
            }
        }
    }
    let components: Vec<ComponentFaces> = comps
        .iter()
        .enumerate()
        .map(|(c, vs)| {
            let degree: usize = vs.iter().map(|&v| emb.rotation[v].len()).sum();
            ComponentFaces { vertices: vs.len(), edges: degree / 2, faces: face_count[c].max(1) }
        })
        .collect();
    let violated_component = components.iter().position(|c| !c.euler_holds());
    Ok(EmbeddingReport { components, violated_component })
}
