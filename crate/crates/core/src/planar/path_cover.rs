//! Separator dipaths with per-vertex associations and ε-covering portal
//! sets, plus the brute-force check of the covering contract.
//!
//! Construction, per distance scale `α`: keep edges of weight at most `α`,
//! layer each weakly connected piece by alternating forward and backward
//! `α`-balls (so every dipath of length at most `α` spans three consecutive
//! layers), and in every window of three layers recursively remove
//! root paths of the layering forest until nothing is left. The removed
//! root paths, cut into maximal same-direction runs, are the separator
//! dipaths; every vertex of a recursion piece is associated with the dipaths
//! removed from it.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    all_pairs_distances_with, aspect_ratio, dijkstra, weak_components, Direction, Dist, DistanceMatrix,
    WeightedDigraph, NO_PRED, REL_TOL,
};
use crate::par::{self, Exec};
use crate::planar::embedding::{validate_embedding, PlanarEmbedding};

/// A directed path of the graph with prefix lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct DiPath {
    vertices: Vec<usize>,
    prefix: Vec<f64>,
}

impl DiPath {
    /// Fails unless consecutive vertices are joined by graph edges.
    pub fn new(g: &WeightedDigraph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::structural("empty path"));
        }
        let mut prefix = Vec::with_capacity(vertices.len());
        prefix.push(0.0);
        for w in vertices.windows(2) {
            let weight = g
                .weight(w[0], w[1])
                .ok_or_else(|| Error::structural(format!("path step ({},{}) is not an edge", w[0], w[1])))?;
            prefix.push(prefix.last().copied().unwrap_or(0.0) + weight);
        }
        Ok(DiPath { vertices, prefix })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Length along the path from position `i` to position `j`; `None` when
    /// `j` precedes `i`.
    pub fn along(&self, i: usize, j: usize) -> Dist {
        (i <= j).then(|| self.prefix[j] - self.prefix[i])
    }
}

/// A portal of vertex `v` on some path: position, vertex, `d(v, portal)` and
/// `d(portal, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Portal {
    pub pos: usize,
    pub vertex: usize,
    pub to: Dist,
    pub from: Dist,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathCover {
    eps: f64,
    paths: Vec<DiPath>,
    per_vertex: Vec<Vec<usize>>,
    covering: Vec<Vec<Vec<Portal>>>,
}

impl PathCover {
    /// `covering[v][k]` is the portal set of `v` on path `per_vertex[v][k]`;
    /// path lists must be sorted.
    pub fn new(
        eps: f64,
        paths: Vec<DiPath>,
        per_vertex: Vec<Vec<usize>>,
        covering: Vec<Vec<Vec<Portal>>>,
    ) -> Result<Self> {
        if per_vertex.len() != covering.len() {
            return Err(Error::structural("per-vertex path lists and covering sets differ in length"));
        }
        for (v, (ps, cs)) in per_vertex.iter().zip(&covering).enumerate() {
            if ps.len() != cs.len() || ps.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::structural(format!("path list of vertex {v} is malformed")));
            }
            if let Some(&p) = ps.iter().find(|&&p| p >= paths.len()) {
                return Err(Error::structural(format!("vertex {v} references missing path {p}")));
            }
        }
        Ok(PathCover { eps, paths, per_vertex, covering })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn n(&self) -> usize {
        self.per_vertex.len()
    }

    pub fn paths(&self) -> &[DiPath] {
        &self.paths
    }

    pub fn paths_of(&self, v: usize) -> &[usize] {
        &self.per_vertex[v]
    }

    pub fn covering_sets(&self, v: usize) -> &[Vec<Portal>] {
        &self.covering[v]
    }

    pub fn covering_set(&self, v: usize, path: usize) -> Option<&[Portal]> {
        let k = self.per_vertex[v].binary_search(&path).ok()?;
        Some(&self.covering[v][k])
    }

    /// The same cover with vertex `v` stripped of all its paths.
    pub fn without_vertex_paths(&self, v: usize) -> Self {
        let mut pc = self.clone();
        pc.per_vertex[v].clear();
        pc.covering[v].clear();
        pc
    }

    pub fn max_paths_per_vertex(&self) -> usize {
        self.per_vertex.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_portals(&self) -> usize {
        self.covering.iter().flatten().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn build_path_cover(g: &WeightedDigraph, emb: &PlanarEmbedding, eps: f64) -> Result<PathCover> {
    let d = all_pairs_distances_with(g, Exec::default());
    build_path_cover_with(g, emb, eps, &d, Exec::default())
}

/// Builds the cover from a precomputed distance matrix of `g`. Weights need
/// not be normalized: scales start at the smallest edge weight.
pub fn build_path_cover_with(
    g: &WeightedDigraph,
    emb: &PlanarEmbedding,
    eps: f64,
    d: &DistanceMatrix,
    exec: Exec,
) -> Result<PathCover> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::input(format!("eps = {eps} outside (0, 1)")));
    }
    let report = validate_embedding(g, emb)?;
    if let Some(c) = report.violated_component {
        return Err(Error::structural(format!("embedding is not planar on component {c}")));
    }
    let n = g.n();
    let Ok(phi) = aspect_ratio(d) else {
        return PathCover::new(eps, Vec::new(), vec![Vec::new(); n], vec![Vec::new(); n]);
    };
    let base = g.min_weight().expect("a reachable pair implies an edge");
    let max_dist = base * phi;
    let mut scales = vec![base];
    while *scales.last().expect("nonempty") < max_dist * (1.0 - REL_TOL) {
        scales.push(scales.last().expect("nonempty") * 2.0);
    }
    let pieces: Vec<Vec<Piece>> = par::map(exec, &scales, |&alpha| scale_pieces(g, alpha));

    let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut seqs: Vec<Vec<usize>> = Vec::new();
    let mut per_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
    for piece in pieces.iter().flatten() {
        let path_ids: Vec<usize> = piece
            .segments
            .iter()
            .map(|s| {
                *ids.entry(s.clone()).or_insert_with(|| {
                    seqs.push(s.clone());
                    seqs.len() - 1
                })
            })
            .collect();
        for &v in &piece.members {
            per_vertex[v].extend_from_slice(&path_ids);
        }
    }
    for list in &mut per_vertex {
        list.sort_unstable();
        list.dedup();
    }
    let paths = seqs.into_iter().map(|s| DiPath::new(g, s)).collect::<Result<Vec<_>>>()?;
    let covering = par::map_range(exec, n, |v| {
        per_vertex[v].iter().map(|&p| portals(d, &paths[p], v, eps)).collect::<Vec<_>>()
    });
    PathCover::new(eps, paths, per_vertex, covering)
}

/// One recursion piece: its separator dipaths and the vertices associated
/// with them.
struct Piece {
    segments: Vec<Vec<usize>>,
    members: Vec<usize>,
}

struct Layering {
    layer: Vec<usize>,
    parent: Vec<usize>,
    /// The tree edge into `v` points away from the root (`parent -> v`).
    down: Vec<bool>,
    count: usize,
}

fn layer_component(light: &WeightedDigraph, comp: &[usize], mask: &[bool], alpha: f64) -> Layering {
    let n = light.n();
    let mut lay = Layering { layer: vec![usize::MAX; n], parent: vec![NO_PRED; n], down: vec![false; n], count: 0 };
    let mut layered: Vec<usize> = Vec::new();
    let mut dir = Direction::Forward;
    let mut idle = 0;
    while layered.len() < comp.len() && idle < 2 {
        let sources = if layered.is_empty() { vec![comp[0]] } else { layered.clone() };
        let s = dijkstra(light.csr(dir), &sources, Some(mask), Some(alpha));
        let fresh: Vec<usize> =
            comp.iter().copied().filter(|&v| lay.layer[v] == usize::MAX && s.dist[v].is_finite()).collect();
        for &v in &fresh {
            lay.layer[v] = lay.count;
            lay.parent[v] = s.pred[v];
            lay.down[v] = dir == Direction::Forward;
        }
        idle = if fresh.is_empty() { idle + 1 } else { 0 };
        layered.extend(fresh);
        lay.count += 1;
        dir = dir.flip();
    }
    debug_assert_eq!(layered.len(), comp.len());
    lay
}

fn scale_pieces(g: &WeightedDigraph, alpha: f64) -> Vec<Piece> {
    let n = g.n();
    let light = WeightedDigraph::new(
        n,
        g.edges().iter().filter(|e| e.weight <= alpha * (1.0 + REL_TOL)).map(|e| (e.tail, e.head, e.weight)),
    )
    .expect("subgraph of a valid graph");
    let mut pieces = Vec::new();
    for comp in weak_components(&light, None) {
        let mut mask = vec![false; n];
        for &v in &comp {
            mask[v] = true;
        }
        let lay = layer_component(&light, &comp, &mask, alpha);
        let last = lay.count.saturating_sub(1);
        for f in 0..=last.saturating_sub(2) {
            let window: Vec<bool> = (0..n).map(|v| mask[v] && lay.layer[v] >= f && lay.layer[v] <= f + 2).collect();
            for top in weak_components(&light, Some(&window)) {
                separate(&light, &lay, top, &mut pieces);
            }
        }
    }
    pieces
}

/// Root path of `w` restricted to the prefix that stays inside `inside`.
fn root_path(lay: &Layering, w: usize, inside: &[bool]) -> Vec<usize> {
    let mut path = vec![w];
    let mut cur = w;
    while lay.parent[cur] != NO_PRED && inside[lay.parent[cur]] {
        cur = lay.parent[cur];
        path.push(cur);
    }
    path
}

/// Cuts a leaf-to-root tree path into maximal dipaths.
fn segments(lay: &Layering, path: &[usize]) -> Vec<Vec<usize>> {
    if path.len() == 1 {
        return vec![path.to_vec()];
    }
    let mut out = Vec::new();
    let mut start = 0;
    for i in 0..path.len() - 1 {
        let last_edge = i + 2 == path.len();
        if last_edge || lay.down[path[i + 1]] != lay.down[path[i]] {
            let run = &path[start..=i + 1];
            let mut seg = run.to_vec();
            if lay.down[path[start]] {
                seg.reverse();
            }
            out.push(seg);
            start = i + 1;
        }
    }
    out
}

/// (largest remaining component, separator size)
type Score = (usize, usize);

fn separate(light: &WeightedDigraph, lay: &Layering, top: Vec<usize>, pieces: &mut Vec<Piece>) {
    let n = light.n();
    let mut stack = vec![top];
    let mut inside = vec![false; n];
    while let Some(piece) = stack.pop() {
        for &v in &piece {
            inside[v] = true;
        }
        let mut candidates: Vec<Vec<Vec<usize>>> = Vec::new();
        for &a in &piece {
            for &(b, _) in light.out_edges(a) {
                let tree = lay.parent[b] == a || lay.parent[a] == b;
                if inside[b] && !tree {
                    candidates.push(vec![root_path(lay, a, &inside), root_path(lay, b, &inside)]);
                }
            }
        }
        for &w in &piece {
            candidates.push(vec![root_path(lay, w, &inside)]);
        }
        let mut best: Option<(Score, usize, Vec<Vec<usize>>)> = None;
        for (idx, cand) in candidates.iter().enumerate() {
            let mut removed = inside.clone();
            let mut size = 0;
            for &v in cand.iter().flatten() {
                if removed[v] {
                    removed[v] = false;
                    size += 1;
                }
            }
            let comps = weak_components(light, Some(&removed));
            let worst = comps.iter().map(Vec::len).max().unwrap_or(0);
            if best.as_ref().is_none_or(|b| (worst, size) < b.0) {
                best = Some(((worst, size), idx, comps));
            }
        }
        let (_, idx, comps) = best.expect("a piece has at least one candidate");
        let mut segs: Vec<Vec<usize>> = candidates[idx].iter().flat_map(|p| segments(lay, p)).collect();
        segs.sort();
        segs.dedup();
        for &v in &piece {
            inside[v] = false;
        }
        pieces.push(Piece { segments: segs, members: piece });
        stack.extend(comps.into_iter().rev());
    }
}

/// Portals of `v` on `path`: a from-side greedy forward and a to-side
/// greedy backward, each dropping a candidate already approximated within
/// `1 + eps` through a kept one.
fn portals(d: &DistanceMatrix, path: &DiPath, v: usize, eps: f64) -> Vec<Portal> {
    let verts = path.vertices();
    let mut keep = vec![false; verts.len()];
    let mut kept: Vec<usize> = Vec::new();
    for q in 0..verts.len() {
        let Some(dq) = d.get(v, verts[q]) else { continue };
        let covered = kept.iter().any(|&k| {
            let dk = d.get(v, verts[k]).expect("kept portals are reachable");
            dk + path.along(k, q).expect("kept precede q") <= (1.0 + eps) * dq
        });
        if !covered {
            kept.push(q);
            keep[q] = true;
        }
    }
    kept.clear();
    for q in (0..verts.len()).rev() {
        let Some(dq) = d.get(verts[q], v) else { continue };
        let covered = kept.iter().any(|&k| {
            let dk = d.get(verts[k], v).expect("kept portals are reachable");
            path.along(q, k).expect("kept follow q") + dk <= (1.0 + eps) * dq
        });
        if !covered {
            kept.push(q);
            keep[q] = true;
        }
    }
    (0..verts.len())
        .filter(|&q| keep[q])
        .map(|q| Portal { pos: q, vertex: verts[q], to: d.get(v, verts[q]), from: d.get(verts[q], v) })
        .collect()
}

/// A reachable pair the cover fails to approximate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractWitness {
    pub u: usize,
    pub v: usize,
    pub best: Dist,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractReport {
    pub passed: bool,
    /// Largest realised `(d(u,u') + d_P(u',v') + d(v',v)) / d(u,v)`, minimised
    /// over choices; 1 when nothing is reachable.
    pub max_ratio: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub witness: Option<ContractWitness>,
    /// `(vertex, path, position)` of a stored portal distance that disagrees
    /// with the oracle.
    pub distance_mismatch: Option<(usize, usize, usize)>,
}

/// Best `d(u,u') + d_P(u',v') + d(v',v)` over shared paths and portals, with
/// the minimising `(path, u' position, v' position)`.
pub fn best_portal_route(
    d: &DistanceMatrix,
    pc: &PathCover,
    u: usize,
    v: usize,
) -> Option<(f64, usize, usize, usize)> {
    let (pu, pv) = (pc.paths_of(u), pc.paths_of(v));
    let (mut i, mut j) = (0, 0);
    let mut best: Option<(f64, usize, usize, usize)> = None;
    while i < pu.len() && j < pv.len() {
        match pu[i].cmp(&pv[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let p = pu[i];
                let path = &pc.paths[p];
                let (cu, cv) = (&pc.covering[u][i], &pc.covering[v][j]);
                // sweep v' in path order, tracking the best u' at or before it
                let mut k = 0;
                let mut run: Option<(f64, usize)> = None;
                for b in cv {
                    let Some(back) = d.get(b.vertex, v) else { continue };
                    while k < cu.len() && cu[k].pos <= b.pos {
                        if let Some(to) = d.get(u, cu[k].vertex) {
                            let key = to - path.prefix[cu[k].pos];
                            if run.is_none_or(|r| key < r.0) {
                                run = Some((key, cu[k].pos));
                            }
                        }
                        k += 1;
                    }
                    if let Some((key, a)) = run {
                        let total = key + path.prefix[b.pos] + back;
                        if best.is_none_or(|x| total < x.0) {
                            best = Some((total, p, a, b.pos));
                        }
                    }
                }
                i += 1;
                j += 1;
            }
        }
    }
    best
}

/// Exhaustive check of the covering contract over all reachable pairs.
pub fn verify_path_cover_contract(d: &DistanceMatrix, pc: &PathCover) -> Result<ContractReport> {
    verify_path_cover_contract_with(d, pc, Exec::default())
}

pub fn verify_path_cover_contract_with(d: &DistanceMatrix, pc: &PathCover, exec: Exec) -> Result<ContractReport> {
    let n = pc.n();
    if d.n() != n {
        return Err(Error::structural("path cover and distance matrix differ in size"));
    }
    let mut distance_mismatch = None;
    for v in 0..n {
        for (k, &p) in pc.per_vertex[v].iter().enumerate() {
            let path = &pc.paths[p];
            for portal in &pc.covering[v][k] {
                if portal.pos >= path.len() || path.vertices[portal.pos] != portal.vertex {
                    return Err(Error::structural(format!(
                        "portal {} of vertex {v} is not at position {} of path {p}",
                        portal.vertex, portal.pos
                    )));
                }
                let same = portal.to == d.get(v, portal.vertex) && portal.from == d.get(portal.vertex, v);
                if !same && distance_mismatch.is_none() {
                    distance_mismatch = Some((v, p, portal.pos));
                }
            }
        }
    }
    let eps = pc.eps;
    let rows = par::map_range(exec, n, |u| {
        let mut worst: Option<(f64, usize, Dist, f64)> = None;
        for v in (0..n).filter(|&v| v != u) {
            let Some(duv) = d.get(u, v) else { continue };
            let best = best_portal_route(d, pc, u, v).map(|b| b.0);
            let ratio = best.map_or(f64::INFINITY, |b| b / duv);
            if worst.is_none_or(|w| ratio > w.0) {
                worst = Some((ratio, v, best, duv));
            }
        }
        worst
    });
    let mut worst: Option<(f64, usize, usize, Dist, f64)> = None;
    for (u, w) in rows.into_iter().enumerate() {
        if let Some((r, v, best, duv)) = w {
            if worst.is_none_or(|x| r > x.0) {
                worst = Some((r, u, v, best, duv));
            }
        }
    }
    let (max_ratio, worst_pair, witness) = match worst {
        None => (1.0, None, None),
        Some((r, u, v, best, distance)) => {
            let fails = r > (1.0 + eps) * (1.0 + REL_TOL);
            (r, Some((u, v)), fails.then_some(ContractWitness { u, v, best, distance }))
        }
    };
    Ok(ContractReport {
        passed: witness.is_none() && distance_mismatch.is_none(),
        max_ratio,
        worst_pair,
        witness,
        distance_mismatch,
    })
}
