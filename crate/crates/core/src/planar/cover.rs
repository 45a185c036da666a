//! The two-dag `1 + ε` Steiner cover for planar digraphs: every vertex gets
//! a center set from the centroid ancestors of its portals, and each center
//! hosts one gadget per dag over the vertices that chose it.

use serde::Serialize;

use crate::cover::{DagAssembler, DagCover, Provenance, VertexRef};
use crate::error::Result;
use crate::gadget::{build_vertex_gadget, VertexGadget};
use crate::graph::{all_pairs_distances_with, DistanceMatrix, WeightedDigraph, REL_TOL};
use crate::par::{self, Exec};
use crate::planar::centroid::{build_centroid_hierarchy, CentroidHierarchy};
use crate::planar::embedding::PlanarEmbedding;
use crate::planar::path_cover::{best_portal_route, build_path_cover_with, PathCover};

#[derive(Debug, Clone)]
pub struct PlanarCover {
    pub cover: DagCover,
    pub path_cover: PathCover,
    /// One hierarchy per path of `path_cover`.
    pub hierarchies: Vec<CentroidHierarchy>,
    /// Sorted center set of each vertex.
    pub centers: Vec<Vec<usize>>,
}

pub fn centroid_hierarchies(pc: &PathCover) -> Vec<CentroidHierarchy> {
    pc.paths()
        .iter()
        .map(|p| build_centroid_hierarchy(p.vertices()).expect("paths are nonempty"))
        .collect()
}

/// Centers of `v`: centroids of every hierarchy node above one of its
/// portals.
pub fn assemble_center_sets(pc: &PathCover, hierarchies: &[CentroidHierarchy]) -> Vec<Vec<usize>> {
    (0..pc.n())
        .map(|v| {
            let mut xs: Vec<usize> = pc
                .paths_of(v)
                .iter()
                .zip(pc.covering_sets(v))
                .flat_map(|(&p, portals)| {
                    let h = &hierarchies[p];
                    portals.iter().flat_map(move |q| h.ancestors(q.pos).into_iter().map(|node| h.centroid_vertex(node)))
                })
                .collect();
            xs.sort_unstable();
            xs.dedup();
            xs
        })
        .collect()
}

pub fn build_planar_cover(g: &WeightedDigraph, emb: &PlanarEmbedding, eps: f64) -> Result<PlanarCover> {
    build_planar_cover_with(g, emb, eps, Exec::default())
}

pub fn build_planar_cover_with(g: &WeightedDigraph, emb: &PlanarEmbedding, eps: f64, exec: Exec) -> Result<PlanarCover> {
    let n = g.n();
    let d = all_pairs_distances_with(g, exec);
    let path_cover = build_path_cover_with(g, emb, eps, &d, exec)?;
    let hierarchies = centroid_hierarchies(&path_cover);
    let centers = assemble_center_sets(&path_cover, &hierarchies);
    let mut hosted: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, xs) in centers.iter().enumerate() {
        for &x in xs {
            hosted[x].push(v);
        }
    }
    let jobs: Vec<usize> = (0..n).filter(|&x| hosted[x].len() > 1).collect();
    let gadgets: Vec<Result<(VertexGadget, VertexGadget)>> = par::map(exec, &jobs, |&x| {
        let to_x = d.column(x);
        let from_x = d.row(x);
        let mut members = hosted[x].clone();
        let fwd = build_vertex_gadget(&to_x, from_x, &members, x)?;
        members.reverse();
        let rev = build_vertex_gadget(&to_x, from_x, &members, x)?;
        Ok((fwd, rev))
    });
    let gadgets = gadgets.into_iter().collect::<Result<Vec<_>>>()?;
    let mut fwd = DagAssembler::new((0..n).collect());
    let mut rev = DagAssembler::new((0..n).rev().collect());
    for (a, b) in &gadgets {
        fwd.add_gadget(a);
        rev.add_gadget(b);
    }
    let provenance = Provenance::new("planar")
        .with("n", n)
        .with("eps", eps)
        .with("paths", path_cover.paths().len())
        .with("max_paths_per_vertex", path_cover.max_paths_per_vertex())
        .with("max_portals", path_cover.max_portals())
        .with("max_centers", centers.iter().map(Vec::len).max().unwrap_or(0));
    let cover = DagCover::new(n, 1.0 + eps, true, vec![fwd.finish()?, rev.finish()?], provenance)?;
    Ok(PlanarCover { cover, path_cover, hierarchies, centers })
}

/// How a pair is served: the best portal route's path, the centroid of the
/// smallest subpath holding both portals, and the length through it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterWitness {
    pub u: usize,
    pub v: usize,
    pub path: usize,
    pub center: usize,
    pub graph_distance: f64,
    pub via_center: f64,
}

pub fn center_witness(d: &DistanceMatrix, planar: &PlanarCover, u: usize, v: usize) -> Option<CenterWitness> {
    let graph_distance = d.get(u, v)?;
    let (_, path, a, b) = best_portal_route(d, &planar.path_cover, u, v)?;
    let h = &planar.hierarchies[path];
    let center = h.centroid_vertex(h.deepest_common(a, b));
    let via_center = d.get(u, center)? + d.get(center, v)?;
    Some(CenterWitness { u, v, path, center, graph_distance, via_center })
}

/// First reachable pair (in row-major order) whose witness is missing, uses
/// a center outside either center set, exceeds `(1 + ε) d(u, v)`, or is not
/// matched by some dag.
pub fn find_witness_failure(d: &DistanceMatrix, planar: &PlanarCover, exec: Exec) -> Option<(usize, usize)> {
    let n = d.n();
    let eps = planar.path_cover.eps();
    let failures = par::map_range(exec, n, |u| {
        let rows: Vec<Vec<_>> =
            planar.cover.dags().iter().map(|dag| dag.distances_from(VertexRef::Original(u))).collect();
        (0..n).filter(|&v| v != u).find(|&v| {
            let Some(duv) = d.get(u, v) else { return false };
            let Some(w) = center_witness(d, planar, u, v) else { return true };
            let dag = rows.iter().filter_map(|r| r[v]).min_by(f64::total_cmp);
            let slack = 1.0 + REL_TOL;
            planar.centers[u].binary_search(&w.center).is_err()
                || planar.centers[v].binary_search(&w.center).is_err()
                || w.via_center > (1.0 + eps) * duv * slack
                || dag.is_none_or(|x| x > w.via_center * slack)
        })
    });
    failures.into_iter().enumerate().find_map(|(u, v)| v.map(|v| (u, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::certify;
    use crate::planar::path_cover::{DiPath, Portal};

    fn grid(r: usize, c: usize) -> (WeightedDigraph, PlanarEmbedding) {
        let id = |i: usize, j: usize| i * c + j;
        let mut es = Vec::new();
        let mut rot = vec![Vec::new(); r * c];
        for i in 0..r {
            for j in 0..c {
                let v = id(i, j);
                if j + 1 < c {
                    es.push((v, id(i, j + 1), 1.0 + ((i + j) % 3) as f64));
                }
                if i + 1 < r {
                    es.push((id(i + 1, j), v, 2.0));
                }
                if (i + j) % 2 == 0 && j + 1 < c {
                    es.push((id(i, j + 1), v, 3.0));
                }
                if j + 1 < c {
                    rot[v].push(id(i, j + 1));
                }
                if i + 1 < r {
                    rot[v].push(id(i + 1, j));
                }
                if j > 0 {
                    rot[v].push(id(i, j - 1));
                }
                if i > 0 {
                    rot[v].push(id(i - 1, j));
                }
            }
        }
        (WeightedDigraph::new(r * c, es).unwrap(), PlanarEmbedding::new(rot))
    }

    #[test]
    fn small_grid_certifies_with_witnesses() {
        let (g, emb) = grid(4, 4);
        let planar = build_planar_cover_with(&g, &emb, 0.5, Exec::Sequential).unwrap();
        let cert = certify(&g, &planar.cover).unwrap();
        assert!(cert.passed(), "{:?}", cert.stretch);
        assert_eq!(planar.cover.dags().len(), 2);
        let d = all_pairs_distances_with(&g, Exec::Sequential);
        assert_eq!(find_witness_failure(&d, &planar, Exec::Sequential), None);
    }

    #[test]
    fn modes_agree() {
        let (g, emb) = grid(3, 5);
        let a = build_planar_cover_with(&g, &emb, 0.25, Exec::Sequential).unwrap();
        let b = build_planar_cover_with(&g, &emb, 0.25, Exec::Parallel).unwrap();
        assert_eq!(a.cover.dags(), b.cover.dags());
        assert_eq!(a.centers, b.centers);
    }

    #[test]
    fn portals_on_one_path_give_its_centroid_chain() {
        // a 12-vertex path; vertex 0 sees portals at positions 6 and 10
        let n = 12;
        let g = WeightedDigraph::new(n, (0..n - 1).map(|i| (i, i + 1, 1.0))).unwrap();
        let path = DiPath::new(&g, (0..n).collect()).unwrap();
        let portal = |pos| Portal { pos, vertex: pos, to: Some(pos as f64), from: None };
        let mut per_vertex = vec![Vec::new(); n];
        let mut covering = vec![Vec::new(); n];
        per_vertex[0] = vec![0];
        covering[0] = vec![vec![portal(6), portal(10)]];
        let pc = PathCover::new(0.5, vec![path], per_vertex, covering).unwrap();
        let h = centroid_hierarchies(&pc);
        let xs = assemble_center_sets(&pc, &h);
        // root [0..11] splits at 5; right part [6..11] at 8; then [6..7] at 6
        // and [9..11] at 10
        assert_eq!(xs[0], vec![5, 6, 8, 10]);
        assert!(xs[1].is_empty());
        assert_eq!(h[0].centroid_vertex(h[0].deepest_common(6, 10)), 8);
    }
}
