//! The DAG-cover data model and its certifier.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gadget::VertexGadget;
use crate::graph::{
    check_acyclic_and_order, dijkstra, single_source_distances, Acyclicity, Csr, Dist, DistanceMatrix,
    WeightedDigraph, REL_TOL,
};
use crate::par::{self, Exec};

/// A vertex of a cover dag: an original graph vertex or the dag's `k`-th
/// Steiner vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexRef {
    Original(usize),
    Steiner(usize),
}

/// One dag of a cover. Steiner vertices are numbered `0..steiner_count`
/// within the dag; distinct dags never share them.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerDag {
    graph_n: usize,
    originals: Vec<usize>,
    steiner_count: usize,
    edges: Vec<(VertexRef, VertexRef, f64)>,
    order: Vec<VertexRef>,
}

impl SteinerDag {
    /// Validates vertex references and weights and collapses parallel edges
    /// to the minimum weight. Acyclicity and agreement with `order` are left
    /// to [`certify`].
    pub fn new(
        graph_n: usize,
        originals: Vec<usize>,
        steiner_count: usize,
        edges: Vec<(VertexRef, VertexRef, f64)>,
        order: Vec<VertexRef>,
    ) -> Result<Self> {
        let mut originals = originals;
        originals.sort_unstable();
        if originals.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::structural("duplicate original vertex in dag"));
        }
        if let Some(&v) = originals.iter().find(|&&v| v >= graph_n) {
            return Err(Error::structural(format!("dag vertex {v} outside 0..{graph_n}")));
        }
        let declared = |r: VertexRef| match r {
            VertexRef::Original(v) => originals.binary_search(&v).is_ok(),
            VertexRef::Steiner(k) => k < steiner_count,
        };
        let mut by_pair: BTreeMap<(VertexRef, VertexRef), f64> = BTreeMap::new();
        for &(a, b, w) in &edges {
            if !declared(a) || !declared(b) {
                return Err(Error::structural(format!("edge ({a:?},{b:?}) touches an undeclared vertex")));
            }
            if a == b {
                return Err(Error::structural(format!("self-loop at {a:?}")));
            }
            let both_original = matches!((a, b), (VertexRef::Original(_), VertexRef::Original(_)));
            if !w.is_finite() || w < 0.0 || (both_original && w == 0.0) {
                return Err(Error::structural(format!("edge ({a:?},{b:?}) has invalid weight {w}")));
            }
            by_pair.entry((a, b)).and_modify(|x| *x = x.min(w)).or_insert(w);
        }
        let edges: Vec<_> = by_pair.into_iter().map(|((a, b), w)| (a, b, w)).collect();
        let mut seen = HashSet::with_capacity(order.len());
        for &r in &order {
            if !declared(r) || !seen.insert(r) {
                return Err(Error::structural(format!("declared order repeats or invents {r:?}")));
            }
        }
        if order.len() != originals.len() + steiner_count {
            return Err(Error::structural("declared order does not list every dag vertex"));
        }
        Ok(SteinerDag { graph_n, originals, steiner_count, edges, order })
    }

    /// A dag over all of `0..n` with no edges.
    pub fn empty(graph_n: usize) -> Self {
        SteinerDag {
            graph_n,
            originals: (0..graph_n).collect(),
            steiner_count: 0,
            edges: Vec::new(),
            order: (0..graph_n).map(VertexRef::Original).collect(),
        }
    }

    pub fn graph_n(&self) -> usize {
        self.graph_n
    }

    pub fn originals(&self) -> &[usize] {
        &self.originals
    }

    pub fn steiner_count(&self) -> usize {
        self.steiner_count
    }

    pub fn edges(&self) -> &[(VertexRef, VertexRef, f64)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn order(&self) -> &[VertexRef] {
        &self.order
    }

    pub fn contains(&self, r: VertexRef) -> bool {
        match r {
            VertexRef::Original(v) => self.originals.binary_search(&v).is_ok(),
            VertexRef::Steiner(k) => k < self.steiner_count,
        }
    }

    pub fn weight(&self, a: VertexRef, b: VertexRef) -> Option<f64> {
        self.edges
            .binary_search_by(|e| (e.0, e.1).cmp(&(a, b)))
            .ok()
            .map(|i| self.edges[i].2)
    }

    fn index(&self, r: VertexRef) -> usize {
        match r {
            VertexRef::Original(v) => v,
            VertexRef::Steiner(k) => self.graph_n + k,
        }
    }

    fn vertex(&self, i: usize) -> VertexRef {
        if i < self.graph_n {
            VertexRef::Original(i)
        } else {
            VertexRef::Steiner(i - self.graph_n)
        }
    }

    fn csr(&self) -> Csr {
        Csr::from_triples(
            self.graph_n + self.steiner_count,
            self.edges.iter().map(|&(a, b, w)| (self.index(a), self.index(b), w)),
        )
    }

    /// Distances inside the dag from `source` to every original vertex.
    pub fn distances_from(&self, source: VertexRef) -> Vec<Dist> {
        self.rows_from(&self.csr(), source)
    }

    fn rows_from(&self, csr: &Csr, source: VertexRef) -> Vec<Dist> {
        if !self.contains(source) {
            return vec![None; self.graph_n];
        }
        let s = dijkstra(csr, &[self.index(source)], None, None);
        (0..self.graph_n).map(|v| s.get(v)).collect()
    }

    pub fn distance(&self, a: VertexRef, b: VertexRef) -> Dist {
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        dijkstra(&self.csr(), &[self.index(a)], None, None).get(self.index(b))
    }

    /// A directed cycle (closed: first vertex repeated at the end), if any.
    pub fn find_cycle(&self) -> Option<Vec<VertexRef>> {
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b, _)| (self.index(a), self.index(b))).collect();
        match check_acyclic_and_order(self.graph_n + self.steiner_count, &pairs) {
            Acyclicity::Dag(_) => None,
            Acyclicity::Cycle(c) => Some(c.into_iter().map(|i| self.vertex(i)).collect()),
        }
    }

    /// First edge (in edge order) whose tail does not precede its head in
    /// the declared order.
    pub fn order_violation(&self) -> Option<(VertexRef, VertexRef)> {
        let mut pos = vec![usize::MAX; self.graph_n + self.steiner_count];
        for (i, &r) in self.order.iter().enumerate() {
            pos[self.index(r)] = i;
        }
        self.edges
            .iter()
            .find(|&&(a, b, _)| pos[self.index(a)] >= pos[self.index(b)])
            .map(|&(a, b, _)| (a, b))
    }

    /// Whether `cycle` is a closed walk of this dag's edges.
    pub fn has_cycle_walk(&self, cycle: &[VertexRef]) -> bool {
        cycle.len() >= 2 && cycle.first() == cycle.last() && cycle.windows(2).all(|w| self.weight(w[0], w[1]).is_some())
    }
}

/// Construction parameters recorded with a cover.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(construction: &str) -> Self {
        Provenance { construction: construction.to_string(), ..Default::default() }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }
}

/// A collection of dags claimed to cover a graph with stretch `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DagCover {
    graph_n: usize,
    t: f64,
    steiner: bool,
    dags: Vec<SteinerDag>,
    pub provenance: Provenance,
}

impl DagCover {
    pub fn new(graph_n: usize, t: f64, steiner: bool, dags: Vec<SteinerDag>, provenance: Provenance) -> Result<Self> {
        if !(t >= 1.0 && t.is_finite()) {
            return Err(Error::input(format!("stretch target {t} must be finite and at least 1")));
        }
        if let Some(i) = dags.iter().position(|d| d.graph_n != graph_n) {
            return Err(Error::structural(format!("dag {i} is over a graph of a different size")));
        }
        if !steiner {
            if let Some(i) = dags.iter().position(|d| d.steiner_count > 0) {
                return Err(Error::structural(format!("non-Steiner cover has Steiner vertices in dag {i}")));
            }
        }
        Ok(DagCover { graph_n, t, steiner, dags, provenance })
    }

    pub fn graph_n(&self) -> usize {
        self.graph_n
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn is_steiner(&self) -> bool {
        self.steiner
    }

    pub fn dags(&self) -> &[SteinerDag] {
        &self.dags
    }

    pub fn into_dags(self) -> Vec<SteinerDag> {
        self.dags
    }

    /// The same cover with dag `i` replaced.
    pub fn with_dag(&self, i: usize, dag: SteinerDag) -> Result<Self> {
        let mut dags = self.dags.clone();
        dags[i] = dag;
        DagCover::new(self.graph_n, self.t, self.steiner, dags, self.provenance.clone())
    }

    /// The same cover with dag `i` removed.
    pub fn without_dag(&self, i: usize) -> Result<Self> {
        let mut dags = self.dags.clone();
        dags.remove(i);
        DagCover::new(self.graph_n, self.t, self.steiner, dags, self.provenance.clone())
    }

    pub fn steiner_vertices(&self) -> usize {
        self.dags.iter().map(|d| d.steiner_count).sum()
    }

    /// `min_i d_{D_i}(u, v)` over the dags.
    pub fn best_distance(&self, u: usize, v: usize) -> Dist {
        self.dags
            .iter()
            .filter_map(|d| d.distance(VertexRef::Original(u), VertexRef::Original(v)))
            .min_by(f64::total_cmp)
    }
}

/// A pair on which some dag underestimates the graph distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominatingWitness {
    pub dag: usize,
    pub u: usize,
    pub v: usize,
    pub dag_distance: f64,
    pub graph_distance: Dist,
}

impl DominatingWitness {
    /// Recomputes both distances from scratch and reports whether the
    /// violation still occurs.
    pub fn replay(&self, g: &WeightedDigraph, cover: &DagCover) -> Result<bool> {
        let Some(dag) = cover.dags.get(self.dag) else {
            return Ok(false);
        };
        let dg = single_source_distances(g, self.u)?[self.v];
        let dd = dag.distance(VertexRef::Original(self.u), VertexRef::Original(self.v));
        Ok(underestimates(dd, dg))
    }
}

/// A reachable pair that no dag approximates within the target stretch.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchWitness {
    pub u: usize,
    pub v: usize,
    pub best: Dist,
    pub graph_distance: f64,
}

impl StretchWitness {
    pub fn replay(&self, g: &WeightedDigraph, cover: &DagCover, t: f64) -> Result<bool> {
        let Some(dg) = single_source_distances(g, self.u)?[self.v] else {
            return Ok(false);
        };
        Ok(exceeds(cover.best_distance(self.u, self.v), dg, t))
    }
}

fn underestimates(dag: Dist, graph: Dist) -> bool {
    match (dag, graph) {
        (None, _) => false,
        (Some(_), None) => true,
        (Some(a), Some(b)) => a < b - REL_TOL * b,
    }
}

fn exceeds(best: Dist, graph: f64, t: f64) -> bool {
    best.is_none_or(|b| b > t * graph * (1.0 + REL_TOL))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominatingReport {
    pub passed: bool,
    pub witness: Option<DominatingWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StretchReport {
    pub passed: bool,
    pub target: f64,
    /// Largest `min_i d_{D_i}(u,v) / d_G(u,v)`; infinite if some pair is
    /// missed by every dag and 1 when nothing is reachable.
    #[serde(serialize_with = "finite_or_null")]
    pub max_ratio: f64,
    pub worst_pair: Option<(usize, usize)>,
    pub witness: Option<StretchWitness>,
}

fn finite_or_null<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

/// Per-dag structural checks.
#[derive(Debug, Clone, PartialEq)]
pub struct DagCheck {
    pub edges: usize,
    pub steiner_vertices: usize,
    pub cycle: Option<Vec<VertexRef>>,
    pub order_violation: Option<(VertexRef, VertexRef)>,
}

impl DagCheck {
    pub fn acyclic(&self) -> bool {
        self.cycle.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverCertificate {
    pub dags: Vec<DagCheck>,
    pub acyclic: bool,
    pub order_consistent: bool,
    pub dominating: DominatingReport,
    pub stretch: StretchReport,
    pub extra_edges: usize,
    pub steiner_vertices: usize,
}

impl CoverCertificate {
    pub fn passed(&self) -> bool {
        self.acyclic && self.order_consistent && self.dominating.passed && self.stretch.passed
    }
}

struct SourceScan {
    dominating: Option<DominatingWitness>,
    worst: Option<(f64, usize, Dist, f64)>,
}

fn check_cover_size(d: &DistanceMatrix, cover: &DagCover) -> Result<()> {
    if d.n() != cover.graph_n {
        return Err(Error::structural(format!(
            "cover is over {} vertices but the graph has {}",
            cover.graph_n,
            d.n()
        )));
    }
    Ok(())
}

fn scan(d: &DistanceMatrix, cover: &DagCover, t: f64, exec: Exec) -> (DominatingReport, StretchReport) {
    let csrs: Vec<Csr> = cover.dags.iter().map(SteinerDag::csr).collect();
    let n = cover.graph_n;
    let per_source = par::map_range(exec, n, |u| {
        let rows: Vec<Vec<Dist>> = cover
            .dags
            .iter()
            .zip(&csrs)
            .map(|(dag, csr)| dag.rows_from(csr, VertexRef::Original(u)))
            .collect();
        let mut out = SourceScan { dominating: None, worst: None };
        for v in (0..n).filter(|&v| v != u) {
            let dg = d.get(u, v);
            if out.dominating.is_none() {
                if let Some((i, dd)) = rows.iter().enumerate().find_map(|(i, r)| {
                    let dd = r[v]?;
                    underestimates(Some(dd), dg).then_some((i, dd))
                }) {
                    out.dominating = Some(DominatingWitness { dag: i, u, v, dag_distance: dd, graph_distance: dg });
                }
            }
            if let Some(dg) = dg {
                let best = rows.iter().filter_map(|r| r[v]).min_by(f64::total_cmp);
                let ratio = best.map_or(f64::INFINITY, |b| b / dg);
                if out.worst.is_none_or(|w| ratio > w.0) {
                    out.worst = Some((ratio, v, best, dg));
                }
            }
        }
        out
    });
    let mut dominating = None;
    let mut worst: Option<(f64, usize, usize, Dist, f64)> = None;
    for (u, s) in per_source.into_iter().enumerate() {
        if dominating.is_none() {
            dominating = s.dominating;
        }
        if let Some((r, v, best, dg)) = s.worst {
            if worst.is_none_or(|w| r > w.0) {
                worst = Some((r, u, v, best, dg));
            }
        }
    }
    let dom = DominatingReport { passed: dominating.is_none(), witness: dominating };
    let (max_ratio, worst_pair, witness) = match worst {
        None => (1.0, None, None),
        Some((r, u, v, best, dg)) => {
            let w = exceeds(best, dg, t).then_some(StretchWitness { u, v, best, graph_distance: dg });
            (r, Some((u, v)), w)
        }
    };
    let stretch = StretchReport { passed: witness.is_none(), target: t, max_ratio, worst_pair, witness };
    (dom, stretch)
}

/// Checks that no dag underestimates any graph distance.
pub fn verify_dominating(d: &DistanceMatrix, cover: &DagCover) -> Result<DominatingReport> {
    check_cover_size(d, cover)?;
    Ok(scan(d, cover, cover.t, Exec::default()).0)
}

/// Checks that every reachable pair is approximated within stretch `t`.
pub fn verify_stretch(d: &DistanceMatrix, cover: &DagCover, t: f64) -> Result<StretchReport> {
    if t < 1.0 {
        return Err(Error::input(format!("stretch target {t} below 1")));
    }
    check_cover_size(d, cover)?;
    Ok(scan(d, cover, t, Exec::default()).1)
}

/// Size of the union of dag edges that are not graph edges. Edges touching a
/// Steiner vertex always count; weights are ignored.
pub fn count_extra_edges(g: &WeightedDigraph, cover: &DagCover) -> usize {
    let mut original_pairs = HashSet::new();
    let mut steiner_edges = 0;
    for dag in &cover.dags {
        for &(a, b, _) in &dag.edges {
            match (a, b) {
                (VertexRef::Original(x), VertexRef::Original(y)) => {
                    if !g.has_edge(x, y) {
                        original_pairs.insert((x, y));
                    }
                }
                _ => steiner_edges += 1,
            }
        }
    }
    original_pairs.len() + steiner_edges
}

pub fn certify(g: &WeightedDigraph, cover: &DagCover) -> Result<CoverCertificate> {
    certify_with(g, cover, Exec::default())
}

/// Acyclicity, order agreement, domination, stretch against `cover.t()`, and
/// sparsity counts.
pub fn certify_with(g: &WeightedDigraph, cover: &DagCover, exec: Exec) -> Result<CoverCertificate> {
    let d = crate::graph::all_pairs_distances_with(g, exec);
    certify_against(g, &d, cover, exec)
}

/// [`certify_with`] reusing a precomputed distance matrix of `g`.
pub fn certify_against(
    g: &WeightedDigraph,
    d: &DistanceMatrix,
    cover: &DagCover,
    exec: Exec,
) -> Result<CoverCertificate> {
    check_cover_size(d, cover)?;
    if g.n() != d.n() {
        return Err(Error::structural("distance matrix does not match the graph"));
    }
    let dags: Vec<DagCheck> = par::map(exec, &cover.dags, |dag| DagCheck {
        edges: dag.edge_count(),
        steiner_vertices: dag.steiner_count,
        cycle: dag.find_cycle(),
        order_violation: dag.order_violation(),
    });
    let (dominating, stretch) = scan(d, cover, cover.t, exec);
    Ok(CoverCertificate {
        acyclic: dags.iter().all(DagCheck::acyclic),
        order_consistent: dags.iter().all(|c| c.order_violation.is_none()),
        dags,
        dominating,
        stretch,
        extra_edges: count_extra_edges(g, cover),
        steiner_vertices: cover.steiner_vertices(),
    })
}

/// Accumulates gadgets and plain edges into one dag whose declared order
/// follows vertex positions `pos` (position of each original vertex).
/// Each Steiner chain node sorts just before the member it precedes.
pub(crate) struct DagAssembler {
    n: usize,
    pos: Vec<usize>,
    steiner_keys: Vec<usize>,
    edges: Vec<(VertexRef, VertexRef, f64)>,
}

impl DagAssembler {
    pub(crate) fn new(pos: Vec<usize>) -> Self {
        DagAssembler { n: pos.len(), pos, steiner_keys: Vec::new(), edges: Vec::new() }
    }

    /// Adds a gadget; returns the dag-local Steiner id of each of its chain
    /// nodes, indexed by member position (`None` for pruned nodes).
    pub(crate) fn add_gadget(&mut self, gadget: &VertexGadget) -> Vec<Option<usize>> {
        let mut ids = vec![None; gadget.members().len()];
        for &i in gadget.chain() {
            ids[i] = Some(self.steiner_keys.len());
            self.steiner_keys.push(self.pos[gadget.members()[i]]);
        }
        for (a, b, w) in gadget.edges() {
            let map = |node| match node {
                crate::gadget::GadgetNode::Chain(i) => VertexRef::Steiner(ids[i].expect("chain node kept")),
                crate::gadget::GadgetNode::Member(i) => VertexRef::Original(gadget.members()[i]),
            };
            self.edges.push((map(a), map(b), w));
        }
        ids
    }

    pub(crate) fn finish(self) -> Result<SteinerDag> {
        let mut keyed: Vec<((usize, usize, usize), VertexRef)> = (0..self.n)
            .map(|v| ((self.pos[v], 1, 0), VertexRef::Original(v)))
            .chain(self.steiner_keys.iter().enumerate().map(|(k, &p)| ((p, 0, k), VertexRef::Steiner(k))))
            .collect();
        keyed.sort_unstable_by_key(|e| e.0);
        let order = keyed.into_iter().map(|e| e.1).collect();
        SteinerDag::new(self.n, (0..self.n).collect(), self.steiner_keys.len(), self.edges, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_pairs_distances;

    fn o(v: usize) -> VertexRef {
        VertexRef::Original(v)
    }

    fn path3() -> WeightedDigraph {
        WeightedDigraph::new(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
    }

    fn subgraph_cover(g: &WeightedDigraph) -> DagCover {
        let edges = g.edges().iter().map(|e| (o(e.tail), o(e.head), e.weight)).collect();
        let dag = SteinerDag::new(g.n(), (0..g.n()).collect(), 0, edges, (0..g.n()).map(o).collect()).unwrap();
        DagCover::new(g.n(), 1.0, false, vec![dag], Provenance::new("test")).unwrap()
    }

    #[test]
    fn subgraph_cover_certifies_with_no_extra_edges() {
        let g = path3();
        let cert = certify(&g, &subgraph_cover(&g)).unwrap();
        assert!(cert.passed());
        assert_eq!(cert.extra_edges, 0);
        assert_eq!(cert.stretch.max_ratio, 1.0);
    }

    #[test]
    fn edgeless_dags_dominate_but_miss_pairs() {
        let g = path3();
        let cover = DagCover::new(3, 1.0, false, vec![SteinerDag::empty(3)], Provenance::default()).unwrap();
        let d = all_pairs_distances(&g);
        assert!(verify_dominating(&d, &cover).unwrap().passed);
        let s = verify_stretch(&d, &cover, 1.0).unwrap();
        assert!(!s.passed);
        assert_eq!(s.witness.as_ref().map(|w| (w.u, w.v)), Some((0, 1)));
        assert!(s.max_ratio.is_infinite());
    }

    #[test]
    fn empty_cover_fails_stretch() {
        let g = path3();
        let cover = DagCover::new(3, 1.0, false, vec![], Provenance::default()).unwrap();
        assert!(!certify(&g, &cover).unwrap().stretch.passed);
    }

    #[test]
    fn underweight_edge_is_witnessed_and_replays() {
        let g = path3();
        let dag = SteinerDag::new(3, vec![0, 1, 2], 0, vec![(o(0), o(2), 1.5)], vec![o(0), o(1), o(2)]).unwrap();
        let cover = DagCover::new(3, 1.0, false, vec![dag], Provenance::default()).unwrap();
        let cert = certify(&g, &cover).unwrap();
        let w = cert.dominating.witness.clone().unwrap();
        assert_eq!((w.dag, w.u, w.v), (0, 0, 2));
        assert!(w.replay(&g, &cover).unwrap());
        assert_eq!(cert.extra_edges, 1);
    }

    #[test]
    fn injected_two_cycle_is_reported() {
        let dag = SteinerDag::new(
            3,
            vec![0, 1, 2],
            0,
            vec![(o(0), o(1), 1.0), (o(1), o(0), 1.0)],
            vec![o(0), o(1), o(2)],
        )
        .unwrap();
        let cycle = dag.find_cycle().unwrap();
        assert_eq!(cycle, vec![o(0), o(1), o(0)]);
        assert!(dag.has_cycle_walk(&cycle));
        assert_eq!(dag.order_violation(), Some((o(1), o(0))));
    }

    #[test]
    fn extra_edges_are_a_set_union() {
        let g = path3();
        let a = SteinerDag::new(3, vec![0, 1, 2], 0, vec![(o(0), o(2), 3.0)], vec![o(0), o(1), o(2)]).unwrap();
        let b = SteinerDag::new(3, vec![0, 1, 2], 0, vec![(o(0), o(2), 7.0)], vec![o(0), o(1), o(2)]).unwrap();
        let cover = DagCover::new(3, 1.0, false, vec![a, b], Provenance::default()).unwrap();
        assert_eq!(count_extra_edges(&g, &cover), 1);
    }

    #[test]
    fn rejects_malformed_dags() {
        assert!(SteinerDag::new(2, vec![0, 1], 0, vec![(o(0), o(1), 0.0)], vec![o(0), o(1)]).is_err());
        assert!(SteinerDag::new(2, vec![0], 0, vec![(o(0), o(1), 1.0)], vec![o(0)]).is_err());
        assert!(SteinerDag::new(2, vec![0, 1], 1, vec![], vec![o(0), o(1)]).is_err());
        let zero_steiner = SteinerDag::new(
            2,
            vec![0, 1],
            1,
            vec![(VertexRef::Steiner(0), o(1), 0.0)],
            vec![VertexRef::Steiner(0), o(0), o(1)],
        );
        assert!(zero_steiner.is_ok());
    }

    #[test]
    fn non_steiner_flag_is_enforced() {
        let dag = SteinerDag::new(1, vec![0], 1, vec![], vec![VertexRef::Steiner(0), o(0)]).unwrap();
        assert!(DagCover::new(1, 1.0, false, vec![dag], Provenance::default()).is_err());
    }

    #[test]
    fn certify_is_mode_independent() {
        let g = WeightedDigraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let cover = subgraph_cover(&WeightedDigraph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap());
        let a = certify_with(&g, &cover, Exec::Sequential).unwrap();
        let b = certify_with(&g, &cover, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(!a.stretch.passed);
    }
}
