//! Acceptance suite. Each test prints one `[PASS]`/`[FAIL]` line, then
//! asserts. Run with `cargo test --release -p dagcover --test acceptance`.

use std::collections::HashMap;
use std::io::Write;
use std::time::Instant;

use dagcover::config::Budget;
use dagcover::cover::{certify, count_extra_edges, DagCover, Provenance, SteinerDag, VertexRef};
use dagcover::decomposition::validate_decomposition_of;
use dagcover::gadget::build_vertex_gadget;
use dagcover::generate::{self, Instance, KTreeParams};
use dagcover::graph::{all_pairs_distances, aspect_ratio, ceil_log2, DistanceMatrix};
use dagcover::io;
use dagcover::planar::cover::{build_planar_cover, PlanarCover};
use dagcover::planar::path_cover::{build_path_cover_with, verify_path_cover_contract};
use dagcover::star::{analyze_star_cover, star_lower_bound};
use dagcover::tw_nonsteiner::{build_tw_nonsteiner_cover, dag_count, extra_edge_budget};
use dagcover::tw_steiner::{edge_budget, internal_edge_pairs, pathwidth_budget, tw_steiner_cover};
use dagcover::{Exec, WeightedDigraph};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

/// Writes straight to stdout so the line survives libtest's capture.
fn report(id: u32, title: &str, pass: bool, secs: f64, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{tag}] {id} {title} ({secs:.2}s): {detail}").unwrap();
}

fn ktree_suite() -> Vec<(Instance, usize)> {
    (0..50u64)
        .map(|i| {
            let k = 1 + (i % 4) as usize;
            let n = [16, 64, 200][((i / 4) % 3) as usize];
            (generate::ktree(KTreeParams::new(n, k), i).unwrap(), k)
        })
        .collect()
}

fn planar_suite() -> Vec<(String, Instance)> {
    let mut out = Vec::new();
    for (i, (r, c)) in [(2, 2), (3, 3), (4, 4), (5, 5), (6, 6), (8, 8), (3, 8)].into_iter().enumerate() {
        out.push((format!("grid{r}x{c}"), generate::grid(r, c, 10, i as u64).unwrap()));
    }
    for (i, n) in [3, 8, 16, 32, 64].into_iter().enumerate() {
        out.push((format!("dicycle{n}"), generate::dicycle(n, 10, 100 + i as u64).unwrap()));
    }
    out
}

fn single_dag_cover(g: &WeightedDigraph, dag: &SteinerDag) -> DagCover {
    DagCover::new(g.n(), 1.0, true, vec![dag.clone()], Provenance::new("single")).unwrap()
}

#[test]
fn criterion_1_treewidth_steiner_cover_is_exact() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut worst_edges, mut worst_width) = (0.0f64, 0.0f64);
    for (i, (inst, k)) in ktree_suite().iter().enumerate() {
        let g = &inst.graph;
        let n = g.n();
        let built = tw_steiner_cover(g, inst.decomposition.as_ref().unwrap()).unwrap();
        let cert = certify(g, &built.cover).unwrap();
        let exact = cert.acyclic && cert.dominating.passed && (cert.stretch.max_ratio - 1.0).abs() <= TOL;
        if built.cover.dags().len() != 2 || !exact {
            failures.push(format!("#{i}: dags={} ratio={}", built.cover.dags().len(), cert.stretch.max_ratio));
        }
        for (dag, pd) in built.cover.dags().iter().zip(&built.path_decompositions) {
            let extra = count_extra_edges(g, &single_dag_cover(g, dag));
            worst_edges = worst_edges.max(extra as f64 / edge_budget(n, *k) as f64);
            if extra > edge_budget(n, *k) {
                failures.push(format!("#{i}: {extra} extra edges"));
            }
            let total = n + dag.steiner_count();
            let valid =
                validate_decomposition_of(total, &internal_edge_pairs(dag), &pd.to_tree_decomposition()).unwrap();
            worst_width = worst_width.max(pd.width() as f64 / pathwidth_budget(n, *k) as f64);
            if !valid.is_valid() || pd.width() > pathwidth_budget(n, *k) {
                failures.push(format!("#{i}: path decomposition width {} valid={}", pd.width(), valid.is_valid()));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs < 60.0;
    let detail = format!(
        "50 k-trees, max edges/budget {worst_edges:.3}, max width/budget {worst_width:.3}, failures {failures:?}"
    );
    report(1, "treewidth Steiner cover exact", pass, secs, &detail);
    assert!(pass, "{detail}");
}

const STAR7_GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/star7_tw_steiner.json");

fn star7_json() -> (String, dagcover::tw_steiner::TwSteinerCover) {
    let inst = generate::star(7).unwrap();
    let built = tw_steiner_cover(&inst.graph, inst.decomposition.as_ref().unwrap()).unwrap();
    (io::format_cover(&built.cover), built)
}

#[test]
fn criterion_2_star7_golden() {
    let start = Instant::now();
    let (text, built) = star7_json();
    if std::env::var_os("DAGCOVER_BLESS").is_some() {
        std::fs::write(STAR7_GOLDEN, &text).unwrap();
    }
    let golden = std::fs::read_to_string(STAR7_GOLDEN).unwrap_or_default();
    let mut problems = Vec::new();
    if built.sigma.order() != (0..7).collect::<Vec<_>>() {
        problems.push(format!("sigma {:?}", built.sigma.order()));
    }
    if built.recursion.nodes[0].bag != vec![0] {
        problems.push(format!("root bag {:?}", built.recursion.nodes[0].bag));
    }
    let d0 = &built.cover.dags()[0];
    if d0.steiner_count() != 7 || d0.edge_count() != 19 {
        problems.push(format!("dag 0 has {} Steiner vertices, {} edges", d0.steiner_count(), d0.edge_count()));
    }
    let cover = &built.cover;
    for a in 1..7 {
        for b in 1..7 {
            if a != b && cover.best_distance(a, b) != Some(2.0) {
                problems.push(format!("leaf {a} -> leaf {b}"));
            }
        }
        if cover.best_distance(a, 0) != Some(1.0) || cover.best_distance(0, a) != Some(1.0) {
            problems.push(format!("leaf {a} <-> rt"));
        }
    }
    let (again, _) = star7_json();
    if again != text || golden != text {
        problems.push("JSON differs from the golden file or between runs".into());
    }
    let pass = problems.is_empty();
    report(2, "S_7 golden cover", pass, start.elapsed().as_secs_f64(), &format!("{problems:?}"));
    assert!(pass, "{problems:?}");
}

#[test]
fn criterion_3_nonsteiner_cover_is_exact() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    for (i, (inst, k)) in ktree_suite().iter().enumerate() {
        let g = &inst.graph;
        let built = build_tw_nonsteiner_cover(g, inst.decomposition.as_ref().unwrap()).unwrap();
        let cert = certify(g, &built.cover).unwrap();
        let budget = extra_edge_budget(g.n(), *k);
        worst = worst.max(cert.extra_edges as f64 / budget as f64);
        let dags = built.cover.dags().len();
        let expected_dags = 2 * ceil_log2(g.n() + 1) as usize;
        if dags != expected_dags
            || dags != dag_count(g.n())
            || !cert.passed()
            || (cert.stretch.max_ratio - 1.0).abs() > TOL
            || cert.extra_edges > budget
            || cert.steiner_vertices != 0
        {
            failures.push(format!("#{i}: dags={dags} ratio={} mu={}", cert.stretch.max_ratio, cert.extra_edges));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs < 120.0;
    let detail = format!("50 k-trees, max mu/budget {worst:.3}, failures {failures:?}");
    report(3, "non-Steiner cover exact", pass, secs, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_4_star_lower_bound_consistency() {
    let start = Instant::now();
    let mut problems = Vec::new();
    for n in [8, 32, 128] {
        let inst = generate::star(n).unwrap();
        let built = build_tw_nonsteiner_cover(&inst.graph, inst.decomposition.as_ref().unwrap()).unwrap();
        let a = analyze_star_cover(n, &built.cover, 1.0).unwrap();
        let bound = ((((n - 1) * (n - 1)) as f64) / ((2 * a.extra_edges + n - 1) as f64) + 1.0).log2();
        if !a.consistent || a.collision.is_some() || (a.dags as f64) < bound - TOL {
            problems.push(format!("n={n}: {a:?}"));
        }
    }
    let lb = star_lower_bound(5, 0);
    if (lb - 5f64.log2()).abs() > 1e-12 {
        problems.push(format!("star_lower_bound(5, 0) = {lb}"));
    }
    let pass = problems.is_empty();
    report(4, "star lower-bound consistency", pass, start.elapsed().as_secs_f64(), &format!("{problems:?}"));
    assert!(pass, "{problems:?}");
}

fn gadget_case() -> impl Strategy<Value = (WeightedDigraph, Vec<usize>, Vec<bool>, usize)> {
    (1usize..=20).prop_flat_map(|n| {
        let edges = prop::collection::vec((0..n, 0..n, 1u32..12), 0..=3 * n);
        let sigma = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        (edges, sigma, prop::collection::vec(any::<bool>(), n), 0..n).prop_map(move |(es, sigma, keep, x)| {
            let g = WeightedDigraph::new(
                n,
                es.into_iter().filter(|(a, b, _)| a != b).map(|(a, b, w)| (a, b, f64::from(w))),
            )
            .unwrap();
            (g, sigma, keep, x)
        })
    })
}

#[test]
fn criterion_5_gadget_lemma() {
    let start = Instant::now();
    let config = Config { cases: 200, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let outcome = runner.run(&gadget_case(), |(g, sigma, keep, x)| {
        let n = g.n();
        let d = all_pairs_distances(&g);
        let members: Vec<usize> = sigma.iter().copied().filter(|&v| keep[v] || v == x).collect();
        let gadget = build_vertex_gadget(&d.column(x), d.row(x), &members, x).unwrap();
        let dag = gadget.to_dag(n).unwrap();
        prop_assert_eq!(dag.steiner_count(), members.len());
        prop_assert!(dag.edge_count() <= 3 * members.len());
        let induced: Vec<usize> = dag
            .order()
            .iter()
            .filter_map(|r| match *r {
                VertexRef::Original(v) => Some(v),
                VertexRef::Steiner(_) => None,
            })
            .collect();
        prop_assert_eq!(&induced, &members);
        for (i, &vi) in members.iter().enumerate() {
            let row = dag.distances_from(VertexRef::Original(vi));
            for &vj in &members[i + 1..] {
                if let (Some(a), Some(b)) = (d.get(vi, x), d.get(x, vj)) {
                    prop_assert_eq!(row[vj], Some(a + b));
                }
            }
        }
        Ok(())
    });
    let pass = outcome.is_ok();
    report(5, "vertex gadget lemma", pass, start.elapsed().as_secs_f64(), &format!("200 cases, {outcome:?}"));
    assert!(pass, "{outcome:?}");
}

#[test]
fn criterion_6_path_cover_contract() {
    let start = Instant::now();
    let budget = Budget::from_env().unwrap();
    let mut failures = Vec::new();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for (name, inst) in planar_suite() {
        let g = &inst.graph;
        let d = all_pairs_distances(g);
        let phi = aspect_ratio(&d).unwrap_or(1.0);
        for eps in [0.25, 0.5] {
            let pc = build_path_cover_with(g, inst.embedding.as_ref().unwrap(), eps, &d, Exec::default()).unwrap();
            let r = verify_path_cover_contract(&d, &pc).unwrap();
            let paths = pc.max_paths_per_vertex() as f64 / budget.paths_per_vertex(g.n(), phi);
            let portals = pc.max_portals() as f64 / budget.portals_per_path(eps);
            worst = (worst.0.max(r.max_ratio / (1.0 + eps)), worst.1.max(paths), worst.2.max(portals));
            if !r.passed || r.max_ratio > (1.0 + eps) * (1.0 + TOL) || paths > 1.0 || portals > 1.0 {
                failures.push(format!("{name} eps={eps}: ratio {} paths {paths:.3} portals {portals:.3}", r.max_ratio));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty() && secs < 120.0;
    let detail = format!(
        "24 runs, max ratio/(1+eps) {:.4}, paths/budget {:.3}, portals/budget {:.3}, failures {failures:?}",
        worst.0, worst.1, worst.2
    );
    report(6, "path-cover contract", pass, secs, &detail);
    assert!(pass, "{detail}");
}

/// Independently finds the best portal route by trying every portal pair,
/// then the deepest hierarchy node whose subpath holds both portals.
fn recomputed_center(d: &DistanceMatrix, planar: &PlanarCover, u: usize, v: usize) -> Option<usize> {
    let pc = &planar.path_cover;
    let mut best: Option<(f64, usize, usize, usize)> = None;
    for (i, &p) in pc.paths_of(u).iter().enumerate() {
        let Some(j) = pc.paths_of(v).iter().position(|&q| q == p) else { continue };
        let path = &pc.paths()[p];
        for a in &pc.covering_sets(u)[i] {
            for b in &pc.covering_sets(v)[j] {
                let (Some(x), Some(y), Some(z)) = (d.get(u, a.vertex), path.along(a.pos, b.pos), d.get(b.vertex, v))
                else {
                    continue;
                };
                if best.is_none_or(|bb| x + y + z < bb.0) {
                    best = Some((x + y + z, p, a.pos, b.pos));
                }
            }
        }
    }
    let (_, p, a, b) = best?;
    let h = &planar.hierarchies[p];
    let (ca, cb) = (h.ancestors(a), h.ancestors(b));
    let common = ca.iter().zip(&cb).take_while(|(x, y)| x == y).last()?.0;
    Some(h.centroid_vertex(*common))
}

#[test]
fn criterion_7_planar_cover() {
    let start = Instant::now();
    let budget = Budget::from_env().unwrap();
    let mut failures = Vec::new();
    let (mut worst_ratio, mut worst_mu, mut witnesses) = (0.0f64, 0.0f64, 0usize);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, inst) in planar_suite() {
        let g = &inst.graph;
        let n = g.n();
        let d = all_pairs_distances(g);
        let phi = aspect_ratio(&d).unwrap_or(1.0);
        let pairs: Vec<(usize, usize, f64)> = d.reachable_pairs().filter(|&(u, v, _)| u != v).collect();
        for eps in [0.25, 0.5] {
            let planar = build_planar_cover(g, inst.embedding.as_ref().unwrap(), eps).unwrap();
            let cert = certify(g, &planar.cover).unwrap();
            let mu = cert.extra_edges as f64 / budget.extra_edges(n, eps, phi);
            worst_ratio = worst_ratio.max(cert.stretch.max_ratio / (1.0 + eps));
            worst_mu = worst_mu.max(mu);
            if planar.cover.dags().len() != 2 || !cert.acyclic || !cert.passed() || mu > 1.0 {
                failures.push(format!("{name} eps={eps}: ratio {} mu/budget {mu:.3}", cert.stretch.max_ratio));
            }
            for _ in 0..20.min(pairs.len()) {
                let (u, v, duv) = pairs[rng.gen_range(0..pairs.len())];
                witnesses += 1;
                let ok = recomputed_center(&d, &planar, u, v).is_some_and(|x| {
                    let via = d.get(u, x).unwrap() + d.get(x, v).unwrap();
                    let dag = &planar.cover.dags()[usize::from(u > v)];
                    let realized = dag.distance(VertexRef::Original(u), VertexRef::Original(v));
                    planar.centers[u].binary_search(&x).is_ok()
                        && planar.centers[v].binary_search(&x).is_ok()
                        && via <= (1.0 + eps) * duv * (1.0 + TOL)
                        && realized.is_some_and(|r| r <= via * (1.0 + TOL))
                });
                if !ok {
                    failures.push(format!("{name} eps={eps}: witness ({u},{v})"));
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures.is_empty();
    let detail = format!(
        "24 covers, max ratio/(1+eps) {worst_ratio:.4}, max mu/budget {worst_mu:.4}, {witnesses} witnesses, failures {failures:?}"
    );
    report(7, "planar Steiner cover", pass, secs, &detail);
    assert!(pass, "{detail}");
}

type Pred = HashMap<VertexRef, (f64, Option<(VertexRef, VertexRef, f64)>)>;

/// Shortest distances from `src` by relaxing edges in the declared order,
/// with the last edge of each shortest path.
fn dag_dp(dag: &SteinerDag, src: VertexRef) -> Pred {
    let pos: HashMap<VertexRef, usize> = dag.order().iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut out: Vec<Vec<(VertexRef, f64)>> = vec![Vec::new(); pos.len()];
    for &(a, b, w) in dag.edges() {
        out[pos[&a]].push((b, w));
    }
    let mut best: Pred = HashMap::from([(src, (0.0, None))]);
    for &r in &dag.order()[pos[&src]..] {
        let Some(&(dr, _)) = best.get(&r) else { continue };
        for &(b, w) in &out[pos[&r]] {
            if best.get(&b).is_none_or(|x| dr + w < x.0) {
                best.insert(b, (dr + w, Some((r, b, w))));
            }
        }
    }
    best
}

fn path_edges(dp: &Pred, target: VertexRef) -> Vec<(VertexRef, VertexRef, f64)> {
    let mut edges = Vec::new();
    let mut cur = target;
    while let Some(&(_, Some(e))) = dp.get(&cur) {
        edges.push(e);
        cur = e.0;
    }
    edges
}

fn best_over(cover: &DagCover, u: usize, v: usize) -> Option<f64> {
    cover
        .dags()
        .iter()
        .filter_map(|dag| dag_dp(dag, VertexRef::Original(u)).get(&VertexRef::Original(v)).map(|x| x.0))
        .min_by(f64::total_cmp)
}

fn rebuild(dag: &SteinerDag, edges: Vec<(VertexRef, VertexRef, f64)>) -> SteinerDag {
    SteinerDag::new(dag.graph_n(), dag.originals().to_vec(), dag.steiner_count(), edges, dag.order().to_vec()).unwrap()
}

/// Edge drops always use an exact treewidth cover: on planar covers every
/// pair keeps a second route within 1 + eps, so no single edge is critical.
fn mutation_instance(j: u64, kind: usize) -> (WeightedDigraph, DagCover) {
    if j.is_multiple_of(2) || kind == 3 {
        let inst = generate::ktree(KTreeParams::new(18 + j as usize, 1 + (j % 3) as usize), j).unwrap();
        let cover = tw_steiner_cover(&inst.graph, inst.decomposition.as_ref().unwrap()).unwrap().cover;
        (inst.graph, cover)
    } else {
        let inst = generate::grid(3, 3 + (j % 2) as usize, 9, j).unwrap();
        let cover = build_planar_cover(&inst.graph, inst.embedding.as_ref().unwrap(), 0.25).unwrap().cover;
        (inst.graph, cover)
    }
}

/// Applies mutation `kind` and reports whether the matching certificate
/// field failed with a witness that replays.
fn mutate_and_check(kind: usize, g: &WeightedDigraph, cover: &DagCover, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let d = all_pairs_distances(g);
    let t = cover.t();
    let mut originals: Vec<usize> = (0..g.n()).collect();
    originals.shuffle(rng);
    let mut dag_ids: Vec<usize> = (0..cover.dags().len()).collect();
    dag_ids.shuffle(rng);
    match kind {
        0 => {
            let i = dag_ids[0];
            let dag = &cover.dags()[i];
            let &(a, b, w) = dag.edges().choose(rng).ok_or("dag has no edges")?;
            let both = matches!((a, b), (VertexRef::Original(_), VertexRef::Original(_)));
            let mut edges = dag.edges().to_vec();
            edges.push((b, a, if both { w.max(1.0) } else { 0.0 }));
            let mutated = cover.with_dag(i, rebuild(dag, edges)).unwrap();
            let cert = certify(g, &mutated).unwrap();
            match &cert.dags[i].cycle {
                Some(c) if !cert.acyclic && mutated.dags()[i].has_cycle_walk(c) => Ok(()),
                other => Err(format!("cycle not reported: {other:?}")),
            }
        }
        1 => {
            for &i in &dag_ids {
                let dag = &cover.dags()[i];
                for &u in &originals {
                    let dp = dag_dp(dag, VertexRef::Original(u));
                    let mut candidates = Vec::new();
                    for &v in &originals {
                        let (Some(&(dd, _)), Some(dg)) = (dp.get(&VertexRef::Original(v)), d.get(u, v)) else {
                            continue;
                        };
                        for e in path_edges(&dp, VertexRef::Original(v)) {
                            if e.2 > 0.0 && dd - e.2 / 2.0 < dg * (1.0 - 1e-6) {
                                candidates.push(e);
                            }
                        }
                    }
                    let Some(&(a, b, w)) = candidates.choose(rng) else { continue };
                    let edges = dag.edges().iter().map(|&e| if (e.0, e.1) == (a, b) { (a, b, w / 2.0) } else { e }).collect();
                    let mutated = cover.with_dag(i, rebuild(dag, edges)).unwrap();
                    let cert = certify(g, &mutated).unwrap();
                    return match &cert.dominating.witness {
                        Some(wit) if !cert.dominating.passed && wit.replay(g, &mutated).unwrap() => Ok(()),
                        other => Err(format!("underweight not reported: {other:?}")),
                    };
                }
            }
            Err("no edge on a tight path".into())
        }
        2 => {
            for &i in &dag_ids {
                let mutated = cover.without_dag(i).unwrap();
                let breaks = d.reachable_pairs().any(|(u, v, duv)| {
                    u != v && best_over(&mutated, u, v).is_none_or(|b| b > t * duv * (1.0 + TOL))
                });
                if !breaks {
                    continue;
                }
                let cert = certify(g, &mutated).unwrap();
                return match &cert.stretch.witness {
                    Some(wit) if !cert.stretch.passed && wit.replay(g, &mutated, t).unwrap() => Ok(()),
                    other => Err(format!("deleted dag not reported: {other:?}")),
                };
            }
            Err("every dag is redundant".into())
        }
        _ => {
            for &u in &originals {
                for &v in &originals {
                    let Some(duv) = d.get(u, v).filter(|_| u != v) else { continue };
                    for &i in &dag_ids {
                        let others = cover.without_dag(i).unwrap();
                        if best_over(&others, u, v).is_some_and(|b| b <= t * duv * (1.0 + TOL)) {
                            continue;
                        }
                        let dag = &cover.dags()[i];
                        let dp = dag_dp(dag, VertexRef::Original(u));
                        let mut on_path = path_edges(&dp, VertexRef::Original(v));
                        on_path.shuffle(rng);
                        for (a, b, _) in on_path {
                            let edges = dag.edges().iter().copied().filter(|e| (e.0, e.1) != (a, b)).collect();
                            let mutated = cover.with_dag(i, rebuild(dag, edges)).unwrap();
                            if best_over(&mutated, u, v).is_some_and(|x| x <= t * duv * (1.0 + TOL)) {
                                continue;
                            }
                            let cert = certify(g, &mutated).unwrap();
                            return match &cert.stretch.witness {
                                Some(wit) if !cert.stretch.passed && wit.replay(g, &mutated, t).unwrap() => Ok(()),
                                other => Err(format!("dropped edge not reported: {other:?}")),
                            };
                        }
                    }
                }
            }
            // fall back to every edge of every dag
            let mut all: Vec<(usize, usize)> =
                dag_ids.iter().flat_map(|&i| (0..cover.dags()[i].edge_count()).map(move |k| (i, k))).collect();
            all.shuffle(rng);
            for (i, k) in all {
                let dag = &cover.dags()[i];
                let mut edges = dag.edges().to_vec();
                edges.remove(k);
                let mutated = cover.with_dag(i, rebuild(dag, edges)).unwrap();
                let breaks = d.reachable_pairs().any(|(u, v, duv)| {
                    u != v && best_over(&mutated, u, v).is_none_or(|b| b > t * duv * (1.0 + TOL))
                });
                if !breaks {
                    continue;
                }
                let cert = certify(g, &mutated).unwrap();
                return match &cert.stretch.witness {
                    Some(wit) if !cert.stretch.passed && wit.replay(g, &mutated, t).unwrap() => Ok(()),
                    other => Err(format!("dropped edge not reported: {other:?}")),
                };
            }
            Err("no edge is critical".into())
        }
    }
}

#[test]
fn criterion_8_verifier_soundness() {
    let start = Instant::now();
    let kinds = ["cycle", "underweight", "delete dag", "drop gadget edge"];
    let mut caught = [0usize; 4];
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for m in 0..40u64 {
        let kind = (m % 4) as usize;
        let (g, cover) = mutation_instance(m / 4, kind);
        assert!(certify(&g, &cover).unwrap().passed(), "instance {m} must start from a passing cover");
        match mutate_and_check(kind, &g, &cover, &mut rng) {
            Ok(()) => caught[kind] += 1,
            Err(e) => failures.push(format!("#{m} {}: {e}", kinds[kind])),
        }
    }
    let pass = failures.is_empty();
    let detail = format!(
        "caught {}/40 ({} {}, {} {}, {} {}, {} {}), failures {failures:?}",
        caught.iter().sum::<usize>(),
        kinds[0],
        caught[0],
        kinds[1],
        caught[1],
        kinds[2],
        caught[2],
        kinds[3],
        caught[3]
    );
    report(8, "verifier soundness", pass, start.elapsed().as_secs_f64(), &detail);
    assert!(pass, "{detail}");
}
