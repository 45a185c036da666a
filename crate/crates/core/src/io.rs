//! Text and JSON formats: graphs, PACE tree decompositions, rotation
//! systems, covers, path covers, certificates, and DOT export.
//!
//! Floats are written in shortest round-trip form, so write-then-read is
//! the identity.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use crate::cover::{CoverCertificate, DagCover, Provenance, SteinerDag, VertexRef};
use crate::decomposition::TreeDecomposition;
use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::planar::path_cover::{DiPath, PathCover, Portal};
use crate::planar::PlanarEmbedding;

/// Version tag carried by every JSON document.
pub const FORMAT_VERSION: u64 = 1;

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { file: file.to_string(), line, msg: msg.into() }
}

/// Non-blank lines with their 1-based numbers, skipping lines that start
/// with `comment`.
fn content_lines<'a>(text: &'a str, comment: &'a str) -> impl Iterator<Item = (usize, &'a str)> + 'a {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

fn number<T: std::str::FromStr>(tok: &str, file: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| parse_err(file, line, format!("bad {what} {tok:?}")))
}

fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn name(path: &Path) -> String {
    path.display().to_string()
}

/// Parses `n m` followed by `m` lines `tail head weight`; `#` starts a
/// comment line.
pub fn parse_graph(text: &str, file: &str) -> Result<WeightedDigraph> {
    let mut lines = content_lines(text, "#");
    let (hl, header) = lines.next().ok_or_else(|| parse_err(file, 1, "missing `n m` header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 2 {
        return Err(parse_err(file, hl, "header must be `n m`"));
    }
    let n: usize = number(h[0], file, hl, "vertex count")?;
    let m: usize = number(h[1], file, hl, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut last = hl;
    for (ln, l) in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 3 {
            return Err(parse_err(file, ln, "edge line must be `tail head weight`"));
        }
        let tail: usize = number(t[0], file, ln, "tail")?;
        let head: usize = number(t[1], file, ln, "head")?;
        let w: f64 = number(t[2], file, ln, "weight")?;
        if edges.len() == m {
            return Err(parse_err(file, ln, format!("more than the declared {m} edges")));
        }
        WeightedDigraph::new(n, [(tail, head, w)]).map_err(|e| parse_err(file, ln, e.to_string()))?;
        edges.push((tail, head, w));
        last = ln;
    }
    if edges.len() != m {
        return Err(parse_err(file, last, format!("expected {m} edges, found {}", edges.len())));
    }
    WeightedDigraph::new(n, edges).map_err(|e| parse_err(file, hl, e.to_string()))
}

pub fn format_graph(g: &WeightedDigraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {}", e.tail, e.head, e.weight);
    }
    s
}

pub fn read_graph(path: &Path) -> Result<WeightedDigraph> {
    parse_graph(&read_text(path)?, &name(path))
}

pub fn write_graph(path: &Path, g: &WeightedDigraph) -> Result<()> {
    Ok(std::fs::write(path, format_graph(g))?)
}

/// Parses a PACE `.td` file into the vertex count and the decomposition
/// (0-based).
pub fn parse_td(text: &str, file: &str) -> Result<(usize, TreeDecomposition)> {
    let mut lines = content_lines(text, "c");
    let (hl, header) = lines.next().ok_or_else(|| parse_err(file, 1, "missing `s td` header"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 5 || h[0] != "s" || h[1] != "td" {
        return Err(parse_err(file, hl, "header must be `s td <bags> <width+1> <n>`"));
    }
    let count: usize = number(h[2], file, hl, "bag count")?;
    let size: usize = number(h[3], file, hl, "bag size")?;
    let n: usize = number(h[4], file, hl, "vertex count")?;
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; count];
    let mut tree = Vec::new();
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        let t: Vec<&str> = l.split_whitespace().collect();
        let one_based = |tok: &str, limit: usize, what: &str| -> Result<usize> {
            let x: usize = number(tok, file, ln, what)?;
            if x == 0 || x > limit {
                return Err(parse_err(file, ln, format!("{what} {x} outside 1..={limit}")));
            }
            Ok(x - 1)
        };
        if t[0] == "b" {
            let id = one_based(t.get(1).copied().unwrap_or(""), count, "bag index")?;
            if bags[id].is_some() {
                return Err(parse_err(file, ln, format!("bag {} listed twice", id + 1)));
            }
            let bag = t[2..].iter().map(|tok| one_based(tok, n, "vertex")).collect::<Result<Vec<_>>>()?;
            if bag.len() > size {
                return Err(parse_err(file, ln, format!("bag has {} vertices, header allows {size}", bag.len())));
            }
            bags[id] = Some(bag);
        } else {
            if t.len() != 2 {
                return Err(parse_err(file, ln, "tree edge must be `<i> <j>`"));
            }
            tree.push((one_based(t[0], count, "bag index")?, one_based(t[1], count, "bag index")?));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_err(file, last, format!("bag {} never listed", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    Ok((n, TreeDecomposition::new(bags, tree)))
}

pub fn format_td(td: &TreeDecomposition, n: usize) -> String {
    let size = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("s td {} {size} {n}\n", td.bags().len());
    for (i, bag) in td.bags().iter().enumerate() {
        let _ = write!(s, "b {}", i + 1);
        for v in bag {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        let _ = writeln!(s, "{} {}", a + 1, b + 1);
    }
    s
}

pub fn read_td(path: &Path) -> Result<(usize, TreeDecomposition)> {
    parse_td(&read_text(path)?, &name(path))
}

/// Parses lines `v: <neighbours in cyclic order>` for a graph on `n`
/// vertices; unlisted vertices get an empty rotation.
pub fn parse_embedding(text: &str, file: &str, n: usize) -> Result<PlanarEmbedding> {
    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; n];
    for (ln, l) in content_lines(text, "#") {
        let (head, rest) = l.split_once(':').ok_or_else(|| parse_err(file, ln, "expected `v: neighbours`"))?;
        let v: usize = number(head.trim(), file, ln, "vertex")?;
        if v >= n {
            return Err(parse_err(file, ln, format!("vertex {v} outside 0..{n}")));
        }
        if rotation[v].is_some() {
            return Err(parse_err(file, ln, format!("vertex {v} listed twice")));
        }
        let nbrs = rest
            .split_whitespace()
            .map(|tok| {
                let u: usize = number(tok, file, ln, "neighbour")?;
                if u >= n {
                    return Err(parse_err(file, ln, format!("neighbour {u} outside 0..{n}")));
                }
                Ok(u)
            })
            .collect::<Result<Vec<_>>>()?;
        rotation[v] = Some(nbrs);
    }
    Ok(PlanarEmbedding::new(rotation.into_iter().map(Option::unwrap_or_default).collect()))
}

pub fn format_embedding(emb: &PlanarEmbedding) -> String {
    let mut s = String::new();
    for v in 0..emb.n() {
        let _ = write!(s, "{v}:");
        for u in emb.rotation(v) {
            let _ = write!(s, " {u}");
        }
        s.push('\n');
    }
    s
}

pub fn read_embedding(path: &Path, n: usize) -> Result<PlanarEmbedding> {
    parse_embedding(&read_text(path)?, &name(path), n)
}

/// JSON form of a dag vertex: the id for originals, `"s:<dag>:<k>"` for
/// Steiner vertices.
pub fn ref_to_json(dag: usize, r: VertexRef) -> Value {
    match r {
        VertexRef::Original(v) => json!(v),
        VertexRef::Steiner(k) => json!(format!("s:{dag}:{k}")),
    }
}

fn ref_from_json(v: &Value, dag: usize) -> Result<VertexRef> {
    if let Some(x) = v.as_u64() {
        return Ok(VertexRef::Original(x as usize));
    }
    let bad = || Error::structural(format!("dags[{dag}]: bad vertex reference {v}"));
    let s = v.as_str().ok_or_else(bad)?;
    let mut parts = s.split(':');
    match (parts.next(), parts.next(), parts.next(), parts.next()) {
        (Some("s"), Some(d), Some(k), None) => {
            if d.parse::<usize>().ok() != Some(dag) {
                return Err(Error::structural(format!("dags[{dag}]: Steiner vertex {s} belongs to another dag")));
            }
            Ok(VertexRef::Steiner(k.parse().map_err(|_| bad())?))
        }
        _ => Err(bad()),
    }
}

pub fn cover_to_json(cover: &DagCover) -> Value {
    let dags: Vec<Value> = cover
        .dags()
        .iter()
        .enumerate()
        .map(|(i, dag)| {
            json!({
                "order": dag.order().iter().map(|&r| ref_to_json(i, r)).collect::<Vec<_>>(),
                "steiner_vertices": (0..dag.steiner_count()).map(|k| ref_to_json(i, VertexRef::Steiner(k))).collect::<Vec<_>>(),
                "edges": dag.edges().iter().map(|&(a, b, w)| json!([ref_to_json(i, a), ref_to_json(i, b), w])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "graph_n": cover.graph_n(),
        "t": cover.t(),
        "steiner": cover.is_steiner(),
        "dags": dags,
        "provenance": serde_json::to_value(&cover.provenance).expect("provenance serializes"),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

pub fn format_cover(cover: &DagCover) -> String {
    to_pretty(&cover_to_json(cover))
}

fn parse_json(text: &str, file: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(file, e.line(), e.to_string()))?;
    match v.get("format").and_then(Value::as_u64) {
        Some(FORMAT_VERSION) => Ok(v),
        other => Err(parse_err(file, 1, format!("unsupported format {other:?}, expected {FORMAT_VERSION}"))),
    }
}

fn field<'a>(v: &'a Value, key: &str, file: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::structural(format!("{file}: missing field `{key}`")))
}

fn as_array<'a>(v: &'a Value, what: &str, file: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::structural(format!("{file}: `{what}` is not an array")))
}

fn as_usize(v: &Value, what: &str, file: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| Error::structural(format!("{file}: `{what}` is not an index")))
}

fn as_f64(v: &Value, what: &str, file: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::structural(format!("{file}: `{what}` is not a number")))
}

fn as_dist(v: &Value, what: &str, file: &str) -> Result<Option<f64>> {
    if v.is_null() {
        Ok(None)
    } else {
        as_f64(v, what, file).map(Some)
    }
}

pub fn parse_cover(text: &str, file: &str) -> Result<DagCover> {
    let v = parse_json(text, file)?;
    let graph_n = as_usize(field(&v, "graph_n", file)?, "graph_n", file)?;
    let t = as_f64(field(&v, "t", file)?, "t", file)?;
    let steiner = field(&v, "steiner", file)?
        .as_bool()
        .ok_or_else(|| Error::structural(format!("{file}: `steiner` is not a boolean")))?;
    let provenance: Provenance = match v.get("provenance") {
        Some(p) => serde_json::from_value(p.clone()).map_err(|e| Error::structural(format!("{file}: provenance: {e}")))?,
        None => Provenance::default(),
    };
    let mut dags = Vec::new();
    for (i, d) in as_array(field(&v, "dags", file)?, "dags", file)?.iter().enumerate() {
        let ctx = |e: Error| Error::structural(format!("{file}: dags[{i}]: {e}"));
        let order = as_array(field(d, "order", file)?, "order", file)?
            .iter()
            .map(|r| ref_from_json(r, i))
            .collect::<Result<Vec<_>>>()?;
        let steiner_ids = as_array(field(d, "steiner_vertices", file)?, "steiner_vertices", file)?
            .iter()
            .map(|r| ref_from_json(r, i))
            .collect::<Result<Vec<_>>>()?;
        let count = steiner_ids.len();
        let mut seen = vec![false; count];
        for r in &steiner_ids {
            match *r {
                VertexRef::Steiner(k) if k < count && !seen[k] => seen[k] = true,
                _ => return Err(ctx(Error::structural("Steiner vertices must be s:<dag>:0 .. s:<dag>:<count-1>"))),
            }
        }
        let edges = as_array(field(d, "edges", file)?, "edges", file)?
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([a, b, w]) => Ok((ref_from_json(a, i)?, ref_from_json(b, i)?, as_f64(w, "weight", file)?)),
                _ => Err(Error::structural(format!("{file}: dags[{i}]: edge {e} is not [tail, head, weight]"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut originals: Vec<usize> = order
            .iter()
            .filter_map(|r| match *r {
                VertexRef::Original(x) => Some(x),
                VertexRef::Steiner(_) => None,
            })
            .collect();
        originals.sort_unstable();
        dags.push(SteinerDag::new(graph_n, originals, count, edges, order).map_err(ctx)?);
    }
    DagCover::new(graph_n, t, steiner, dags, provenance).map_err(|e| Error::structural(format!("{file}: {e}")))
}

pub fn read_cover(path: &Path) -> Result<DagCover> {
    parse_cover(&read_text(path)?, &name(path))
}

/// Covering sets are `[path, portal, d(v, portal), d(portal, v)]` tuples.
pub fn path_cover_to_json(pc: &PathCover) -> Value {
    let covering: Vec<Value> = (0..pc.n())
        .map(|v| {
            let tuples: Vec<Value> = pc
                .paths_of(v)
                .iter()
                .zip(pc.covering_sets(v))
                .flat_map(|(&p, set)| set.iter().map(move |q| json!([p, q.vertex, q.to, q.from])))
                .collect();
            Value::Array(tuples)
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "eps": pc.eps(),
        "paths": pc.paths().iter().map(|p| p.vertices().to_vec()).collect::<Vec<_>>(),
        "per_vertex": (0..pc.n()).map(|v| pc.paths_of(v).to_vec()).collect::<Vec<_>>(),
        "covering": covering,
    })
}

/// Needs the graph to recover path lengths.
pub fn parse_path_cover(text: &str, file: &str, g: &WeightedDigraph) -> Result<PathCover> {
    let v = parse_json(text, file)?;
    let eps = as_f64(field(&v, "eps", file)?, "eps", file)?;
    let paths = as_array(field(&v, "paths", file)?, "paths", file)?
        .iter()
        .map(|p| {
            let verts = as_array(p, "paths[]", file)?
                .iter()
                .map(|x| as_usize(x, "path vertex", file))
                .collect::<Result<Vec<_>>>()?;
            if let Some(&x) = verts.iter().find(|&&x| x >= g.n()) {
                return Err(Error::structural(format!("{file}: path vertex {x} outside the graph")));
            }
            DiPath::new(g, verts)
        })
        .collect::<Result<Vec<_>>>()?;
    let per_vertex = as_array(field(&v, "per_vertex", file)?, "per_vertex", file)?
        .iter()
        .map(|l| as_array(l, "per_vertex[]", file)?.iter().map(|x| as_usize(x, "path id", file)).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let raw = as_array(field(&v, "covering", file)?, "covering", file)?;
    if raw.len() != per_vertex.len() {
        return Err(Error::structural(format!("{file}: `covering` and `per_vertex` differ in length")));
    }
    let mut covering = Vec::with_capacity(raw.len());
    for (u, (tuples, ids)) in raw.iter().zip(&per_vertex).enumerate() {
        let mut sets: Vec<Vec<Portal>> = vec![Vec::new(); ids.len()];
        for t in as_array(tuples, "covering[]", file)? {
            let Some([p, q, to, from]) = t.as_array().map(Vec::as_slice) else {
                return Err(Error::structural(format!("{file}: covering tuple {t} is not [path, portal, to, from]")));
            };
            let p = as_usize(p, "path id", file)?;
            let q = as_usize(q, "portal", file)?;
            let k = ids
                .iter()
                .position(|&x| x == p)
                .ok_or_else(|| Error::structural(format!("{file}: vertex {u} has a portal on unlisted path {p}")))?;
            let path = paths.get(p).ok_or_else(|| Error::structural(format!("{file}: missing path {p}")))?;
            let pos = path
                .vertices()
                .iter()
                .position(|&x| x == q)
                .ok_or_else(|| Error::structural(format!("{file}: portal {q} is not on path {p}")))?;
            sets[k].push(Portal { pos, vertex: q, to: as_dist(to, "to", file)?, from: as_dist(from, "from", file)? });
        }
        covering.push(sets);
    }
    PathCover::new(eps, paths, per_vertex, covering)
}

pub fn read_path_cover(path: &Path, g: &WeightedDigraph) -> Result<PathCover> {
    parse_path_cover(&read_text(path)?, &name(path), g)
}

pub fn certificate_to_json(cert: &CoverCertificate) -> Value {
    let dags: Vec<Value> = cert
        .dags
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "edges": c.edges,
                "steiner_vertices": c.steiner_vertices,
                "acyclic": c.acyclic(),
                "cycle": c.cycle.as_ref().map(|cy| cy.iter().map(|&r| ref_to_json(i, r)).collect::<Vec<_>>()),
                "order_violation": c.order_violation.map(|(a, b)| json!([ref_to_json(i, a), ref_to_json(i, b)])),
            })
        })
        .collect();
    json!({
        "format": FORMAT_VERSION,
        "passed": cert.passed(),
        "acyclic": cert.acyclic,
        "order_consistent": cert.order_consistent,
        "dominating": serde_json::to_value(&cert.dominating).expect("report serializes"),
        "stretch": serde_json::to_value(&cert.stretch).expect("report serializes"),
        "extra_edges": cert.extra_edges,
        "steiner_vertices": cert.steiner_vertices,
        "dags": dags,
    })
}

/// Graphviz rendering of dag `index`, Steiner vertices drawn as points.
pub fn dag_to_dot(dag: &SteinerDag, index: usize) -> String {
    let label = |r: VertexRef| match r {
        VertexRef::Original(v) => format!("\"{v}\""),
        VertexRef::Steiner(k) => format!("\"s:{index}:{k}\""),
    };
    let mut s = format!("digraph D{index} {{\n  rankdir=LR;\n");
    for &r in dag.order() {
        let shape = if matches!(r, VertexRef::Steiner(_)) { "point" } else { "circle" };
        let _ = writeln!(s, "  {} [shape={shape}];", label(r));
    }
    for &(a, b, w) in dag.edges() {
        let _ = writeln!(s, "  {} -> {} [label=\"{w}\"];", label(a), label(b));
    }
    s.push_str("}\n");
    s
}
