use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dagcover::config::Budget;
use dagcover::cover::{count_extra_edges, DagCover};
use dagcover::decomposition::{heuristic_tree_decomposition, validate_decomposition, TreeDecomposition};
use dagcover::generate::{self, KTreeParams};
use dagcover::graph::{all_pairs_distances, aspect_ratio};
use dagcover::io;
use dagcover::planar::path_cover::verify_path_cover_contract;
use dagcover::planar::{build_planar_cover, validate_embedding};
use dagcover::star::{analyze_star_cover, star_lower_bound};
use dagcover::tw_nonsteiner::{build_tw_nonsteiner_cover, build_tw_nonsteiner_cover_with, NonSteinerOptions};
use dagcover::tw_steiner::tw_steiner_cover;
use dagcover::{Error, Exec, WeightedDigraph};

#[derive(Parser)]
#[command(name = "dagcover", version, about = "Build and certify DAG covers of weighted digraphs")]
struct Cli {
    /// Worker threads for the parallel loops (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Min-fill tree decomposition of a graph, in PACE `.td` format.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a cover; writes cover JSON.
    #[command(subcommand)]
    Cover(CoverKind),
    /// Certify a cover, or check a path cover's contract.
    Verify(VerifyArgs),
    #[command(subcommand)]
    Bound(BoundKind),
    /// Size statistics for a graph and, optionally, a cover.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        embedding: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GenArgs {
    /// star, ktree, grid or dicycle.
    kind: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    /// Probability of keeping each k-tree skeleton edge.
    #[arg(long, default_value_t = 0.8)]
    keep: f64,
    #[arg(long, default_value_t = 10)]
    max_weight: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Graph output (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Args)]
struct CoverCommon {
    #[arg(long)]
    graph: PathBuf,
    /// Cover JSON output (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for one Graphviz file per dag.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Recorded in the cover's provenance.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum CoverKind {
    TwSteiner {
        #[command(flatten)]
        common: CoverCommon,
        /// PACE decomposition; min-fill when omitted.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Writes `<prefix>.0.td` and `<prefix>.1.td` path decompositions.
        #[arg(long)]
        pd_prefix: Option<PathBuf>,
    },
    TwNonsteiner {
        #[command(flatten)]
        common: CoverCommon,
        #[arg(long)]
        td: Option<PathBuf>,
        /// Skip the shortcut edges that make the stretch exact.
        #[arg(long)]
        no_patch: bool,
    },
    Planar {
        #[command(flatten)]
        common: CoverCommon,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        /// Path-cover JSON output.
        #[arg(long)]
        path_cover: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, required_unless_present = "path_cover")]
    cover: Option<PathBuf>,
    #[arg(long)]
    path_cover: Option<PathBuf>,
    /// Stretch target; defaults to the cover's own `t`.
    #[arg(long)]
    t: Option<f64>,
    /// Report output (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BoundKind {
    /// Fewest dags a stretch-below-2 non-Steiner cover of the n-vertex star
    /// with mu extra edges can have.
    StarLb {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        mu: usize,
        /// Also analyse this cover of the star.
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn need<T>(x: Option<T>, flag: &str, kind: &str) -> Result<T, Error> {
    x.ok_or_else(|| Error::Input(format!("`gen {kind}` needs --{flag}")))
}

fn gen(a: GenArgs) -> Result<Outcome, Error> {
    let inst = match a.kind.as_str() {
        "star" => generate::star(need(a.n, "n", "star")?)?,
        "ktree" => {
            let p = KTreeParams {
                n: need(a.n, "n", "ktree")?,
                k: need(a.k, "k", "ktree")?,
                keep: a.keep,
                max_weight: a.max_weight,
            };
            generate::ktree(p, a.seed)?
        }
        "grid" => generate::grid(need(a.rows, "rows", "grid")?, need(a.cols, "cols", "grid")?, a.max_weight, a.seed)?,
        "dicycle" => generate::dicycle(need(a.n, "n", "dicycle")?, a.max_weight, a.seed)?,
        other => return Err(Error::Input(format!("unknown kind {other:?}; expected star, ktree, grid or dicycle"))),
    };
    emit(a.out.as_deref(), &io::format_graph(&inst.graph))?;
    if let Some(p) = &a.td {
        let td = inst.decomposition.as_ref().ok_or_else(|| Error::Input(format!("{} has no decomposition", a.kind)))?;
        std::fs::write(p, io::format_td(td, inst.graph.n()))?;
    }
    if let Some(p) = &a.embedding {
        let emb = inst.embedding.as_ref().ok_or_else(|| Error::Input(format!("{} has no embedding", a.kind)))?;
        std::fs::write(p, io::format_embedding(emb))?;
    }
    Ok(Outcome::Pass)
}

fn load_td(g: &WeightedDigraph, path: Option<&Path>) -> Result<TreeDecomposition, Error> {
    let Some(path) = path else {
        return Ok(heuristic_tree_decomposition(g));
    };
    let (n, td) = io::read_td(path)?;
    if n != g.n() {
        return Err(Error::Structural(format!("{}: decomposition is over {n} vertices, graph has {}", path.display(), g.n())));
    }
    if !validate_decomposition(g, &td)?.is_valid() {
        return Err(Error::Structural(format!("{}: not a tree decomposition of the graph", path.display())));
    }
    Ok(td)
}

fn finish_cover(mut cover: DagCover, common: &CoverCommon) -> Result<Outcome, Error> {
    cover.provenance.seed = common.seed;
    if let Some(dir) = &common.dot {
        std::fs::create_dir_all(dir)?;
        for (i, dag) in cover.dags().iter().enumerate() {
            std::fs::write(dir.join(format!("dag{i}.dot")), io::dag_to_dot(dag, i))?;
        }
    }
    emit(common.out.as_deref(), &io::format_cover(&cover))?;
    Ok(Outcome::Pass)
}

fn cover(kind: CoverKind) -> Result<Outcome, Error> {
    match kind {
        CoverKind::TwSteiner { common, td, pd_prefix } => {
            let g = io::read_graph(&common.graph)?;
            let td = load_td(&g, td.as_deref())?;
            let built = tw_steiner_cover(&g, &td)?;
            if let Some(prefix) = pd_prefix {
                for (i, (pd, dag)) in built.path_decompositions.iter().zip(built.cover.dags()).enumerate() {
                    let mut name = prefix.clone().into_os_string();
                    name.push(format!(".{i}.td"));
                    let total = g.n() + dag.steiner_count();
                    std::fs::write(PathBuf::from(name), io::format_td(&pd.to_tree_decomposition(), total))?;
                }
            }
            finish_cover(built.cover, &common)
        }
        CoverKind::TwNonsteiner { common, td, no_patch } => {
            let g = io::read_graph(&common.graph)?;
            let td = load_td(&g, td.as_deref())?;
            let built = if no_patch {
                build_tw_nonsteiner_cover_with(&g, &td, NonSteinerOptions { exactness_patch: false }, Exec::default())?
            } else {
                build_tw_nonsteiner_cover(&g, &td)?
            };
            finish_cover(built.cover, &common)
        }
        CoverKind::Planar { common, embedding, eps, path_cover } => {
            let g = io::read_graph(&common.graph)?;
            let emb = io::read_embedding(&embedding, g.n())?;
            let built = build_planar_cover(&g, &emb, eps)?;
            if let Some(p) = path_cover {
                std::fs::write(p, io::to_pretty(&io::path_cover_to_json(&built.path_cover)))?;
            }
            finish_cover(built.cover, &common)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<Outcome, Error> {
    let g = io::read_graph(&a.graph)?;
    let mut report = serde_json::Map::new();
    report.insert("format".into(), json!(io::FORMAT_VERSION));
    let mut passed = true;
    if let Some(path) = &a.cover {
        let cover = io::read_cover(path)?;
        let cover = match a.t {
            Some(t) => DagCover::new(cover.graph_n(), t, cover.is_steiner(), cover.dags().to_vec(), cover.provenance.clone())?,
            None => cover,
        };
        let cert = dagcover::certify(&g, &cover)?;
        passed &= cert.passed();
        report.insert("certificate".into(), io::certificate_to_json(&cert));
    }
    if let Some(path) = &a.path_cover {
        let pc = io::read_path_cover(path, &g)?;
        let d = all_pairs_distances(&g);
        let contract = verify_path_cover_contract(&d, &pc)?;
        let budget = Budget::from_env()?;
        let phi = aspect_ratio(&d).unwrap_or(1.0);
        let paths_ok = pc.max_paths_per_vertex() as f64 <= budget.paths_per_vertex(g.n(), phi);
        let portals_ok = pc.max_portals() as f64 <= budget.portals_per_path(pc.eps());
        passed &= contract.passed && paths_ok && portals_ok;
        report.insert(
            "path_cover".into(),
            json!({
                "contract": contract,
                "max_paths_per_vertex": pc.max_paths_per_vertex(),
                "paths_bound": budget.paths_per_vertex(g.n(), phi),
                "max_portals": pc.max_portals(),
                "portals_bound": budget.portals_per_path(pc.eps()),
                "sizes_within_bounds": paths_ok && portals_ok,
            }),
        );
    }
    report.insert("passed".into(), json!(passed));
    emit(a.out.as_deref(), &io::to_pretty(&Value::Object(report)))?;
    Ok(if passed { Outcome::Pass } else { Outcome::Fail })
}

fn bound(kind: BoundKind) -> Result<Outcome, Error> {
    let BoundKind::StarLb { n, mu, cover, t } = kind;
    if n < 2 {
        return Err(Error::Input(format!("a star needs at least 2 vertices, got {n}")));
    }
    let mut report = json!({ "format": io::FORMAT_VERSION, "n": n, "mu": mu, "bound": star_lower_bound(n, mu) });
    let mut outcome = Outcome::Pass;
    if let Some(path) = cover {
        let analysis = analyze_star_cover(n, &io::read_cover(&path)?, t)?;
        if !analysis.consistent {
            outcome = Outcome::Fail;
        }
        report["analysis"] = serde_json::to_value(&analysis)?;
    }
    print!("{}", io::to_pretty(&report));
    Ok(outcome)
}

fn stats(graph: &Path, cover: Option<&Path>, td: Option<&Path>, embedding: Option<&Path>) -> Result<Outcome, Error> {
    let g = io::read_graph(graph)?;
    let d = all_pairs_distances(&g);
    let mut report = json!({
        "format": io::FORMAT_VERSION,
        "n": g.n(),
        "m": g.edge_count(),
        "reachable_pairs": d.reachable_pairs().count(),
        "aspect_ratio": aspect_ratio(&d).ok(),
    });
    if let Some(p) = td {
        let td = load_td(&g, Some(p))?;
        report["td_width"] = json!(td.width());
    }
    if let Some(p) = embedding {
        let r = validate_embedding(&g, &io::read_embedding(p, g.n())?)?;
        report["embedding"] = json!({ "planar": r.passed(), "faces": r.faces() });
    }
    if let Some(p) = cover {
        let c = io::read_cover(p)?;
        report["cover"] = json!({
            "t": c.t(),
            "dags": c.dags().len(),
            "edges": c.dags().iter().map(|d| d.edge_count()).collect::<Vec<_>>(),
            "steiner_vertices": c.steiner_vertices(),
            "extra_edges": count_extra_edges(&g, &c),
            "provenance": serde_json::to_value(&c.provenance)?,
        });
    }
    print!("{}", io::to_pretty(&report));
    Ok(Outcome::Pass)
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::Input(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Decompose { graph, out } => {
            let g = io::read_graph(&graph)?;
            emit(out.as_deref(), &io::format_td(&heuristic_tree_decomposition(&g), g.n()))?;
            Ok(Outcome::Pass)
        }
        Command::Cover(kind) => cover(kind),
        Command::Verify(a) => verify(a),
        Command::Bound(kind) => bound(kind),
        Command::Stats { graph, cover, td, embedding } => stats(&graph, cover.as_deref(), td.as_deref(), embedding.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("dagcover: {e}");
            ExitCode::from(2)
        }
    }
}
