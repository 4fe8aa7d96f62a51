//! Command-line driver: solving, preprocessing, decomposition, duality and
//! bundle analyses, SVG rendering, and instance generation.
//!
//! Exit codes: 0 success (an infeasible instance is a valid answer), 2 usage
//! or parse errors, 3 size/search budgets exceeded, 4 internal contradiction
//! diagnostics (e.g. a duality gap or a failed verification).

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use pdp_core::bundles::{
    bundle_profile, bundle_word, find_spirals, recognize_bundles, spiral_decompose, BundleSet,
};
use pdp_core::decomposition::{decompose, Component, ComponentKind, Decomposition, DecompError};
use pdp_core::generate::{generate, Profile};
use pdp_core::irrelevant::{apply_irrelevant_rule, log_to_json, IrrelevantError};
use pdp_core::rings::{cycles_or_curve, join_or_noose, DualityOutcome, Ring, RingError};
use pdp_core::solver::{solve_exact, Solution, SolverError};
use pdp_core::{EmbeddedDigraph, FaceId, VertexId};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pdp", about = "planar disjoint-paths toolkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve the instance exactly and print the solution or "infeasible".
    Solve(GraphArg),
    /// Apply the irrelevant-vertex rule and print the reduced instance.
    Preprocess {
        #[command(flatten)]
        graph: GraphArg,
        /// isolation depth the rule requires
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// check equisolvability of every deletion with the exact solver
        #[arg(long)]
        verify: bool,
    },
    /// Find concentric cycles or a branch decomposition.
    Decompose {
        #[command(flatten)]
        graph: GraphArg,
        /// number of terminal-free alternating concentric cycles to look for
        #[arg(long, default_value_t = 0)]
        r: usize,
    },
    /// Run a duality or bundle analysis.
    Analyze {
        #[command(flatten)]
        graph: GraphArg,
        /// duality dichotomy: "cycles" (cycles-or-curve) or "join"
        /// (join-or-noose), between the outer face and the deepest face
        #[arg(long)]
        duality: Option<String>,
        /// parameter r of the chosen dichotomy
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// report the bundle structure over weak components
        #[arg(long)]
        bundles: bool,
    },
    /// Print bundle words, profiles, and spiral decompositions of the
    /// canonical solution.
    BundleWords(GraphArg),
    /// Render the embedding (and optionally the canonical solution) as SVG.
    Render {
        #[command(flatten)]
        graph: GraphArg,
        /// output path
        #[arg(long, default_value = "out.svg")]
        out: PathBuf,
        /// overlay the canonical exact solution
        #[arg(long)]
        solution: bool,
    },
    /// Generate seeded random instances.
    Gen {
        /// ring | disc | planted | planted-unique
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// number of terminal pairs (where the profile has any)
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// output directory
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args)]
struct GraphArg {
    /// instance file (graph JSON)
    input: PathBuf,
}

/// Error wrapper carrying the exit code policy.
enum CmdError {
    Usage(anyhow::Error),
    Budget(anyhow::Error),
    Contradiction(anyhow::Error),
}

type CmdResult = Result<(), CmdError>;

impl From<SolverError> for CmdError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::SizeBudget(_) => CmdError::Budget(anyhow!("{e}")),
            _ => CmdError::Contradiction(anyhow!("{e}")),
        }
    }
}

impl From<RingError> for CmdError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::SizeBudget(_) => CmdError::Budget(anyhow!("{e}")),
            RingError::Unsupported(_) => CmdError::Usage(anyhow!("{e}")),
            _ => CmdError::Contradiction(anyhow!("{e}")),
        }
    }
}

impl From<DecompError> for CmdError {
    fn from(e: DecompError) -> Self {
        match e {
            DecompError::SizeBudget(_) => CmdError::Budget(anyhow!("{e}")),
            DecompError::Unsupported(_) => CmdError::Usage(anyhow!("{e}")),
            _ => CmdError::Contradiction(anyhow!("{e}")),
        }
    }
}

impl From<IrrelevantError> for CmdError {
    fn from(e: IrrelevantError) -> Self {
        match &e {
            IrrelevantError::Solver(SolverError::SizeBudget(_)) => {
                CmdError::Budget(anyhow!("{e}"))
            }
            IrrelevantError::Ring(RingError::SizeBudget(_)) => CmdError::Budget(anyhow!("{e}")),
            _ => CmdError::Contradiction(anyhow!("{e}")),
        }
    }
}

fn load(arg: &GraphArg) -> Result<EmbeddedDigraph, CmdError> {
    let text = std::fs::read_to_string(&arg.input)
        .with_context(|| format!("reading {}", arg.input.display()))
        .map_err(CmdError::Usage)?;
    EmbeddedDigraph::from_json(&text, false).map_err(|e| CmdError::Usage(anyhow!("{e}")))
}

fn arc_names(g: &EmbeddedDigraph, arcs: &[pdp_core::ArcId]) -> Vec<String> {
    arcs.iter().map(|&a| g.arc_name(a).to_string()).collect()
}

fn solution_json(g: &EmbeddedDigraph, sol: &Option<Solution>) -> Value {
    match sol {
        None => json!({ "result": "infeasible" }),
        Some(s) => json!({
            "result": "feasible",
            "paths": s.paths.iter().map(|p| arc_names(g, p)).collect::<Vec<_>>(),
        }),
    }
}

fn cmd_solve(arg: &GraphArg) -> CmdResult {
    let g = load(arg)?;
    let sol = solve_exact(&g)?;
    println!("{}", serde_json::to_string_pretty(&solution_json(&g, &sol)).unwrap());
    Ok(())
}

fn cmd_preprocess(arg: &GraphArg, d: usize, verify: bool) -> CmdResult {
    let g = load(arg)?;
    let (reduced, log) = apply_irrelevant_rule(&g, d, verify)?;
    let out = json!({
        "removed": log.len(),
        "log": log_to_json(&log),
        "graph": serde_json::from_str::<Value>(&reduced.to_json()).unwrap(),
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn cmd_decompose(arg: &GraphArg, r: usize) -> CmdResult {
    let g = load(arg)?;
    let out = match decompose(&g, 1, 2, r)? {
        pdp_core::decomposition::DecomposeOutcome::Cycles(fam) => json!({
            "outcome": "cycles",
            "cycles": fam.cycles.iter().map(|c| arc_names(&g, c)).collect::<Vec<_>>(),
        }),
        pdp_core::decomposition::DecomposeOutcome::Branches(branches) => json!({
            "outcome": "branches",
            "count": branches.len(),
            "branches": branches
                .iter()
                .map(|b| {
                    json!({
                        "components": b.decomposition.components.len(),
                        "graph": serde_json::from_str::<Value>(&b.graph.to_json()).unwrap(),
                    })
                })
                .collect::<Vec<_>>(),
        }),
    };
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

/// The bounded face farthest from the outer face in the dual: the hole of a
/// ring-shaped instance.
fn deepest_face(g: &EmbeddedDigraph) -> FaceId {
    let outer = g.outer_face();
    let mut dist: BTreeMap<FaceId, usize> = BTreeMap::new();
    dist.insert(outer, 0);
    let mut queue = std::collections::VecDeque::from([outer]);
    while let Some(f) = queue.pop_front() {
        let d0 = dist[&f];
        for a in g.face_arcs(f) {
            for nf in [g.left_face(a), g.right_face(a)] {
                dist.entry(nf).or_insert_with(|| {
                    queue.push_back(nf);
                    d0 + 1
                });
            }
        }
    }
    dist.into_iter().max_by_key(|&(f, d)| (d, std::cmp::Reverse(f.0))).map(|(f, _)| f).unwrap()
}

/// Directed boundary cycle of a face, if its primary walk is one.
fn face_cycle(g: &EmbeddedDigraph, f: FaceId) -> Result<Vec<pdp_core::ArcId>, CmdError> {
    let walk = &g.faces()[f.0 as usize].walks[0];
    let arcs: Vec<_> = walk.iter().map(|d| d.arc).collect();
    let mut at = g.head(arcs[arcs.len() - 1]);
    for &a in &arcs {
        if g.tail(a) != at {
            return Err(CmdError::Contradiction(anyhow!(
                "face {} is not bounded by a directed cycle",
                f.0
            )));
        }
        at = g.head(a);
    }
    Ok(arcs)
}

/// Weak components over arcs between non-terminal vertices; terminals stay
/// singleton components.  This is the trivial all-disc decomposition the
/// bundle analyses run on when no richer one is supplied.
fn trivial_decomposition(g: &EmbeddedDigraph) -> Decomposition {
    let n = g.vertex_count();
    let mut terminal = vec![false; n];
    for &(s, t) in g.terminals() {
        terminal[s.0 as usize] = true;
        terminal[t.0 as usize] = true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
            r
        } else {
            x
        }
    }
    for a in 0..g.arc_count() {
        let a = pdp_core::ArcId(a as u32);
        let (t, h) = (g.tail(a).0 as usize, g.head(a).0 as usize);
        if terminal[t] || terminal[h] {
            continue;
        }
        let (x, y) = (find(&mut parent, t), find(&mut parent, h));
        if x != y {
            parent[x] = y;
        }
    }
    let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for v in 0..n {
        groups.entry(find(&mut parent, v)).or_default().push(VertexId(v as u32));
    }
    let components = groups
        .into_values()
        .map(|vs| Component {
            kind: ComponentKind::Disc,
            vertices: vs.into_iter().collect(),
            f_in: None,
        })
        .collect();
    Decomposition { components, isolation: BTreeMap::new() }
}

fn bundles_json(g: &EmbeddedDigraph, bs: &BundleSet) -> Value {
    json!(bs
        .bundles
        .iter()
        .map(|b| {
            json!({
                "arcs": arc_names(g, &b.arcs),
                "from": b.from,
                "to": b.to,
                "level": format!("{:?}", b.level),
                "cyclic": b.cyclic,
            })
        })
        .collect::<Vec<_>>())
}

fn cmd_analyze(arg: &GraphArg, duality: Option<String>, r: usize, bundles: bool) -> CmdResult {
    let g = load(arg)?;
    let mut report = serde_json::Map::new();
    if let Some(kind) = duality {
        let f_in = deepest_face(&g);
        let f_out = g.outer_face();
        let outcome = match kind.as_str() {
            "cycles" => cycles_or_curve(&g, f_in, f_out, r)?,
            "join" => {
                let ring =
                    Ring { inner: face_cycle(&g, f_in)?, outer: face_cycle(&g, f_out)? };
                join_or_noose(&g, &ring, r)?
            }
            other => {
                return Err(CmdError::Usage(anyhow!("unknown duality analysis '{other}'")))
            }
        };
        let value = match outcome {
            DualityOutcome::Cycles(fam) => json!({
                "branch": "cycles",
                "cycles": fam.cycles.iter().map(|c| arc_names(&g, c)).collect::<Vec<_>>(),
            }),
            DualityOutcome::Curve(c) => json!({
                "branch": "curve",
                "curve": serde_json::from_str::<Value>(&pdp_core::curves::curve_to_json(&g, &c))
                    .unwrap(),
            }),
            DualityOutcome::Noose(c) => json!({
                "branch": "noose",
                "curve": serde_json::from_str::<Value>(&pdp_core::curves::curve_to_json(&g, &c))
                    .unwrap(),
            }),
            DualityOutcome::Join(j) => json!({
                "branch": "join",
                "paths": j.paths.iter().map(|p| arc_names(&g, p)).collect::<Vec<_>>(),
                "dirs": j.dirs.iter().map(|d| format!("{d:?}")).collect::<Vec<_>>(),
            }),
        };
        report.insert("duality".into(), value);
    }
    if bundles {
        let dc = trivial_decomposition(&g);
        let bs = recognize_bundles(&g, &dc)
            .map_err(|e| CmdError::Contradiction(anyhow!("{e}")))?;
        report.insert("bundles".into(), bundles_json(&g, &bs));
    }
    if report.is_empty() {
        return Err(CmdError::Usage(anyhow!("analyze needs --duality or --bundles")));
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(report)).unwrap());
    Ok(())
}

fn cmd_bundle_words(arg: &GraphArg) -> CmdResult {
    let g = load(arg)?;
    let dc = trivial_decomposition(&g);
    let bs =
        recognize_bundles(&g, &dc).map_err(|e| CmdError::Contradiction(anyhow!("{e}")))?;
    let sol = solve_exact(&g)?;
    let mut out = serde_json::Map::new();
    out.insert("bundles".into(), bundles_json(&g, &bs));
    match &sol {
        None => {
            out.insert("result".into(), json!("infeasible"));
        }
        Some(s) => {
            out.insert("result".into(), json!("feasible"));
            let words: Vec<Value> = s
                .paths
                .iter()
                .map(|p| {
                    let w = bundle_word(&bs, p);
                    let dec = spiral_decompose(&w)
                        .map(|d| {
                            json!(d
                                .terms
                                .iter()
                                .map(|(blk, rep)| json!({ "block": blk, "power": rep }))
                                .collect::<Vec<_>>())
                        })
                        .unwrap_or(Value::Null);
                    json!({
                        "word": w,
                        "spirals": find_spirals(&w),
                        "spiral_decomposition": dec,
                    })
                })
                .collect();
            out.insert("words".into(), json!(words));
            let profiles: Vec<Value> = (0..bs.len())
                .map(|b| json!(bundle_profile(&bs, b, s)))
                .collect();
            out.insert("profiles".into(), json!(profiles));
        }
    }
    println!("{}", serde_json::to_string_pretty(&Value::Object(out)).unwrap());
    Ok(())
}

// ----- rendering -----

/// Tutte-style barycentric layout: outer-face vertices pinned on a regular
/// polygon, interior vertices iterated to the average of their neighbours.
fn layout(g: &EmbeddedDigraph) -> Result<Vec<(f64, f64)>, CmdError> {
    let n = g.vertex_count();
    let hull = g.face_vertices(g.outer_face());
    if hull.len() < 3 {
        return Err(CmdError::Contradiction(anyhow!(
            "LayoutDegenerate: outer face has {} vertices",
            hull.len()
        )));
    }
    let mut pos = vec![(0.0f64, 0.0f64); n];
    let mut pinned = vec![false; n];
    for (i, &v) in hull.iter().enumerate() {
        let ang = TAU * i as f64 / hull.len() as f64;
        pos[v.0 as usize] = (ang.cos(), ang.sin());
        pinned[v.0 as usize] = true;
    }
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in 0..g.arc_count() {
        let a = pdp_core::ArcId(a as u32);
        let (t, h) = (g.tail(a).0 as usize, g.head(a).0 as usize);
        nbrs[t].push(h);
        nbrs[h].push(t);
    }
    for _ in 0..400 {
        for v in 0..n {
            if pinned[v] || nbrs[v].is_empty() {
                continue;
            }
            let (mut x, mut y) = (0.0, 0.0);
            for &u in &nbrs[v] {
                x += pos[u].0;
                y += pos[u].1;
            }
            let m = nbrs[v].len() as f64;
            pos[v] = (x / m, y / m);
        }
    }
    Ok(pos)
}

use std::f64::consts::TAU;

fn cmd_render(arg: &GraphArg, out: &PathBuf, with_solution: bool) -> CmdResult {
    let g = load(arg)?;
    let pos = layout(&g)?;
    let sol = if with_solution { solve_exact(&g)? } else { None };
    let scale = 220.0;
    let pt = |v: VertexId| {
        let (x, y) = pos[v.0 as usize];
        (250.0 + scale * x, 250.0 - scale * y)
    };
    let mut svg = String::new();
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" \
         viewBox=\"0 0 500 500\">\n<defs><marker id=\"ah\" viewBox=\"0 0 10 10\" \
         refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\">\
         <path d=\"M0,0 L10,5 L0,10 z\" fill=\"#555\"/></marker></defs>\n",
    );
    for a in 0..g.arc_count() {
        let a = pdp_core::ArcId(a as u32);
        let (x1, y1) = pt(g.tail(a));
        let (x2, y2) = pt(g.head(a));
        svg.push_str(&format!(
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" \
             stroke=\"#555\" stroke-width=\"1.2\" marker-end=\"url(#ah)\"/>\n"
        ));
    }
    if let Some(s) = &sol {
        let colors = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd"];
        for (i, p) in s.paths.iter().enumerate() {
            let color = colors[i % colors.len()];
            for &a in p {
                let (x1, y1) = pt(g.tail(a));
                let (x2, y2) = pt(g.head(a));
                svg.push_str(&format!(
                    "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" \
                     stroke=\"{color}\" stroke-width=\"3\" opacity=\"0.6\"/>\n"
                ));
            }
        }
    }
    for v in 0..g.vertex_count() {
        let vid = VertexId(v as u32);
        let (x, y) = pt(vid);
        svg.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3.5\" fill=\"#222\"/>\n\
             <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"9\" fill=\"#333\">{}</text>\n",
            x + 5.0,
            y - 5.0,
            g.vertex_name(vid)
        ));
    }
    svg.push_str("</svg>\n");
    std::fs::write(out, svg)
        .with_context(|| format!("writing {}", out.display()))
        .map_err(CmdError::Usage)?;
    println!("{}", json!({ "rendered": out.display().to_string() }));
    Ok(())
}

fn cmd_gen(profile: &str, seed: u64, k: usize, count: u64, out_dir: &PathBuf) -> CmdResult {
    let profile: Profile = profile.parse().map_err(|e: String| CmdError::Usage(anyhow!(e)))?;
    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .map_err(CmdError::Usage)?;
    let mut files = Vec::new();
    for i in 0..count {
        let g = generate(profile, seed + i, k)
            .map_err(|e| CmdError::Contradiction(anyhow!("{e}")))?;
        let name = format!("{profile:?}").to_lowercase();
        let path = out_dir.join(format!("{name}_{:04}.json", seed + i));
        std::fs::write(&path, g.to_json())
            .with_context(|| format!("writing {}", path.display()))
            .map_err(CmdError::Usage)?;
        files.push(path.display().to_string());
    }
    println!("{}", serde_json::to_string_pretty(&json!({ "written": files })).unwrap());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve(arg) => cmd_solve(&arg),
        Cmd::Preprocess { graph, d, verify } => cmd_preprocess(&graph, d, verify),
        Cmd::Decompose { graph, r } => cmd_decompose(&graph, r),
        Cmd::Analyze { graph, duality, r, bundles } => cmd_analyze(&graph, duality, r, bundles),
        Cmd::BundleWords(arg) => cmd_bundle_words(&arg),
        Cmd::Render { graph, out, solution } => cmd_render(&graph, &out, solution),
        Cmd::Gen { profile, seed, k, count, out_dir } => {
            cmd_gen(&profile, seed, k, count, &out_dir)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CmdError::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(CmdError::Budget(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
        Err(CmdError::Contradiction(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(4)
        }
    }
}
