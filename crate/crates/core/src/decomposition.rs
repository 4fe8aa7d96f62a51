//! Disc/ring decompositions: component kinds and their face conditions,
//! face alternation, decomposition validation, region connectification, and
//! a branching decomposition procedure whose branch disjunction preserves
//! feasibility exactly.

use crate::curves::{alternation, AlternationSeq, Crossing, Curve, SignSet};
use crate::embed::{ArcId, ArcRec, Dart, EmbeddedDigraph, End, FaceId, GraphError, VertexId};
use crate::irrelevant::{find_concentric_system, IrrelevantError};
use crate::rings::{CycleFamily, RingError};
use thiserror::Error;

use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Error)]
pub enum DecompError {
    #[error("instance exceeds search budget ({0})")]
    SizeBudget(String),
    #[error("region border passes through a vertex")]
    BorderThroughVertex,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Irrelevant(#[from] IrrelevantError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComponentKind {
    Disc,
    Ring,
}

/// A weakly connected induced subgraph of the decomposition.  A disc must
/// have all its incident arcs in its outer face; a ring additionally owns a
/// designated inner face that may carry incident arcs.
#[derive(Clone, Debug)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: BTreeSet<VertexId>,
    /// the designated inner face, as a face id of the component's own
    /// sub-embedding (rings only)
    pub f_in: Option<FaceId>,
}

/// Isolation bookkeeping for one ring component: the isolating disc
/// component, its signed level (±1..=Λ), and its d nested alternating
/// cycles (innermost first, arcs of the isolating disc).
#[derive(Clone, Debug)]
pub struct IsolationRecord {
    pub disc: usize,
    pub level: i32,
    pub cycles: CycleFamily,
}

#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub components: Vec<Component>,
    /// ring component index → its isolation records
    pub isolation: BTreeMap<usize, Vec<IsolationRecord>>,
}

/// Arcs of `g` incident to the component but owned by neither it nor the
/// rest: E(G) minus E(C) minus E(G[V∖V(C)]).  The component's own arc set
/// may be smaller than the induced one (a chord with both endpoints inside
/// but excluded from E(C) counts as incident).
pub fn incident_arcs(
    g: &EmbeddedDigraph,
    vertices: &BTreeSet<VertexId>,
    owned: &BTreeSet<ArcId>,
) -> BTreeSet<ArcId> {
    g.arc_ids()
        .filter(|&a| {
            let (t, h) = (g.tail(a), g.head(a));
            (vertices.contains(&t) || vertices.contains(&h)) && !owned.contains(&a)
        })
        .collect()
}

pub fn induced_arcs(g: &EmbeddedDigraph, vertices: &BTreeSet<VertexId>) -> BTreeSet<ArcId> {
    g.arc_ids()
        .filter(|&a| vertices.contains(&g.tail(a)) && vertices.contains(&g.head(a)))
        .collect()
}

/// The component's own embedding (the induced subgraph) plus the maps from
/// `g` ids into it.
pub struct SubEmbedding {
    pub graph: EmbeddedDigraph,
    pub vertex_map: Vec<Option<VertexId>>,
    pub arc_map: Vec<Option<ArcId>>,
}

pub fn sub_embedding(
    g: &EmbeddedDigraph,
    vertices: &BTreeSet<VertexId>,
) -> Result<SubEmbedding, DecompError> {
    let dead: BTreeSet<VertexId> = g.vertices().filter(|v| !vertices.contains(v)).collect();
    let (graph, map) = g.delete(&dead, &BTreeSet::new())?;
    Ok(SubEmbedding { graph, vertex_map: map.vertex_map, arc_map: map.arc_map })
}

/// The face of the component in which the incident arc `a` is drawn at its
/// endpoint `v` (a component vertex): scan counter-clockwise from the arc's
/// dart at `v` to the nearest component dart; the arc lives in the wedge
/// clockwise after it.  A component vertex without component arcs sees all
/// its incident arcs in the sub-embedding's single (outer) face.
pub fn incident_arc_face(
    g: &EmbeddedDigraph,
    sub: &SubEmbedding,
    a: ArcId,
    v: VertexId,
) -> FaceId {
    let rot = g.rotation_of(v);
    let vs = sub.vertex_map[v.0 as usize].expect("component vertex");
    if sub.graph.rotation_of(vs).is_empty() {
        return sub.graph.outer_face();
    }
    let here = rot
        .iter()
        .position(|d| d.arc == a)
        .expect("incident arc at its endpoint");
    for off in 1..=rot.len() {
        let d = rot[(here + rot.len() - off) % rot.len()];
        if let Some(sa) = sub.arc_map[d.arc.0 as usize] {
            return sub.graph.wedge_face(Dart { arc: sa, end: d.end });
        }
    }
    unreachable!("component vertex with arcs has a component dart")
}

/// Cyclic alternation of the ±1 sequence of incident arcs around face `f`
/// of the component (+1 leaving the component, −1 entering), read along the
/// face's boundary walks with ties at a corner taken in rotation order.
pub fn face_alternation(
    g: &EmbeddedDigraph,
    sub: &SubEmbedding,
    vertices: &BTreeSet<VertexId>,
    f: FaceId,
) -> u32 {
    let inc = incident_arcs(g, vertices, &induced_arcs(g, vertices));
    let mut seq: Vec<SignSet> = Vec::new();
    let mut push = |d: Dart, at_component_vertex: bool| {
        if !at_component_vertex || !inc.contains(&d.arc) {
            return;
        }
        seq.push(if d.end == End::Tail { SignSet::PLUS } else { SignSet::MINUS });
    };
    // map back: sub arc -> g arc
    let mut back = vec![None; sub.graph.arc_count()];
    for (ga, sa) in sub.arc_map.iter().enumerate() {
        if let Some(sa) = sa {
            back[sa.0 as usize] = Some(ArcId(ga as u32));
        }
    }
    let mut vback: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (gv, sv) in sub.vertex_map.iter().enumerate() {
        if let Some(sv) = sv {
            vback.insert(*sv, VertexId(gv as u32));
        }
    }
    let face = sub.graph.face(f);
    if face.walks.is_empty() {
        // a bare vertex: its whole rotation lies in this face
        for (&sv, &gv) in &vback {
            if sub.graph.rotation_of(sv).is_empty() {
                for &d in g.rotation_of(gv) {
                    push(d, true);
                }
            }
        }
    }
    for walk in &face.walks {
        for p in 0..walk.len() {
            // corner before token p, at the tail vertex of the traversal
            let prev = walk[(p + walk.len() - 1) % walk.len()].opposite();
            let cur = walk[p];
            let gv = vback[&sub.graph.dart_vertex(cur)];
            let rot = g.rotation_of(gv);
            let gprev = Dart { arc: back[prev.arc.0 as usize].unwrap(), end: prev.end };
            let gcur = Dart { arc: back[cur.arc.0 as usize].unwrap(), end: cur.end };
            let start = rot.iter().position(|&d| d == gprev).unwrap();
            let stop = rot.iter().position(|&d| d == gcur).unwrap();
            let mut q = (start + 1) % rot.len();
            while q != stop {
                push(rot[q], true);
                q = (q + 1) % rot.len();
            }
        }
    }
    alternation(&AlternationSeq { entries: seq, cyclic: true })
}

/// One reported defect of a decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotPartition(String),
    TerminalNotSingleton(String),
    NotConnected(usize),
    DiscArcOutsideOuterFace { component: usize, arc: String },
    RingArcOutsideDesignatedFaces { component: usize, arc: String },
    RingWithoutInnerFace(usize),
    IsolationMissing { component: usize, detail: String },
    IsolationShared { disc: usize },
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// max face alternation observed over all components
    pub max_alternation: u32,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the partition, terminal singletons, per-kind face conditions, and
/// ring isolation layering (2Λ isolating discs with levels ±1..=Λ carrying d
/// nested alternating cycles each, no disc isolating two rings).
pub fn validate_decomposition(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    lambda: usize,
    d: usize,
) -> Result<ValidationReport, DecompError> {
    let mut report = ValidationReport::default();
    // partition
    let mut owner: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (i, c) in decomp.components.iter().enumerate() {
        for &v in &c.vertices {
            if owner.insert(v, i).is_some() {
                report
                    .violations
                    .push(Violation::NotPartition(g.vertex_name(v).to_string()));
            }
        }
    }
    for v in g.vertices() {
        if !owner.contains_key(&v) {
            report
                .violations
                .push(Violation::NotPartition(g.vertex_name(v).to_string()));
        }
    }
    // terminal singletons
    for &(s, t) in g.terminals() {
        for v in [s, t] {
            let singleton = owner
                .get(&v)
                .map(|&i| decomp.components[i].vertices.len() == 1)
                .unwrap_or(false);
            if !singleton {
                report
                    .violations
                    .push(Violation::TerminalNotSingleton(g.vertex_name(v).to_string()));
            }
        }
    }
    // per-component conditions
    for (i, c) in decomp.components.iter().enumerate() {
        let sub = sub_embedding(g, &c.vertices)?;
        if !is_weakly_connected(&sub.graph) {
            report.violations.push(Violation::NotConnected(i));
            continue;
        }
        let allowed: BTreeSet<FaceId> = match c.kind {
            ComponentKind::Disc => [sub.graph.outer_face()].into_iter().collect(),
            ComponentKind::Ring => match c.f_in {
                Some(f) => [sub.graph.outer_face(), f].into_iter().collect(),
                None => {
                    report.violations.push(Violation::RingWithoutInnerFace(i));
                    continue;
                }
            },
        };
        for a in incident_arcs(g, &c.vertices, &induced_arcs(g, &c.vertices)) {
            for v in [g.tail(a), g.head(a)] {
                if !c.vertices.contains(&v) {
                    continue;
                }
                let f = incident_arc_face(g, &sub, a, v);
                if !allowed.contains(&f) {
                    report.violations.push(match c.kind {
                        ComponentKind::Disc => Violation::DiscArcOutsideOuterFace {
                            component: i,
                            arc: g.arc_name(a).to_string(),
                        },
                        ComponentKind::Ring => Violation::RingArcOutsideDesignatedFaces {
                            component: i,
                            arc: g.arc_name(a).to_string(),
                        },
                    });
                }
            }
        }
        for f in sub.graph.face_ids() {
            report.max_alternation =
                report.max_alternation.max(face_alternation(g, &sub, &c.vertices, f));
        }
    }
    // ring isolation
    let mut used_discs: BTreeSet<usize> = BTreeSet::new();
    for (i, c) in decomp.components.iter().enumerate() {
        if c.kind != ComponentKind::Ring {
            continue;
        }
        let records = decomp.isolation.get(&i).cloned().unwrap_or_default();
        let levels: BTreeSet<i32> = records.iter().map(|r| r.level).collect();
        let expected: BTreeSet<i32> = (1..=lambda as i32).flat_map(|l| [l, -l]).collect();
        if levels != expected || records.len() != 2 * lambda {
            report.violations.push(Violation::IsolationMissing {
                component: i,
                detail: format!("levels {levels:?}, expected ±1..=±{lambda}"),
            });
            continue;
        }
        for rec in &records {
            if !used_discs.insert(rec.disc) {
                report.violations.push(Violation::IsolationShared { disc: rec.disc });
            }
            let host = &decomp.components[rec.disc];
            if host.kind != ComponentKind::Disc {
                report.violations.push(Violation::IsolationMissing {
                    component: i,
                    detail: format!("isolator {} is not a disc", rec.disc),
                });
                continue;
            }
            if let Some(v) = check_isolation_cycles(g, c, host, rec, d) {
                report.violations.push(Violation::IsolationMissing { component: i, detail: v });
            }
        }
    }
    Ok(report)
}

/// d nested alternating cycles inside the isolating disc, with the ring
/// uniformly on the side matching the record's level sign (positive levels
/// surround the ring, negative levels sit beyond its inner face).
fn check_isolation_cycles(
    g: &EmbeddedDigraph,
    ring: &Component,
    host: &Component,
    rec: &IsolationRecord,
    d: usize,
) -> Option<String> {
    if rec.cycles.cycles.len() != d {
        return Some(format!("{} cycles, expected {d}", rec.cycles.cycles.len()));
    }
    let host_arcs = induced_arcs(g, &host.vertices);
    let mut prev: Option<crate::embed::Enclosure> = None;
    for (j, cyc) in rec.cycles.cycles.iter().enumerate() {
        if cyc.iter().any(|a| !host_arcs.contains(a)) {
            return Some(format!("cycle {j} leaves the isolating disc"));
        }
        let enc = match g.enclosed(cyc) {
            Ok(e) => e,
            Err(e) => return Some(format!("cycle {j}: {e}")),
        };
        if let Some(p) = &prev {
            if !p.faces.is_subset(&enc.faces) {
                return Some(format!("cycle {j} not nested"));
            }
            if p.orientation == enc.orientation {
                return Some(format!("cycle {j} does not alternate"));
            }
        }
        let enclosed_ring: Vec<bool> = ring
            .vertices
            .iter()
            .map(|&v| g.encloses_vertex(&enc, cyc, v))
            .collect();
        let want_inside = rec.level > 0;
        if enclosed_ring.iter().any(|&b| b != want_inside) {
            return Some(format!(
                "cycle {j} does not keep the ring {}",
                if want_inside { "inside" } else { "outside" }
            ));
        }
        prev = Some(enc);
    }
    None
}

/// Subdivide every arc crossed by the closed region border and join the
/// subdivision points, in border order, by length-two paths ending in fresh
/// sinks drawn along the border.  Feasibility is unchanged: every added arc
/// enters a sink.
pub fn connectify(g: &EmbeddedDigraph, border: &Curve) -> Result<EmbeddedDigraph, DecompError> {
    if !border.closed {
        return Err(DecompError::Unsupported("region border must be closed".into()));
    }
    let mut crossed: Vec<(ArcId, FaceId, FaceId)> = Vec::new();
    for (i, cr) in border.crossings.iter().enumerate() {
        match cr {
            Crossing::Vertex(_) => return Err(DecompError::BorderThroughVertex),
            Crossing::Arc { arc, .. } => {
                crossed.push((*arc, border.faces[i], border.faces[i + 1]))
            }
        }
    }
    if crossed.is_empty() {
        return Ok(g.clone());
    }
    {
        let mut seen = BTreeSet::new();
        for &(a, ..) in &crossed {
            if !seen.insert(a) {
                return Err(DecompError::Unsupported(
                    "border crosses an arc more than once".into(),
                ));
            }
        }
    }
    // rebuild the arc table: untouched arcs first, then per crossing the two
    // halves, then the sink arcs
    let mut names: Vec<String> = g.vertices().map(|v| g.vertex_name(v).to_string()).collect();
    let crossed_set: BTreeSet<ArcId> = crossed.iter().map(|&(a, ..)| a).collect();
    let mut arcs: Vec<ArcRec> = Vec::new();
    let mut arc_map: BTreeMap<ArcId, ArcId> = BTreeMap::new(); // untouched only
    for a in g.arc_ids() {
        if !crossed_set.contains(&a) {
            arc_map.insert(a, ArcId(arcs.len() as u32));
            arcs.push(g.arc_rec(a).clone());
        }
    }
    // subdivision vertices and halves
    let mut halves: BTreeMap<ArcId, (ArcId, ArcId, VertexId)> = BTreeMap::new();
    for &(a, ..) in &crossed {
        if g.left_face(a) == g.right_face(a) {
            return Err(DecompError::Unsupported("border crosses a bridge arc".into()));
        }
        let x = VertexId(names.len() as u32);
        names.push(format!("{}__cut", g.arc_name(a)));
        let first = ArcId(arcs.len() as u32);
        arcs.push(ArcRec {
            name: format!("{}__t", g.arc_name(a)),
            tail: g.tail(a),
            head: x,
        });
        let second = ArcId(arcs.len() as u32);
        arcs.push(ArcRec {
            name: format!("{}__h", g.arc_name(a)),
            tail: x,
            head: g.head(a),
        });
        halves.insert(a, (first, second, x));
    }
    // sink connectors between consecutive subdivision points
    struct Connector {
        from_cross: usize,
        to_cross: usize,
        arc_from: ArcId,
        arc_to: ArcId,
        sink: VertexId,
    }
    let mut connectors: Vec<Connector> = Vec::new();
    for j in 0..crossed.len() - 1 {
        let sink = VertexId(names.len() as u32);
        names.push(format!("border_sink_{j}"));
        let arc_from = ArcId(arcs.len() as u32);
        arcs.push(ArcRec {
            name: format!("border_in_{j}"),
            tail: halves[&crossed[j].0].2,
            head: sink,
        });
        let arc_to = ArcId(arcs.len() as u32);
        arcs.push(ArcRec {
            name: format!("border_out_{j}"),
            tail: halves[&crossed[j + 1].0].2,
            head: sink,
        });
        connectors.push(Connector { from_cross: j, to_cross: j + 1, arc_from, arc_to, sink });
    }
    // rotations: original vertices keep their cyclic order with crossed
    // darts replaced by the matching half darts
    let remap_dart = |d: Dart| -> Dart {
        if let Some(&(first, second, _)) = halves.get(&d.arc) {
            match d.end {
                End::Tail => Dart { arc: first, end: End::Tail },
                End::Head => Dart { arc: second, end: End::Head },
            }
        } else {
            Dart { arc: arc_map[&d.arc], end: d.end }
        }
    };
    let mut rotation: Vec<Vec<Dart>> = g
        .vertices()
        .map(|v| g.rotation_of(v).iter().map(|&d| remap_dart(d)).collect())
        .collect();
    // subdivision vertices: clockwise [toward tail, left side, toward head,
    // right side]
    for (ci, &(a, _f_prev, f_next)) in crossed.iter().enumerate() {
        let (first, second, _x) = halves[&a];
        let mut left: Vec<Dart> = Vec::new();
        let mut right: Vec<Dart> = Vec::new();
        let mut place = |f: FaceId, d: Dart| {
            if f == g.left_face(a) {
                left.push(d);
            } else {
                right.push(d);
            }
        };
        for c in &connectors {
            if c.from_cross == ci {
                // runs through the face after this crossing
                place(f_next, Dart { arc: c.arc_from, end: End::Tail });
            }
            if c.to_cross == ci {
                // runs through the face before this crossing
                place(crossed[ci].1, Dart { arc: c.arc_to, end: End::Tail });
            }
        }
        let mut rot = vec![Dart { arc: first, end: End::Head }];
        rot.extend(left);
        rot.push(Dart { arc: second, end: End::Tail });
        rot.extend(right);
        rotation.push(rot);
    }
    for c in &connectors {
        rotation.push(vec![
            Dart { arc: c.arc_from, end: End::Head },
            Dart { arc: c.arc_to, end: End::Head },
        ]);
        let _ = c.sink;
    }
    let outer_token = {
        let t = g.face(g.outer_face()).walks[0][0];
        remap_dart(t)
    };
    let placements = g
        .placement_hints()
        .iter()
        .map(|&(a, b)| (remap_dart(a), remap_dart(b)))
        .collect();
    Ok(EmbeddedDigraph::build(
        names,
        arcs,
        rotation,
        Some(outer_token),
        placements,
        g.terminals().to_vec(),
        false,
    )?)
}

// ----- the branching decomposition procedure -----

pub struct DecompBranch {
    pub graph: EmbeddedDigraph,
    pub decomposition: Decomposition,
}

pub enum DecomposeOutcome {
    /// r terminal-free alternating concentric cycles exist
    Cycles(CycleFamily),
    /// branch list whose feasibility disjunction equals the input's
    Branches(Vec<DecompBranch>),
}

pub const BRANCH_BUDGET: usize = 20_000;

fn is_weakly_connected(g: &EmbeddedDigraph) -> bool {
    let Some(start) = g.vertices().next() else { return true };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(u) = stack.pop() {
        for d in g.rotation_of(u) {
            let w = if d.end == End::Tail { g.head(d.arc) } else { g.tail(d.arc) };
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == g.vertex_count()
}

/// Weakly connected pieces of the terminal-free rest, in canonical order.
fn terminal_free_pieces(g: &EmbeddedDigraph) -> Vec<BTreeSet<VertexId>> {
    let terminal_vertices: BTreeSet<VertexId> =
        g.terminals().iter().flat_map(|&(s, t)| [s, t]).collect();
    let mut pieces = Vec::new();
    let mut seen: BTreeSet<VertexId> = terminal_vertices.clone();
    for v in g.vertices() {
        if seen.contains(&v) {
            continue;
        }
        let mut piece = BTreeSet::from([v]);
        let mut stack = vec![v];
        seen.insert(v);
        while let Some(u) = stack.pop() {
            for d in g.rotation_of(u) {
                let w = if d.end == End::Tail { g.head(d.arc) } else { g.tail(d.arc) };
                if !terminal_vertices.contains(&w) && seen.insert(w) {
                    piece.insert(w);
                    stack.push(w);
                }
            }
        }
        pieces.push(piece);
    }
    pieces
}

/// Whether every incident arc of the piece sits in its outer face.
fn piece_is_flat(g: &EmbeddedDigraph, piece: &BTreeSet<VertexId>) -> Result<bool, DecompError> {
    let sub = sub_embedding(g, piece)?;
    for a in incident_arcs(g, piece, &induced_arcs(g, piece)) {
        for v in [g.tail(a), g.head(a)] {
            if piece.contains(&v) && incident_arc_face(g, &sub, a, v) != sub.graph.outer_face() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Terminal-singleton decomposition into disc components, when every piece
/// of the terminal-free rest satisfies the disc face condition.
fn flat_decomposition(g: &EmbeddedDigraph) -> Result<Option<Decomposition>, DecompError> {
    let terminal_vertices: BTreeSet<VertexId> =
        g.terminals().iter().flat_map(|&(s, t)| [s, t]).collect();
    let mut components: Vec<Component> = terminal_vertices
        .iter()
        .map(|&v| Component {
            kind: ComponentKind::Disc,
            vertices: BTreeSet::from([v]),
            f_in: None,
        })
        .collect();
    for piece in terminal_free_pieces(g) {
        if !piece_is_flat(g, &piece)? {
            return Ok(None);
        }
        components.push(Component { kind: ComponentKind::Disc, vertices: piece, f_in: None });
    }
    Ok(Some(Decomposition { components, isolation: BTreeMap::new() }))
}

/// A vertex to resolve by branching: the first vertex of degree ≥ 3 in the
/// first piece whose incident arcs leave its outer face.  An inner face
/// needs a cycle and the offending arc attaches to material hanging off it,
/// so an obstructed piece always contains such a vertex.
fn blocking_vertex(g: &EmbeddedDigraph) -> Result<Option<VertexId>, DecompError> {
    for piece in terminal_free_pieces(g) {
        if piece_is_flat(g, &piece)? {
            continue;
        }
        let v = piece
            .iter()
            .copied()
            .find(|&v| g.rotation_of(v).len() >= 3)
            .expect("an obstructed piece has a vertex of degree at least 3");
        return Ok(Some(v));
    }
    Ok(None)
}

/// Either find r terminal-free alternating concentric cycles, or emit a
/// branch list of (graph, decomposition) pairs such that the input is
/// feasible iff some branch is.  Branching resolves one blocking vertex at a
/// time: either it is unused (deleted) or a solution path runs through one
/// specific in/out arc pair (all other arcs at it deleted), which covers all
/// solutions exactly.
pub fn decompose(
    g: &EmbeddedDigraph,
    _lambda: usize,
    _d: usize,
    r: usize,
) -> Result<DecomposeOutcome, DecompError> {
    if r >= 1 {
        if let Some(w) = find_concentric_system(g, r)? {
            return Ok(DecomposeOutcome::Cycles(w.cycles));
        }
    }
    let mut out: Vec<DecompBranch> = Vec::new();
    let mut work: Vec<EmbeddedDigraph> = vec![g.clone()];
    let mut expansions = 0usize;
    while let Some(cur) = work.pop() {
        if let Some(decomp) = flat_decomposition(&cur)? {
            out.push(DecompBranch { graph: cur, decomposition: decomp });
            continue;
        }
        let v = blocking_vertex(&cur)?.expect("non-flat graph has a blocking vertex");
        expansions += 1;
        if expansions + out.len() > BRANCH_BUDGET {
            return Err(DecompError::SizeBudget(format!("more than {BRANCH_BUDGET} branches")));
        }
        // branch 1: no path uses v
        let (deleted, _) = cur.delete_vertex(v)?;
        work.push(deleted);
        // branch per in/out pair: a path runs a_in → v → a_out
        let all: BTreeSet<ArcId> = cur.rotation_of(v).iter().map(|d| d.arc).collect();
        for a_in in cur.in_arcs(v) {
            for a_out in cur.out_arcs(v) {
                let dead: BTreeSet<ArcId> =
                    all.iter().filter(|&&a| a != a_in && a != a_out).copied().collect();
                let (restricted, _) = cur.delete(&BTreeSet::new(), &dead)?;
                work.push(restricted);
            }
        }
    }
    Ok(DecomposeOutcome::Branches(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::CrossDir;
    use crate::fixtures::{ring_with_outside_terminals, tri, Drawing};
    use crate::solver::solve_exact;

    fn vset(g: &EmbeddedDigraph, names: &[&str]) -> BTreeSet<VertexId> {
        names.iter().map(|n| g.vertex_by_name(n).unwrap()).collect()
    }

    fn aset(g: &EmbeddedDigraph, names: &[&str]) -> BTreeSet<ArcId> {
        names.iter().map(|n| g.arc_by_name(n).unwrap()).collect()
    }

    #[test]
    fn incident_arc_examples() {
        let g = tri();
        let all: BTreeSet<VertexId> = g.vertices().collect();
        // the whole graph has no incident arcs
        assert!(incident_arcs(&g, &all, &induced_arcs(&g, &all)).is_empty());
        // a singleton sees every arc touching it
        let v1 = vset(&g, &["v1"]);
        assert_eq!(
            incident_arcs(&g, &v1, &induced_arcs(&g, &v1)),
            aset(&g, &["a1", "a3"])
        );
        // a chord with both endpoints inside but outside the owned arc set
        // counts as incident
        let mut owned = induced_arcs(&g, &all);
        owned.remove(&g.arc_by_name("a2").unwrap());
        assert_eq!(incident_arcs(&g, &all, &owned), aset(&g, &["a2"]));
    }

    /// A clockwise square with one pendant neighbour per corner; `dirs[i]`
    /// picks whether the pendant arc at corner i leaves (true) or enters.
    fn square_with_pendants(dirs: [bool; 4]) -> EmbeddedDigraph {
        let mut d = Drawing::new();
        let pos = [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)];
        for i in 0..4 {
            d.vertex(&format!("v{i}"), pos[i].0, pos[i].1);
            d.vertex(&format!("p{i}"), pos[i].0 * 3.0, pos[i].1 * 3.0);
        }
        for i in 0..4 {
            d.arc(&format!("s{i}"), &format!("v{i}"), &format!("v{}", (i + 1) % 4));
        }
        for i in 0..4 {
            let (t, h) = if dirs[i] {
                (format!("v{i}"), format!("p{i}"))
            } else {
                (format!("p{i}"), format!("v{i}"))
            };
            d.arc(&format!("q{i}"), &t, &h);
        }
        d.build(false).unwrap()
    }

    #[test]
    fn face_alternation_examples() {
        // all incident arcs outgoing: alternation 1
        let g = square_with_pendants([true; 4]);
        let comp = vset(&g, &["v0", "v1", "v2", "v3"]);
        let sub = sub_embedding(&g, &comp).unwrap();
        assert_eq!(face_alternation(&g, &sub, &comp, sub.graph.outer_face()), 1);
        // out, in, out, in around the outer face: alternation 4
        let g = square_with_pendants([true, false, true, false]);
        let comp = vset(&g, &["v0", "v1", "v2", "v3"]);
        let sub = sub_embedding(&g, &comp).unwrap();
        assert_eq!(face_alternation(&g, &sub, &comp, sub.graph.outer_face()), 4);
        // the square's inner face carries no incident arcs
        let inner = sub
            .graph
            .face_ids()
            .find(|&f| f != sub.graph.outer_face())
            .unwrap();
        assert_eq!(face_alternation(&g, &sub, &comp, inner), 0);
    }

    /// tri with a pendant terminal pair drawn outside: s -> v1 and v3 -> t.
    fn tri_with_terminals() -> EmbeddedDigraph {
        let mut d = Drawing::new();
        d.vertex("v1", 0.0, 1.0)
            .vertex("v2", 1.0, -1.0)
            .vertex("v3", -1.0, -1.0)
            .arc("a1", "v1", "v2")
            .arc("a2", "v2", "v3")
            .arc("a3", "v3", "v1")
            .vertex("s", 0.0, 2.5)
            .vertex("t", -2.5, -1.5)
            .arc("as", "s", "v1")
            .arc("at", "v3", "t")
            .terminal_pair("s", "t");
        d.build(false).unwrap()
    }

    #[test]
    fn validate_flat_decomposition() {
        let g = tri_with_terminals();
        let decomp = Decomposition {
            components: vec![
                Component { kind: ComponentKind::Disc, vertices: vset(&g, &["s"]), f_in: None },
                Component { kind: ComponentKind::Disc, vertices: vset(&g, &["t"]), f_in: None },
                Component {
                    kind: ComponentKind::Disc,
                    vertices: vset(&g, &["v1", "v2", "v3"]),
                    f_in: None,
                },
            ],
            isolation: BTreeMap::new(),
        };
        let report = validate_decomposition(&g, &decomp, 1, 1).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);

        // a terminal inside a multi-vertex component is flagged
        let bad = Decomposition {
            components: vec![
                Component { kind: ComponentKind::Disc, vertices: vset(&g, &["s"]), f_in: None },
                Component {
                    kind: ComponentKind::Disc,
                    vertices: vset(&g, &["v1", "v2", "v3", "t"]),
                    f_in: None,
                },
            ],
            isolation: BTreeMap::new(),
        };
        let report = validate_decomposition(&g, &bad, 1, 1).unwrap();
        assert!(report
            .violations
            .contains(&Violation::TerminalNotSingleton("t".to_string())));
    }

    /// Three nested squares, middle one counterclockwise, radial arcs only
    /// between the inner pair, so the outermost square floats free.
    fn isolation_stage() -> EmbeddedDigraph {
        let mut d = Drawing::new();
        for j in 0..3usize {
            let rad = 1.0 + j as f64;
            let pos = [(0.0, rad), (rad, 0.0), (0.0, -rad), (-rad, 0.0)];
            for i in 0..4 {
                d.vertex(&format!("v{j}_{i}"), pos[i].0, pos[i].1);
            }
            for i in 0..4 {
                let (t, h) = if j % 2 == 0 { (i, (i + 1) % 4) } else { ((i + 1) % 4, i) };
                d.arc(
                    &format!("ring{j}_{i}"),
                    &format!("v{j}_{t}"),
                    &format!("v{j}_{h}"),
                );
            }
        }
        for i in 0..4 {
            d.arc(&format!("rad1_{i}"), &format!("v0_{i}"), &format!("v1_{i}"));
        }
        d.build(false).unwrap()
    }

    fn square_cycle(g: &EmbeddedDigraph, j: usize) -> Vec<ArcId> {
        (0..4)
            .map(|i| g.arc_by_name(&format!("ring{j}_{i}")).unwrap())
            .collect()
    }

    #[test]
    fn validate_ring_isolation() {
        let g = isolation_stage();
        let ring_vertices = vset(&g, &["v1_0", "v1_1", "v1_2", "v1_3"]);
        let ring_sub = sub_embedding(&g, &ring_vertices).unwrap();
        let f_in = ring_sub
            .graph
            .face_ids()
            .find(|&f| f != ring_sub.graph.outer_face())
            .unwrap();
        let decomp = Decomposition {
            components: vec![
                Component {
                    kind: ComponentKind::Disc,
                    vertices: vset(&g, &["v0_0", "v0_1", "v0_2", "v0_3"]),
                    f_in: None,
                },
                Component { kind: ComponentKind::Ring, vertices: ring_vertices, f_in: Some(f_in) },
                Component {
                    kind: ComponentKind::Disc,
                    vertices: vset(&g, &["v2_0", "v2_1", "v2_2", "v2_3"]),
                    f_in: None,
                },
            ],
            isolation: BTreeMap::from([(
                1usize,
                vec![
                    IsolationRecord {
                        disc: 0,
                        level: -1,
                        cycles: CycleFamily { cycles: vec![square_cycle(&g, 0)] },
                    },
                    IsolationRecord {
                        disc: 2,
                        level: 1,
                        cycles: CycleFamily { cycles: vec![square_cycle(&g, 2)] },
                    },
                ],
            )]),
        };
        let report = validate_decomposition(&g, &decomp, 1, 1).unwrap();
        assert!(report.is_valid(), "{:?}", report.violations);

        // dropping the isolation records leaves the ring unprotected
        let bare = Decomposition { components: decomp.components.clone(), isolation: BTreeMap::new() };
        let report = validate_decomposition(&g, &bare, 1, 1).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IsolationMissing { component: 1, .. })));

        // swapping the levels puts the ring on the wrong side of each family
        let mut swapped = decomp.clone();
        for rec in swapped.isolation.get_mut(&1).unwrap() {
            rec.level = -rec.level;
        }
        let report = validate_decomposition(&g, &swapped, 1, 1).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IsolationMissing { component: 1, .. })));
    }

    #[test]
    fn connectify_examples() {
        let g = tri_with_terminals();
        // a border crossing nothing leaves the graph unchanged
        let outer = g.outer_face();
        let same = connectify(&g, &Curve::closed(vec![outer], vec![])).unwrap();
        assert_eq!(same.vertex_count(), g.vertex_count());
        assert_eq!(same.arc_count(), g.arc_count());

        // a border crossing two arcs: 2 subdivision vertices + 1 sink path
        let inner = g
            .face_ids()
            .find(|&f| f != outer && g.face_vertices(f).len() == 3)
            .unwrap();
        let a1 = g.arc_by_name("a1").unwrap();
        let a2 = g.arc_by_name("a2").unwrap();
        let border = Curve::closed(
            vec![outer, inner, outer],
            vec![
                Crossing::Arc { arc: a1, dir: CrossDir::LR },
                Crossing::Arc { arc: a2, dir: CrossDir::LR },
            ],
        );
        let h = connectify(&g, &border).unwrap();
        assert_eq!(h.vertex_count(), g.vertex_count() + 3);
        assert_eq!(h.arc_count(), g.arc_count() + 4);
        for n in ["a1__cut", "a2__cut", "border_sink_0"] {
            assert!(h.vertex_by_name(n).is_some(), "missing {n}");
        }
        // feasibility is unchanged: the feasible pair stays feasible
        assert!(solve_exact(&g).unwrap().is_some());
        assert!(solve_exact(&h).unwrap().is_some());

        // and an infeasible variant stays infeasible
        let mut d = Drawing::new();
        d.vertex("v1", 0.0, 1.0)
            .vertex("v2", 1.0, -1.0)
            .vertex("v3", -1.0, -1.0)
            .arc("a1", "v1", "v2")
            .arc("a2", "v2", "v3")
            .arc("a3", "v3", "v1")
            .vertex("s", 0.0, 2.5)
            .vertex("t", -2.5, -1.5)
            .arc("as", "s", "v1")
            .arc("at", "t", "v3")
            .terminal_pair("s", "t");
        let g = d.build(false).unwrap();
        let outer = g.outer_face();
        let inner = g
            .face_ids()
            .find(|&f| f != outer && g.face_vertices(f).len() == 3)
            .unwrap();
        let border = Curve::closed(
            vec![outer, inner, outer],
            vec![
                Crossing::Arc { arc: g.arc_by_name("a1").unwrap(), dir: CrossDir::LR },
                Crossing::Arc { arc: g.arc_by_name("a2").unwrap(), dir: CrossDir::LR },
            ],
        );
        let h = connectify(&g, &border).unwrap();
        assert!(solve_exact(&g).unwrap().is_none());
        assert!(solve_exact(&h).unwrap().is_none());

        // a border through a vertex is rejected
        let v = g.vertex_by_name("v2").unwrap();
        let bad = Curve::closed(vec![outer, outer], vec![Crossing::Vertex(v)]);
        assert!(matches!(connectify(&g, &bad), Err(DecompError::BorderThroughVertex)));
    }

    #[test]
    fn decompose_flat_terminals_single_branch() {
        let g = tri_with_terminals();
        match decompose(&g, 1, 1, 2).unwrap() {
            DecomposeOutcome::Cycles(_) => panic!("no packable cycle family here"),
            DecomposeOutcome::Branches(branches) => {
                assert_eq!(branches.len(), 1);
                let b = &branches[0];
                assert!(b
                    .decomposition
                    .components
                    .iter()
                    .all(|c| c.kind == ComponentKind::Disc));
                let report =
                    validate_decomposition(&b.graph, &b.decomposition, 1, 1).unwrap();
                assert!(report.is_valid(), "{:?}", report.violations);
            }
        }
    }

    #[test]
    fn decompose_finds_cycle_family() {
        let g = ring_with_outside_terminals();
        match decompose(&g, 1, 1, 2).unwrap() {
            DecomposeOutcome::Cycles(fam) => assert_eq!(fam.cycles.len(), 2),
            DecomposeOutcome::Branches(_) => panic!("expected the cycle-family outcome"),
        }
    }

    /// Triangle with a terminal planted inside the disc; `feasible` directs
    /// the second pendant so a solution exists (v2 -> t) or not (t -> v2).
    fn planted_terminal(feasible: bool) -> EmbeddedDigraph {
        let mut d = Drawing::new();
        d.vertex("v1", 0.0, 1.0)
            .vertex("v2", 1.0, -1.0)
            .vertex("v3", -1.0, -1.0)
            .arc("a1", "v1", "v2")
            .arc("a2", "v2", "v3")
            .arc("a3", "v3", "v1")
            .vertex("s", 0.0, -0.2)
            .vertex("t", 2.5, -1.5)
            .arc("as", "s", "v1");
        if feasible {
            d.arc("at", "v2", "t");
        } else {
            d.arc("at", "t", "v2");
        }
        d.terminal_pair("s", "t");
        d.build(false).unwrap()
    }

    #[test]
    fn decompose_branch_disjunction_matches_feasibility() {
        let instances = vec![
            planted_terminal(true),
            planted_terminal(false),
            tri_with_terminals(),
            ring_with_outside_terminals(),
        ];
        for g in instances {
            // force the branching arm even where cycles are packable
            let branches = match decompose(&g, 1, 1, 3).unwrap() {
                DecomposeOutcome::Cycles(_) => panic!("r = 3 is not packable here"),
                DecomposeOutcome::Branches(b) => b,
            };
            assert!(!branches.is_empty());
            let mut any = false;
            for b in &branches {
                let report =
                    validate_decomposition(&b.graph, &b.decomposition, 1, 1).unwrap();
                assert!(report.is_valid(), "{:?}", report.violations);
                any |= solve_exact(&b.graph).unwrap().is_some();
            }
            assert_eq!(any, solve_exact(&g).unwrap().is_some());
        }
    }
}
