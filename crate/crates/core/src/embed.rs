//! Embedded planar digraphs given by rotation systems.
//!
//! A graph is stored with an explicit clockwise cyclic order of darts around
//! every vertex.  Faces are derived by tracing: from a dart entering a vertex
//! we continue with the next dart clockwise.  Every arc is traversed once in
//! each direction, and the face traced by a traversal lies to the *left* of
//! the direction of travel.  Consequently the face containing the forward
//! traversal of an arc is its left face and the one containing the backward
//! traversal is its right face.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ArcId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FaceId(pub u32);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum End {
    Tail,
    Head,
}

/// One of the two ends of an arc.  As an element of a rotation, `(a, Tail)`
/// sits at `tail(a)` and `(a, Head)` at `head(a)`.  As a *traversal token*,
/// `(a, Tail)` denotes walking the arc forward (tail to head) and `(a, Head)`
/// walking it backward.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart {
    pub arc: ArcId,
    pub end: End,
}

impl Dart {
    pub fn tail(arc: ArcId) -> Self {
        Dart { arc, end: End::Tail }
    }
    pub fn head(arc: ArcId) -> Self {
        Dart { arc, end: End::Head }
    }
    /// The dart at the other end of the same arc.
    pub fn opposite(self) -> Self {
        Dart {
            arc: self.arc,
            end: match self.end {
                End::Tail => End::Head,
                End::Head => End::Tail,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct ArcRec {
    pub name: String,
    pub tail: VertexId,
    pub head: VertexId,
}

/// A face of the drawing.  For a weakly connected graph a face has a single
/// boundary walk; a face shared between nested or side-by-side components
/// (for example the annulus between two concentric cycles) carries one walk
/// per component touching it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub walks: Vec<Vec<Dart>>,
}

impl Face {
    /// The primary boundary walk (the only one on connected graphs).
    pub fn walk(&self) -> &[Dart] {
        self.walks.first().map(Vec::as_slice).unwrap_or(&[])
    }
    pub fn all_darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.walks.iter().flatten().copied()
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arc `{0}`")]
    UnknownArc(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("self-loop on vertex `{0}` is not supported")]
    SelfLoop(String),
    #[error("rotation of `{vertex}` does not list exactly the incident darts: {detail}")]
    RotationMismatch { vertex: String, detail: String },
    #[error("embedding fails the Euler check: {0}")]
    NonPlanarRotation(String),
    #[error("bad dart reference `{0}`")]
    BadDart(String),
    #[error("terminal `{0}` does not have degree 1 (and normalization is off)")]
    TerminalDegree(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("json: {0}")]
    Json(String),
    #[error("{0}")]
    Other(String),
}

#[derive(Clone, Debug)]
pub struct EmbeddedDigraph {
    vertex_names: Vec<String>,
    arcs: Vec<ArcRec>,
    /// Clockwise cyclic order of darts around each vertex.
    rotation: Vec<Vec<Dart>>,
    /// Position of each dart inside its rotation: `dart_pos[arc][end]`.
    dart_pos: Vec<[u32; 2]>,
    faces: Vec<Face>,
    /// `side_faces[arc] = [left, right]` with respect to the arc direction.
    side_faces: Vec<[FaceId; 2]>,
    outer_face: FaceId,
    /// Placement hints for multi-component drawings: pairs of traversal
    /// tokens whose face orbits are drawn as the same region.
    placements: Vec<(Dart, Dart)>,
    terminals: Vec<(VertexId, VertexId)>,
    vertex_lookup: HashMap<String, VertexId>,
    arc_lookup: HashMap<String, ArcId>,
}

fn end_ix(e: End) -> usize {
    match e {
        End::Tail => 0,
        End::Head => 1,
    }
}

impl EmbeddedDigraph {
    /// Build and validate an embedded digraph.
    ///
    /// `rotation` lists, for each vertex, the incident darts in clockwise
    /// order.  `outer_dart` is a traversal token on the outer face walk.
    /// With `normalize_terminals`, any terminal of degree != 1 is replaced by
    /// a fresh pendant vertex attached by a single arc (directed away from a
    /// source terminal, into a sink terminal).
    pub fn build(
        vertex_names: Vec<String>,
        arcs: Vec<ArcRec>,
        rotation: Vec<Vec<Dart>>,
        outer_dart: Option<Dart>,
        placements: Vec<(Dart, Dart)>,
        terminals: Vec<(VertexId, VertexId)>,
        normalize_terminals: bool,
    ) -> Result<Self, GraphError> {
        let mut g = Self::assemble(vertex_names, arcs, rotation, outer_dart, placements, terminals)?;
        if normalize_terminals {
            g = g.normalize_terminals()?;
        } else {
            for &(s, t) in &g.terminals {
                for v in [s, t] {
                    if g.degree(v) != 1 {
                        return Err(GraphError::TerminalDegree(g.vertex_name(v).to_string()));
                    }
                }
            }
        }
        Ok(g)
    }

    fn assemble(
        vertex_names: Vec<String>,
        arcs: Vec<ArcRec>,
        rotation: Vec<Vec<Dart>>,
        outer_dart: Option<Dart>,
        placements: Vec<(Dart, Dart)>,
        terminals: Vec<(VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut vertex_lookup = HashMap::new();
        for (i, n) in vertex_names.iter().enumerate() {
            if vertex_lookup.insert(n.clone(), VertexId(i as u32)).is_some() {
                return Err(GraphError::DuplicateId(n.clone()));
            }
        }
        let mut arc_lookup = HashMap::new();
        for (i, a) in arcs.iter().enumerate() {
            if a.tail == a.head {
                return Err(GraphError::SelfLoop(vertex_names[a.tail.0 as usize].clone()));
            }
            if arc_lookup.insert(a.name.clone(), ArcId(i as u32)).is_some() {
                return Err(GraphError::DuplicateId(a.name.clone()));
            }
        }
        if rotation.len() != vertex_names.len() {
            return Err(GraphError::Other("rotation table size mismatch".into()));
        }
        // Every dart must appear exactly once, at the right vertex.
        let mut dart_pos = vec![[u32::MAX; 2]; arcs.len()];
        for (vi, rot) in rotation.iter().enumerate() {
            for (pos, d) in rot.iter().enumerate() {
                let rec = arcs
                    .get(d.arc.0 as usize)
                    .ok_or_else(|| GraphError::BadDart(format!("arc #{}", d.arc.0)))?;
                let at = match d.end {
                    End::Tail => rec.tail,
                    End::Head => rec.head,
                };
                if at.0 as usize != vi {
                    return Err(GraphError::RotationMismatch {
                        vertex: vertex_names[vi].clone(),
                        detail: format!("dart of `{}` listed at the wrong vertex", rec.name),
                    });
                }
                let slot = &mut dart_pos[d.arc.0 as usize][end_ix(d.end)];
                if *slot != u32::MAX {
                    return Err(GraphError::RotationMismatch {
                        vertex: vertex_names[vi].clone(),
                        detail: format!("dart of `{}` listed twice", rec.name),
                    });
                }
                *slot = pos as u32;
            }
        }
        for (ai, pos) in dart_pos.iter().enumerate() {
            if pos[0] == u32::MAX || pos[1] == u32::MAX {
                return Err(GraphError::RotationMismatch {
                    vertex: String::new(),
                    detail: format!("dart of `{}` missing from the rotation", arcs[ai].name),
                });
            }
        }

        let mut g = EmbeddedDigraph {
            vertex_names,
            arcs,
            rotation,
            dart_pos,
            faces: Vec::new(),
            side_faces: Vec::new(),
            outer_face: FaceId(0),
            placements,
            terminals,
            vertex_lookup,
            arc_lookup,
        };
        if !g.arcs.is_empty() && outer_dart.is_none() {
            return Err(GraphError::Other(
                "outer face dart required for a graph with arcs".into(),
            ));
        }
        if let Some(d) = outer_dart {
            if d.arc.0 as usize >= g.arcs.len() {
                return Err(GraphError::BadDart(format!("arc #{}", d.arc.0)));
            }
        }
        g.trace_faces(outer_dart)?;
        g.euler_check()?;
        Ok(g)
    }

    /// Trace the face orbits of the rotation system, then merge orbits into
    /// geometric faces: orbits of different weak components can bound the
    /// same region of the plane (a nested component sits inside a face of an
    /// enclosing one).  Placement hints say which orbits coincide; any
    /// component without hints is drawn side by side in the outer face, with
    /// its longest orbit facing outward.
    fn trace_faces(&mut self, outer_dart: Option<Dart>) -> Result<(), GraphError> {
        self.faces.clear();
        self.side_faces = vec![[FaceId(u32::MAX); 2]; self.arcs.len()];
        // Traversal tokens: (arc, Tail) = forward, (arc, Head) = backward.
        let mut orbit_of = vec![[u32::MAX; 2]; self.arcs.len()];
        let mut orbits: Vec<Vec<Dart>> = Vec::new();
        for a in 0..self.arcs.len() {
            for e in [End::Tail, End::Head] {
                if orbit_of[a][end_ix(e)] != u32::MAX {
                    continue;
                }
                let oid = orbits.len() as u32;
                let start = Dart { arc: ArcId(a as u32), end: e };
                let mut walk = Vec::new();
                let mut t = start;
                loop {
                    if orbit_of[t.arc.0 as usize][end_ix(t.end)] != u32::MAX {
                        return Err(GraphError::NonPlanarRotation(
                            "face tracing revisited a traversal".into(),
                        ));
                    }
                    orbit_of[t.arc.0 as usize][end_ix(t.end)] = oid;
                    walk.push(t);
                    t = self.next_traversal(t);
                    if t == start {
                        break;
                    }
                }
                orbits.push(walk);
            }
        }
        if orbits.is_empty() {
            // Arcless graph: a single face covering the plane.
            self.faces.push(Face { walks: Vec::new() });
            self.outer_face = FaceId(0);
            return Ok(());
        }
        let outer_dart = outer_dart.expect("checked in assemble");

        // Weak component of each arc.
        let comp = self.arc_components();
        let orbit_comp: Vec<u32> = orbits.iter().map(|w| comp[w[0].arc.0 as usize]).collect();
        let ncomp = comp.iter().copied().max().map_or(0, |m| m as usize + 1);

        // Union-find over orbits.
        let mut parent: Vec<u32> = (0..orbits.len() as u32).collect();
        fn find(p: &mut Vec<u32>, x: u32) -> u32 {
            if p[x as usize] != x {
                let r = find(p, p[x as usize]);
                p[x as usize] = r;
                r
            } else {
                x
            }
        }
        let orbit = |d: Dart, orbit_of: &Vec<[u32; 2]>| orbit_of[d.arc.0 as usize][end_ix(d.end)];
        let mut comp_hinted = vec![false; ncomp];
        let placements = self.placements.clone();
        for &(d1, d2) in &placements {
            for d in [d1, d2] {
                if d.arc.0 as usize >= self.arcs.len() {
                    return Err(GraphError::BadDart(format!("arc #{}", d.arc.0)));
                }
            }
            let (o1, o2) = (orbit(d1, &orbit_of), orbit(d2, &orbit_of));
            if orbit_comp[o1 as usize] == orbit_comp[o2 as usize] {
                return Err(GraphError::NonPlanarRotation(
                    "placement pair lies in a single component".into(),
                ));
            }
            comp_hinted[orbit_comp[o1 as usize] as usize] = true;
            comp_hinted[orbit_comp[o2 as usize] as usize] = true;
            let (r1, r2) = (find(&mut parent, o1), find(&mut parent, o2));
            if r1 == r2 {
                return Err(GraphError::NonPlanarRotation(
                    "redundant placement pair over-merges faces".into(),
                ));
            }
            parent[r1 as usize] = r2;
        }
        // Default placement: unhinted components (other than the one holding
        // the outer anchor) sit side by side in the outer face.
        let outer_orbit = orbit(outer_dart, &orbit_of);
        let anchor_comp = orbit_comp[outer_orbit as usize];
        let mut default_of_comp: Vec<Option<u32>> = vec![None; ncomp];
        for (i, w) in orbits.iter().enumerate() {
            let c = orbit_comp[i] as usize;
            let better = match default_of_comp[c] {
                None => true,
                Some(j) => w.len() > orbits[j as usize].len(),
            };
            if better {
                default_of_comp[c] = Some(i as u32);
            }
        }
        for c in 0..ncomp {
            if c as u32 != anchor_comp && !comp_hinted[c] {
                let o = default_of_comp[c].expect("component has orbits");
                let (r1, r2) = (find(&mut parent, o), find(&mut parent, outer_orbit));
                if r1 != r2 {
                    parent[r1 as usize] = r2;
                }
            }
        }
        // Region count must come out exactly right for a plane drawing.
        let mut region_ix: HashMap<u32, u32> = HashMap::new();
        let mut faces: Vec<Face> = Vec::new();
        for (i, w) in orbits.iter().enumerate() {
            let r = find(&mut parent, i as u32);
            let fid = *region_ix.entry(r).or_insert_with(|| {
                faces.push(Face { walks: Vec::new() });
                faces.len() as u32 - 1
            });
            faces[fid as usize].walks.push(w.clone());
        }
        if faces.len() != orbits.len() - (ncomp - 1) {
            return Err(GraphError::NonPlanarRotation(format!(
                "placements leave {} faces where a plane drawing has {}",
                faces.len(),
                orbits.len() - (ncomp - 1)
            )));
        }
        for a in 0..self.arcs.len() {
            for e in [End::Tail, End::Head] {
                let o = orbit_of[a][end_ix(e)];
                let r = find(&mut parent, o);
                self.side_faces[a][end_ix(e)] = FaceId(region_ix[&r]);
            }
        }
        self.outer_face = FaceId(region_ix[&find(&mut parent, outer_orbit)]);
        self.faces = faces;
        Ok(())
    }

    /// Weak-component index of every arc (components counted over arcs).
    pub fn arc_components(&self) -> Vec<u32> {
        let mut parent: Vec<u32> = (0..self.vertex_names.len() as u32).collect();
        fn find(p: &mut Vec<u32>, x: u32) -> u32 {
            if p[x as usize] != x {
                let r = find(p, p[x as usize]);
                p[x as usize] = r;
                r
            } else {
                x
            }
        }
        for a in &self.arcs {
            let (x, y) = (find(&mut parent, a.tail.0), find(&mut parent, a.head.0));
            if x != y {
                parent[x as usize] = y;
            }
        }
        let mut ix: HashMap<u32, u32> = HashMap::new();
        let mut out = Vec::with_capacity(self.arcs.len());
        for a in &self.arcs {
            let r = find(&mut parent, a.tail.0);
            let n = ix.len() as u32;
            out.push(*ix.entry(r).or_insert(n));
        }
        out
    }

    /// Successor traversal on the same face walk: arrive at the far end of
    /// the current traversal, then leave along the next dart clockwise.
    pub fn next_traversal(&self, t: Dart) -> Dart {
        self.next_clockwise(t.opposite())
    }

    /// The next dart clockwise after `d` in the rotation of `d`'s vertex.
    pub fn next_clockwise(&self, d: Dart) -> Dart {
        let v = self.dart_vertex(d);
        let rot = &self.rotation[v.0 as usize];
        let pos = self.dart_pos[d.arc.0 as usize][end_ix(d.end)] as usize;
        rot[(pos + 1) % rot.len()]
    }

    /// The previous dart (counterclockwise neighbour).
    pub fn prev_clockwise(&self, d: Dart) -> Dart {
        let v = self.dart_vertex(d);
        let rot = &self.rotation[v.0 as usize];
        let pos = self.dart_pos[d.arc.0 as usize][end_ix(d.end)] as usize;
        rot[(pos + rot.len() - 1) % rot.len()]
    }

    fn euler_check(&self) -> Result<(), GraphError> {
        // Union-find over vertices through arcs.
        let mut parent: Vec<u32> = (0..self.vertex_names.len() as u32).collect();
        fn find(p: &mut Vec<u32>, x: u32) -> u32 {
            if p[x as usize] != x {
                let r = find(p, p[x as usize]);
                p[x as usize] = r;
                r
            } else {
                x
            }
        }
        for a in &self.arcs {
            let (x, y) = (find(&mut parent, a.tail.0), find(&mut parent, a.head.0));
            if x != y {
                parent[x as usize] = y;
            }
        }
        // Per weak component with at least one arc: V - E + orbits == 2
        // (the sphere relation, checked before orbits are merged into the
        // shared faces of the plane drawing).
        let mut vcount: BTreeMap<u32, i64> = BTreeMap::new();
        let mut ecount: BTreeMap<u32, i64> = BTreeMap::new();
        let mut fcount: BTreeMap<u32, i64> = BTreeMap::new();
        for a in &self.arcs {
            let r = find(&mut parent, a.tail.0);
            *ecount.entry(r).or_default() += 1;
        }
        for v in 0..self.vertex_names.len() as u32 {
            if !self.rotation[v as usize].is_empty() {
                let r = find(&mut parent, v);
                *vcount.entry(r).or_default() += 1;
            }
        }
        for f in &self.faces {
            for w in &f.walks {
                if let Some(d) = w.first() {
                    let r = find(&mut parent, self.arcs[d.arc.0 as usize].tail.0);
                    *fcount.entry(r).or_default() += 1;
                }
            }
        }
        for (&root, &e) in &ecount {
            let v = vcount.get(&root).copied().unwrap_or(0);
            let f = fcount.get(&root).copied().unwrap_or(0);
            if v - e + f != 2 {
                return Err(GraphError::NonPlanarRotation(format!(
                    "component of `{}`: V={} E={} F={}",
                    self.vertex_names[root as usize], v, e, f
                )));
            }
        }
        // Component-corrected global relation on merged faces.
        let mut comps: BTreeSet<u32> = BTreeSet::new();
        for v in 0..self.vertex_names.len() as u32 {
            comps.insert(find(&mut parent, v));
        }
        let (v, e, f, c) = (
            self.vertex_names.len() as i64,
            self.arcs.len() as i64,
            self.faces.len() as i64,
            comps.len() as i64,
        );
        if v - e + f != 1 + c {
            return Err(GraphError::NonPlanarRotation(format!(
                "V={} E={} F={} C={}",
                v, e, f, c
            )));
        }
        Ok(())
    }

    fn normalize_terminals(mut self) -> Result<Self, GraphError> {
        let anchor = self.faces[self.outer_face.0 as usize]
            .walks
            .first()
            .and_then(|w| w.first())
            .copied();
        let mut new_terms = Vec::new();
        for i in 0..self.terminals.len() {
            let (s, t) = self.terminals[i];
            let s2 = if self.degree(s) == 1 && !self.is_other_terminal(i, s) {
                s
            } else {
                self.attach_pendant(s, true)
            };
            let (s3, t2);
            if self.degree(t) == 1 && t != s2 && !self.is_other_terminal(i, t) {
                t2 = t;
            } else {
                t2 = self.attach_pendant(t, false);
            }
            s3 = s2;
            new_terms.push((s3, t2));
        }
        self.terminals = new_terms;
        // Pendant insertion keeps every old arc, so the recorded anchor
        // traversal stays on the outer face.
        let anchor = anchor.or_else(|| {
            if self.arcs.is_empty() {
                None
            } else {
                Some(Dart::tail(ArcId(0)))
            }
        });
        self.trace_faces(anchor)?;
        self.euler_check()?;
        Ok(self)
    }

    fn is_other_terminal(&self, idx: usize, v: VertexId) -> bool {
        self.terminals
            .iter()
            .enumerate()
            .any(|(j, &(s, t))| j != idx && (s == v || t == v))
    }

    /// Attach a fresh pendant vertex next to `v` and return it.  `source`
    /// picks the arc direction: pendant -> v for a source terminal,
    /// v -> pendant for a sink terminal.  The new dart is inserted before
    /// position 0 of `v`'s rotation; the pendant's own rotation is the single
    /// dart.  (Any insertion point yields a planar embedding.)
    fn attach_pendant(&mut self, v: VertexId, source: bool) -> VertexId {
        let name = {
            let base = format!("{}'", self.vertex_names[v.0 as usize]);
            let mut n = base.clone();
            let mut k = 1;
            while self.vertex_lookup.contains_key(&n) {
                n = format!("{}{}", base, k);
                k += 1;
            }
            n
        };
        let nv = VertexId(self.vertex_names.len() as u32);
        self.vertex_lookup.insert(name.clone(), nv);
        self.vertex_names.push(name.clone());
        let arc_name = {
            let mut n = format!("pend_{}", name);
            let mut k = 1;
            while self.arc_lookup.contains_key(&n) {
                n = format!("pend_{}_{}", name, k);
                k += 1;
            }
            n
        };
        let na = ArcId(self.arcs.len() as u32);
        self.arc_lookup.insert(arc_name.clone(), na);
        let (tail, head) = if source { (nv, v) } else { (v, nv) };
        self.arcs.push(ArcRec { name: arc_name, tail, head });
        let at_new = Dart { arc: na, end: if source { End::Tail } else { End::Head } };
        let at_old = at_new.opposite();
        self.rotation.push(vec![at_new]);
        self.rotation[v.0 as usize].insert(0, at_old);
        self.dart_pos.push([0, 0]);
        // Positions of v's darts shifted by one.
        self.reindex_rotation(v);
        self.dart_pos[na.0 as usize][end_ix(at_new.end)] = 0;
        nv
    }

    fn reindex_rotation(&mut self, v: VertexId) {
        let rot = self.rotation[v.0 as usize].clone();
        for (pos, d) in rot.iter().enumerate() {
            self.dart_pos[d.arc.0 as usize][end_ix(d.end)] = pos as u32;
        }
    }

    // ----- accessors -----

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_names.len() as u32).map(VertexId)
    }
    pub fn arc_ids(&self) -> impl Iterator<Item = ArcId> {
        (0..self.arcs.len() as u32).map(ArcId)
    }
    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len() as u32).map(FaceId)
    }
    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0 as usize]
    }
    pub fn arc_name(&self, a: ArcId) -> &str {
        &self.arcs[a.0 as usize].name
    }
    pub fn vertex_by_name(&self, n: &str) -> Option<VertexId> {
        self.vertex_lookup.get(n).copied()
    }
    pub fn arc_by_name(&self, n: &str) -> Option<ArcId> {
        self.arc_lookup.get(n).copied()
    }
    pub fn tail(&self, a: ArcId) -> VertexId {
        self.arcs[a.0 as usize].tail
    }
    pub fn head(&self, a: ArcId) -> VertexId {
        self.arcs[a.0 as usize].head
    }
    pub fn arc_rec(&self, a: ArcId) -> &ArcRec {
        &self.arcs[a.0 as usize]
    }
    pub fn rotation_of(&self, v: VertexId) -> &[Dart] {
        &self.rotation[v.0 as usize]
    }
    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v.0 as usize].len()
    }
    pub fn dart_vertex(&self, d: Dart) -> VertexId {
        match d.end {
            End::Tail => self.arcs[d.arc.0 as usize].tail,
            End::Head => self.arcs[d.arc.0 as usize].head,
        }
    }
    pub fn terminals(&self) -> &[(VertexId, VertexId)] {
        &self.terminals
    }
    pub fn terminal_vertices(&self) -> BTreeSet<VertexId> {
        self.terminals.iter().flat_map(|&(s, t)| [s, t]).collect()
    }
    pub fn set_terminals(&mut self, t: Vec<(VertexId, VertexId)>) {
        self.terminals = t;
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0 as usize]
    }
    pub fn outer_face(&self) -> FaceId {
        self.outer_face
    }
    pub fn set_outer_face(&mut self, f: FaceId) {
        self.outer_face = f;
    }
    /// Face of a traversal token: forward traversal lies on the left face.
    pub fn face_of_traversal(&self, t: Dart) -> FaceId {
        self.side_faces[t.arc.0 as usize][end_ix(t.end)]
    }
    pub fn left_face(&self, a: ArcId) -> FaceId {
        self.side_faces[a.0 as usize][0]
    }
    pub fn right_face(&self, a: ArcId) -> FaceId {
        self.side_faces[a.0 as usize][1]
    }
    /// The face occupying the wedge immediately clockwise of dart `d`
    /// (between `d` and its clockwise successor).
    pub fn wedge_face(&self, d: Dart) -> FaceId {
        match d.end {
            End::Head => self.left_face(d.arc),
            End::Tail => self.right_face(d.arc),
        }
    }
    /// All faces with a corner at `v`, in rotation order (one entry per wedge).
    pub fn faces_at_vertex(&self, v: VertexId) -> Vec<FaceId> {
        self.rotation[v.0 as usize].iter().map(|&d| self.wedge_face(d)).collect()
    }
    /// Vertices on the boundary walk of `f`, deduplicated, in first-visit order.
    pub fn face_vertices(&self, f: FaceId) -> Vec<VertexId> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in self.faces[f.0 as usize].all_darts() {
            let v = self.dart_vertex(t); // tail of the traversal
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    }
    /// Arcs on the boundary walk of `f`, deduplicated.
    pub fn face_arcs(&self, f: FaceId) -> BTreeSet<ArcId> {
        self.faces[f.0 as usize].all_darts().map(|t| t.arc).collect()
    }

    /// Placement hints pairing boundary walks that bound the same region.
    pub fn placement_hints(&self) -> &[(Dart, Dart)] {
        &self.placements
    }

    pub fn out_arcs(&self, v: VertexId) -> Vec<ArcId> {
        self.rotation[v.0 as usize]
            .iter()
            .filter(|d| d.end == End::Tail)
            .map(|d| d.arc)
            .collect()
    }
    pub fn in_arcs(&self, v: VertexId) -> Vec<ArcId> {
        self.rotation[v.0 as usize]
            .iter()
            .filter(|d| d.end == End::Head)
            .map(|d| d.arc)
            .collect()
    }

    // ----- dual -----

    /// The classical dual: one vertex per face, one arc per primal arc,
    /// directed so that it crosses the primal arc from its left face to its
    /// right face.
    pub fn dual(&self) -> DualGraph {
        let mut adj = vec![Vec::new(); self.faces.len()];
        for a in self.arc_ids() {
            let (l, r) = (self.left_face(a), self.right_face(a));
            adj[l.0 as usize].push((a, r));
            adj[r.0 as usize].push((a, l));
        }
        DualGraph { adjacency: adj }
    }

    // ----- deletion -----

    /// Delete a vertex with every incident arc, returning the new graph and
    /// the id remapping.  The outer face keeps its geometric identity: if the
    /// old outer walk loses all its arcs, the merged face around the deleted
    /// vertex becomes outer.
    pub fn delete_vertex(&self, v: VertexId) -> Result<(Self, DeletionMap), GraphError> {
        let dead_arcs: BTreeSet<ArcId> = self.rotation[v.0 as usize].iter().map(|d| d.arc).collect();
        self.delete(&BTreeSet::from([v]), &dead_arcs)
    }

    /// Delete a set of vertices (with incident arcs) and additional arcs.
    pub fn delete(
        &self,
        dead_vertices: &BTreeSet<VertexId>,
        extra_dead_arcs: &BTreeSet<ArcId>,
    ) -> Result<(Self, DeletionMap), GraphError> {
        let mut dead_arcs = extra_dead_arcs.clone();
        for &v in dead_vertices {
            dead_arcs.extend(self.rotation[v.0 as usize].iter().map(|d| d.arc));
        }
        let mut vertex_map = vec![None; self.vertex_names.len()];
        let mut names = Vec::new();
        for v in self.vertices() {
            if !dead_vertices.contains(&v) {
                vertex_map[v.0 as usize] = Some(VertexId(names.len() as u32));
                names.push(self.vertex_names[v.0 as usize].clone());
            }
        }
        let mut arc_map = vec![None; self.arcs.len()];
        let mut arcs = Vec::new();
        for a in self.arc_ids() {
            if !dead_arcs.contains(&a) {
                arc_map[a.0 as usize] = Some(ArcId(arcs.len() as u32));
                let r = &self.arcs[a.0 as usize];
                arcs.push(ArcRec {
                    name: r.name.clone(),
                    tail: vertex_map[r.tail.0 as usize].unwrap(),
                    head: vertex_map[r.head.0 as usize].unwrap(),
                });
            }
        }
        let mut rotation = Vec::new();
        for v in self.vertices() {
            if dead_vertices.contains(&v) {
                continue;
            }
            rotation.push(
                self.rotation[v.0 as usize]
                    .iter()
                    .filter(|d| !dead_arcs.contains(&d.arc))
                    .map(|d| Dart { arc: arc_map[d.arc.0 as usize].unwrap(), end: d.end })
                    .collect(),
            );
        }
        // Choose an outer anchor among surviving arcs: prefer a traversal of
        // the old outer walk; otherwise any traversal of a face that touched
        // deleted material (those faces merge, and the merged region contains
        // the old outer region).
        // Deletion only ever merges faces, and which old faces merge is a
        // local matter: removing an arc merges its two side faces, removing
        // a vertex merges every face at it.  A union-find over old faces
        // captures the merged regions exactly, including disconnected chunks
        // of deleted material that each merge their own neighbourhood.
        fn ffind(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = ffind(p, p[x]);
                p[x] = r;
                r
            } else {
                x
            }
        }
        let mut fparent: Vec<usize> = (0..self.faces.len()).collect();
        let funion = |p: &mut Vec<usize>, a: FaceId, b: FaceId| {
            let (x, y) = (ffind(p, a.0 as usize), ffind(p, b.0 as usize));
            if x != y {
                p[x] = y;
            }
        };
        for &a in &dead_arcs {
            funion(&mut fparent, self.left_face(a), self.right_face(a));
        }
        for &v in dead_vertices {
            let fs = self.faces_at_vertex(v);
            for w in fs.windows(2) {
                funion(&mut fparent, w[0], w[1]);
            }
        }
        let outer_dart = if arcs.is_empty() {
            None
        } else {
            let pick = |fid: FaceId| -> Option<Dart> {
                self.faces[fid.0 as usize]
                    .all_darts()
                    .find(|t| !dead_arcs.contains(&t.arc))
                    .map(|t| Dart { arc: arc_map[t.arc.0 as usize].unwrap(), end: t.end })
            };
            match pick(self.outer_face) {
                Some(d) => Some(d),
                None => {
                    // any face of the merged region around the old outer walk
                    let outer_rep = ffind(&mut fparent, self.outer_face.0 as usize);
                    (0..self.faces.len())
                        .filter(|&f| ffind(&mut fparent, f) == outer_rep)
                        .find_map(|f| pick(FaceId(f as u32)))
                }
            }
        };
        // The face of every surviving traversal is known: the merged region
        // of its old face.  Turn that knowledge into placement hints for the
        // rebuilt graph.
        let mut old_of_new: Vec<ArcId> = Vec::new();
        for a in self.arc_ids() {
            if arc_map[a.0 as usize].is_some() {
                old_of_new.push(a);
            }
        }
        let orbits = trace_orbits(&arcs, &rotation);
        let old_region = |d: Dart| -> FaceId {
            let old_arc = old_of_new[d.arc.0 as usize];
            self.side_faces[old_arc.0 as usize][end_ix(d.end)]
        };
        // group orbits by the merged region their darts lie in
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, w) in orbits.iter().enumerate() {
            let rep = ffind(&mut fparent, old_region(w[0]).0 as usize);
            classes.entry(rep).or_default().push(i);
        }
        let mut placements = Vec::new();
        for members in classes.values() {
            for pair in members.windows(2) {
                placements.push((orbits[pair[0]][0], orbits[pair[1]][0]));
            }
        }
        let terminals = self
            .terminals
            .iter()
            .filter_map(|&(s, t)| {
                Some((vertex_map[s.0 as usize]?, vertex_map[t.0 as usize]?))
            })
            .collect();
        let g = Self::assemble(names, arcs, rotation, outer_dart, placements, terminals)?;
        Ok((g, DeletionMap { vertex_map, arc_map }))
    }

    // ----- cycles and enclosure -----

    /// Validate a directed, vertex-simple cycle given as its arc sequence.
    pub fn check_cycle(&self, arcs: &[ArcId]) -> Result<(), GraphError> {
        if arcs.is_empty() {
            return Err(GraphError::InvalidCycle("empty".into()));
        }
        let mut verts = BTreeSet::new();
        for i in 0..arcs.len() {
            let next = arcs[(i + 1) % arcs.len()];
            if self.head(arcs[i]) != self.tail(next) {
                return Err(GraphError::InvalidCycle(format!(
                    "`{}` does not continue into `{}`",
                    self.arc_name(arcs[i]),
                    self.arc_name(next)
                )));
            }
            if !verts.insert(self.tail(arcs[i])) {
                return Err(GraphError::InvalidCycle("repeated vertex".into()));
            }
        }
        Ok(())
    }

    /// Faces strictly enclosed by a directed vertex-simple cycle, plus the
    /// cycle's orientation.  The bounded side is the one not containing the
    /// outer face; a clockwise cycle has the bounded side on its right.
    pub fn enclosed(&self, cycle: &[ArcId]) -> Result<Enclosure, GraphError> {
        self.check_cycle(cycle)?;
        let onc: BTreeSet<ArcId> = cycle.iter().copied().collect();
        let flood = |seed: FaceId| -> BTreeSet<FaceId> {
            let mut seen = BTreeSet::from([seed]);
            let mut stack = vec![seed];
            while let Some(f) = stack.pop() {
                for t in self.faces[f.0 as usize].all_darts() {
                    if onc.contains(&t.arc) {
                        continue;
                    }
                    let other = self.face_of_traversal(t.opposite());
                    if seen.insert(other) {
                        stack.push(other);
                    }
                }
            }
            seen
        };
        let left = flood(self.left_face(cycle[0]));
        let (faces, orientation) = if left.contains(&self.outer_face) {
            (flood(self.right_face(cycle[0])), Orientation::Clockwise)
        } else {
            (left, Orientation::Counterclockwise)
        };
        if faces.contains(&self.outer_face) {
            return Err(GraphError::InvalidCycle(
                "cycle does not separate: both sides reach the outer face".into(),
            ));
        }
        Ok(Enclosure { faces, orientation })
    }

    /// Does the enclosure strictly contain vertex `v`?  Vertices on the cycle
    /// itself are not enclosed.
    pub fn encloses_vertex(&self, enc: &Enclosure, cycle: &[ArcId], v: VertexId) -> bool {
        if cycle.iter().any(|&a| self.tail(a) == v || self.head(a) == v) {
            return false;
        }
        self.rotation[v.0 as usize]
            .iter()
            .any(|&d| enc.faces.contains(&self.wedge_face(d)))
            || (self.rotation[v.0 as usize].is_empty() && enc.faces.contains(&self.outer_face))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Orientation {
    Clockwise,
    Counterclockwise,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::Counterclockwise,
            Orientation::Counterclockwise => Orientation::Clockwise,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Enclosure {
    pub faces: BTreeSet<FaceId>,
    pub orientation: Orientation,
}

#[derive(Clone, Debug)]
pub struct DeletionMap {
    pub vertex_map: Vec<Option<VertexId>>,
    pub arc_map: Vec<Option<ArcId>>,
}

/// Face orbits of a raw rotation system, without region merging.  Used when
/// rebuilding a graph whose faces are already known up to merges.
fn trace_orbits(arcs: &[ArcRec], rotation: &[Vec<Dart>]) -> Vec<Vec<Dart>> {
    let mut pos = vec![[usize::MAX; 2]; arcs.len()];
    for rot in rotation {
        for (p, d) in rot.iter().enumerate() {
            pos[d.arc.0 as usize][end_ix(d.end)] = p;
        }
    }
    let vertex_of = |d: Dart| match d.end {
        End::Tail => arcs[d.arc.0 as usize].tail,
        End::Head => arcs[d.arc.0 as usize].head,
    };
    let next = |t: Dart| {
        let arr = t.opposite();
        let rot = &rotation[vertex_of(arr).0 as usize];
        rot[(pos[arr.arc.0 as usize][end_ix(arr.end)] + 1) % rot.len()]
    };
    let mut seen = vec![[false; 2]; arcs.len()];
    let mut orbits = Vec::new();
    for a in 0..arcs.len() {
        for e in [End::Tail, End::Head] {
            if seen[a][end_ix(e)] {
                continue;
            }
            let start = Dart { arc: ArcId(a as u32), end: e };
            let mut walk = Vec::new();
            let mut t = start;
            loop {
                seen[t.arc.0 as usize][end_ix(t.end)] = true;
                walk.push(t);
                t = next(t);
                if t == start {
                    break;
                }
            }
            orbits.push(walk);
        }
    }
    orbits
}

/// Face adjacency of the embedding.  `adjacency[f]` lists `(crossed arc,
/// neighbouring face)` pairs, one per incidence.
#[derive(Clone, Debug)]
pub struct DualGraph {
    pub adjacency: Vec<Vec<(ArcId, FaceId)>>,
}

// ----- JSON interchange -----

#[derive(Serialize, Deserialize)]
struct JsonArc {
    id: String,
    tail: String,
    head: String,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: Vec<String>,
    arcs: Vec<JsonArc>,
    rotation: BTreeMap<String, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    outer_face_dart: Option<String>,
    /// Optional drawing hints for multi-component graphs: dart pairs whose
    /// face orbits bound the same region of the plane.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    placements: Vec<[String; 2]>,
    #[serde(default)]
    terminals: Vec<[String; 2]>,
}

fn parse_dart_str(s: &str, lookup: &HashMap<String, ArcId>) -> Result<Dart, GraphError> {
    let (name, end) = s
        .rsplit_once(':')
        .ok_or_else(|| GraphError::BadDart(s.to_string()))?;
    let arc = *lookup
        .get(name)
        .ok_or_else(|| GraphError::UnknownArc(name.to_string()))?;
    let end = match end {
        "T" => End::Tail,
        "H" => End::Head,
        _ => return Err(GraphError::BadDart(s.to_string())),
    };
    Ok(Dart { arc, end })
}

impl EmbeddedDigraph {
    pub fn from_json(text: &str, normalize_terminals: bool) -> Result<Self, GraphError> {
        let j: JsonGraph = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let mut arc_lookup = HashMap::new();
        let mut vertex_lookup = HashMap::new();
        for (i, n) in j.vertices.iter().enumerate() {
            vertex_lookup.insert(n.clone(), VertexId(i as u32));
        }
        let mut arcs = Vec::new();
        for (i, a) in j.arcs.iter().enumerate() {
            let tail = *vertex_lookup
                .get(&a.tail)
                .ok_or_else(|| GraphError::UnknownVertex(a.tail.clone()))?;
            let head = *vertex_lookup
                .get(&a.head)
                .ok_or_else(|| GraphError::UnknownVertex(a.head.clone()))?;
            arc_lookup.insert(a.id.clone(), ArcId(i as u32));
            arcs.push(ArcRec { name: a.id.clone(), tail, head });
        }
        let mut rotation = vec![Vec::new(); j.vertices.len()];
        for (vn, darts) in &j.rotation {
            let v = *vertex_lookup
                .get(vn)
                .ok_or_else(|| GraphError::UnknownVertex(vn.clone()))?;
            rotation[v.0 as usize] = darts
                .iter()
                .map(|d| parse_dart_str(d, &arc_lookup))
                .collect::<Result<_, _>>()?;
        }
        let outer = j
            .outer_face_dart
            .as_deref()
            .map(|d| parse_dart_str(d, &arc_lookup))
            .transpose()?;
        let placements = j
            .placements
            .iter()
            .map(|[a, b]| Ok((parse_dart_str(a, &arc_lookup)?, parse_dart_str(b, &arc_lookup)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        let terminals = j
            .terminals
            .iter()
            .map(|[s, t]| {
                Ok((
                    *vertex_lookup
                        .get(s)
                        .ok_or_else(|| GraphError::UnknownVertex(s.clone()))?,
                    *vertex_lookup
                        .get(t)
                        .ok_or_else(|| GraphError::UnknownVertex(t.clone()))?,
                ))
            })
            .collect::<Result<Vec<_>, GraphError>>()?;
        Self::build(j.vertices, arcs, rotation, outer, placements, terminals, normalize_terminals)
    }

    pub fn to_json(&self) -> String {
        let dart_str = |d: Dart| {
            format!(
                "{}:{}",
                self.arc_name(d.arc),
                match d.end {
                    End::Tail => "T",
                    End::Head => "H",
                }
            )
        };
        let j = JsonGraph {
            vertices: self.vertex_names.clone(),
            arcs: self
                .arcs
                .iter()
                .map(|a| JsonArc {
                    id: a.name.clone(),
                    tail: self.vertex_name(a.tail).to_string(),
                    head: self.vertex_name(a.head).to_string(),
                })
                .collect(),
            rotation: self
                .vertices()
                .map(|v| {
                    (
                        self.vertex_name(v).to_string(),
                        self.rotation[v.0 as usize].iter().map(|&d| dart_str(d)).collect(),
                    )
                })
                .collect(),
            outer_face_dart: self.faces[self.outer_face.0 as usize]
                .all_darts()
                .next()
                .map(|d| dart_str(d)),
            placements: self
                .placements
                .iter()
                .map(|&(d1, d2)| [dart_str(d1), dart_str(d2)])
                .collect(),
            terminals: self
                .terminals
                .iter()
                .map(|&(s, t)| [self.vertex_name(s).to_string(), self.vertex_name(t).to_string()])
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("serialize")
    }
}
