//! Free-group labellings over the extended dual of a ring: reduced group
//! words, the extended dual (classical dual plus corner arcs between faces
//! sharing only a vertex), construction of a labelling instance from a ring,
//! the labelling induced by an alternating join, constraint / cohomology /
//! conjugacy checks, and extraction of a join back out of a labelling.

use crate::embed::{ArcId, EmbeddedDigraph, End, FaceId, GraphError, Orientation, VertexId};
use crate::rings::{clockwise_order, cycle_vertices, AlternatingJoin, PathDir, Ring, RingError};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CohError {
    #[error("the ring boundaries are not connected by any path")]
    Disconnected,
    #[error("join size {0} does not match instance size {1}")]
    JoinMismatch(usize, usize),
    #[error("the required symbol pattern is not embeddable: {0}")]
    NoEmbedding(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

// ----- reduced words in a free group -----

/// A reduced word over generators 1..=r: a sequence of (generator, ±1) with
/// no adjacent cancelling pair.  The empty word is the identity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct GroupWord(Vec<(u32, i8)>);

impl GroupWord {
    pub fn identity() -> Self {
        GroupWord(Vec::new())
    }
    pub fn generator(i: u32) -> Self {
        GroupWord(vec![(i, 1)])
    }
    pub fn generator_inverse(i: u32) -> Self {
        GroupWord(vec![(i, -1)])
    }
    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }
    pub fn letters(&self) -> &[(u32, i8)] {
        &self.0
    }
    pub fn inverse(&self) -> Self {
        GroupWord(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }
    /// Product with free reduction.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for &(g, e) in &other.0 {
            match out.last() {
                Some(&(g2, e2)) if g2 == g && e2 == -e => {
                    out.pop();
                }
                _ => out.push((g, e)),
            }
        }
        GroupWord(out)
    }
    pub fn pow(&self, e: i8) -> Self {
        if e >= 0 {
            self.clone()
        } else {
            self.inverse()
        }
    }
    /// Remove cancelling prefix/suffix pairs until the word is cyclically
    /// reduced (first and last letters are not inverse to each other).
    pub fn cyclic_reduction(&self) -> Self {
        let mut w = self.0.clone();
        while w.len() >= 2 {
            let (first, last) = (w[0], w[w.len() - 1]);
            if first.0 == last.0 && first.1 == -last.1 {
                w.pop();
                w.remove(0);
            } else {
                break;
            }
        }
        GroupWord(w)
    }
    /// Render as concatenated tokens, lower case for exponent +1 and upper
    /// case for −1 ("g3" / "G3"); the identity renders as "1".
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&(g, e)| format!("{}{}", if e > 0 { "g" } else { "G" }, g))
            .collect()
    }
    pub fn parse(s: &str) -> Result<Self, CohError> {
        if s == "1" {
            return Ok(GroupWord::identity());
        }
        let mut out = GroupWord::identity();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let sign = match c {
                'g' => 1i8,
                'G' => -1i8,
                _ => return Err(CohError::Unsupported(format!("bad word token in {s:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let g: u32 = digits
                .parse()
                .map_err(|_| CohError::Unsupported(format!("bad generator index in {s:?}")))?;
            out = out.mul(&GroupWord(vec![(g, sign)]));
        }
        Ok(out)
    }
}

/// Free reduction of an arbitrary (possibly unreduced) letter sequence.
pub fn reduce(letters: &[(u32, i8)]) -> GroupWord {
    letters
        .iter()
        .fold(GroupWord::identity(), |acc, &l| acc.mul(&GroupWord(vec![l])))
}

/// Conjugacy test in a free group: cyclic reductions must be rotations of
/// each other.
pub fn conjugate(a: &GroupWord, b: &GroupWord) -> bool {
    let (a, b) = (a.cyclic_reduction(), b.cyclic_reduction());
    if a.0.len() != b.0.len() {
        return false;
    }
    if a.0.is_empty() {
        return true;
    }
    let doubled: Vec<(u32, i8)> = a.0.iter().chain(&a.0).copied().collect();
    doubled.windows(a.0.len()).any(|w| w == b.0.as_slice())
}

// ----- the extended dual -----

/// How an extended-dual arc arose.
#[derive(Clone, Debug)]
pub enum ExtArcKind {
    /// The dual of a primal arc, directed across it left face → right face.
    Dual(ArcId),
    /// A corner arc between two faces sharing the vertex but no arc at it.
    /// `route` is the clockwise sweep between the two corners: the primal
    /// arcs crossed, each with +1 when crossed in its dual direction
    /// (left face → right face) and −1 otherwise.
    Corner { vertex: VertexId, route: Vec<(ArcId, i8)> },
}

#[derive(Clone, Debug)]
pub struct ExtArc {
    pub from: FaceId,
    pub to: FaceId,
    pub kind: ExtArcKind,
}

/// The extended dual of a ring-embedded graph: one vertex per face except
/// the two designated boundary faces, the duals of all primal arcs whose two
/// sides both survive, plus a corner arc for every (vertex, face pair)
/// where the faces meet only at the vertex.
#[derive(Clone, Debug)]
pub struct ExtDual {
    pub arcs: Vec<ExtArc>,
    pub removed: (FaceId, FaceId),
    /// primal arc id → index into `arcs`, when the dual arc survives
    pub dual_index: BTreeMap<ArcId, usize>,
}

/// Build the extended dual.  `f1 == f2` is allowed as a degenerate ring
/// (only one face removed).
pub fn extended_dual(g: &EmbeddedDigraph, f1: FaceId, f2: FaceId) -> ExtDual {
    let removed = |f: FaceId| f == f1 || f == f2;
    let mut arcs = Vec::new();
    let mut dual_index = BTreeMap::new();
    for a in g.arc_ids() {
        let (l, r) = (g.left_face(a), g.right_face(a));
        if removed(l) || removed(r) {
            continue;
        }
        dual_index.insert(a, arcs.len());
        arcs.push(ExtArc { from: l, to: r, kind: ExtArcKind::Dual(a) });
    }
    for v in g.vertices() {
        let rot = g.rotation_of(v);
        let wedges: Vec<FaceId> = rot.iter().map(|&d| g.wedge_face(d)).collect();
        // faces sharing an arc at v: the two sides of each incident arc
        let mut arc_pairs: BTreeSet<(FaceId, FaceId)> = BTreeSet::new();
        for d in rot {
            let (l, r) = (g.left_face(d.arc), g.right_face(d.arc));
            arc_pairs.insert((l.min(r), l.max(r)));
        }
        let distinct: BTreeSet<FaceId> = wedges.iter().copied().collect();
        let faces: Vec<FaceId> = distinct.into_iter().collect();
        for i in 0..faces.len() {
            for j in i + 1..faces.len() {
                let (fa, fb) = (faces[i], faces[j]);
                if removed(fa) || removed(fb) || arc_pairs.contains(&(fa, fb)) {
                    continue;
                }
                // clockwise sweep from the first corner of fa to the first
                // corner of fb; crossing the arc of rotation dart d steps
                // into wedge_face(d), which is the arc's left side exactly
                // when d is a head dart — that step runs against the dual
                // direction, hence the sign
                let start = wedges.iter().position(|&f| f == fa).unwrap();
                let end = wedges.iter().position(|&f| f == fb).unwrap();
                let n = wedges.len();
                let mut route = Vec::new();
                let mut p = start;
                while p != end {
                    p = (p + 1) % n;
                    let d = rot[p];
                    route.push((d.arc, if d.end == End::Head { -1i8 } else { 1 }));
                }
                arcs.push(ExtArc { from: fa, to: fb, kind: ExtArcKind::Corner { vertex: v, route } });
            }
        }
    }
    ExtDual { arcs, removed: (f1, f2), dual_index }
}

// ----- labelling instances -----

/// The admissible-value set attached to an extended-dual arc.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdmissibleSet {
    /// {1, g_1, …, g_r}
    Generators,
    /// {1, g_1, g_1⁻¹, …, g_r, g_r⁻¹}
    GeneratorsWithInverses,
}

impl AdmissibleSet {
    pub fn contains(&self, w: &GroupWord, r: usize) -> bool {
        if w.is_identity() {
            return true;
        }
        if w.0.len() != 1 {
            return false;
        }
        let (g, e) = w.0[0];
        (1..=r as u32).contains(&g)
            && match self {
                AdmissibleSet::Generators => e == 1,
                AdmissibleSet::GeneratorsWithInverses => true,
            }
    }
}

/// A labelling instance over the extended dual of a ring: the fixed
/// labelling `phi` (the full alternating word on the duals of a seed path
/// crossing the ring, identity elsewhere, and induced products on corner
/// arcs) together with per-arc admissible sets.
pub struct CohInstance<'g> {
    pub g: &'g EmbeddedDigraph,
    pub ring: Ring,
    pub dual: ExtDual,
    pub phi: Vec<GroupWord>,
    pub admissible: Vec<AdmissibleSet>,
    pub r: usize,
    /// primal arcs of the seed path, with +1 where the path follows the arc
    pub seed_path: Vec<(ArcId, i8)>,
}

/// A candidate labelling of the same extended dual.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub psi: Vec<GroupWord>,
}

/// g1·g2⁻¹·…·g_{r−1}·g_r⁻¹ (r even).
pub fn alternating_word(r: usize) -> GroupWord {
    let letters: Vec<(u32, i8)> =
        (1..=r as u32).map(|i| (i, if i % 2 == 1 { 1i8 } else { -1 })).collect();
    reduce(&letters)
}

/// Canonical undirected seed path between the ring boundaries: depth-first
/// with arcs tried in id order, so the first hit is lexicographically least
/// in prefix order.
fn seed_path(g: &EmbeddedDigraph, ring: &Ring) -> Option<Vec<(ArcId, i8)>> {
    let v1: BTreeSet<VertexId> = cycle_vertices(g, &ring.inner).into_iter().collect();
    let v2: BTreeSet<VertexId> = cycle_vertices(g, &ring.outer).into_iter().collect();
    fn dfs(
        g: &EmbeddedDigraph,
        at: VertexId,
        goal: &BTreeSet<VertexId>,
        seen: &mut BTreeSet<VertexId>,
        cur: &mut Vec<(ArcId, i8)>,
    ) -> bool {
        if goal.contains(&at) {
            return true;
        }
        let mut steps: Vec<(ArcId, i8, VertexId)> = g
            .rotation_of(at)
            .iter()
            .map(|d| match d.end {
                End::Tail => (d.arc, 1i8, g.head(d.arc)),
                End::Head => (d.arc, -1i8, g.tail(d.arc)),
            })
            .collect();
        steps.sort();
        steps.dedup();
        for (a, dir, nxt) in steps {
            if seen.insert(nxt) {
                cur.push((a, dir));
                if dfs(g, nxt, goal, seen, cur) {
                    return true;
                }
                cur.pop();
            }
        }
        false
    }
    for &s in &v1 {
        let mut seen: BTreeSet<VertexId> = v1.clone();
        let mut cur = Vec::new();
        if dfs(g, s, &v2, &mut seen, &mut cur) {
            return Some(cur);
        }
    }
    None
}

/// Build the labelling instance for a size-r join question on a ring.
pub fn build_join_instance<'g>(
    g: &'g EmbeddedDigraph,
    ring: &Ring,
    r: usize,
) -> Result<CohInstance<'g>, CohError> {
    if r % 2 != 0 {
        return Err(CohError::Unsupported("join size must be even".into()));
    }
    // the disc face bounded by the inner cycle and the face on the unbounded
    // side of the outer cycle; a clockwise cycle has its bounded side on the
    // right
    let side = |c: &[ArcId], bounded: bool| -> Result<FaceId, CohError> {
        let enc = g.enclosed(c)?;
        let right = (enc.orientation == Orientation::Clockwise) == bounded;
        Ok(if right { g.right_face(c[0]) } else { g.left_face(c[0]) })
    };
    let f1 = side(&ring.inner, true)?;
    let f2 = side(&ring.outer, false)?;
    let dual = extended_dual(g, f1, f2);
    let seed = seed_path(g, ring).ok_or(CohError::Disconnected)?;
    let word = alternating_word(r);
    let mut phi = vec![GroupWord::identity(); dual.arcs.len()];
    if r > 0 {
        for &(a, dir) in &seed {
            if let Some(&idx) = dual.dual_index.get(&a) {
                // the dual arc crosses the seed path left → right when the
                // path follows the primal arc
                phi[idx] = word.pow(dir);
            }
        }
    }
    let mut admissible = vec![AdmissibleSet::Generators; dual.arcs.len()];
    for (i, ea) in dual.arcs.iter().enumerate() {
        if let ExtArcKind::Corner { route, .. } = &ea.kind {
            admissible[i] = AdmissibleSet::GeneratorsWithInverses;
            phi[i] = route_product(&dual, &phi, route);
        }
    }
    Ok(CohInstance { g, ring: ring.clone(), dual, phi, admissible, r, seed_path: seed })
}

/// Product of a corner route under a labelling of the original dual arcs.
fn route_product(dual: &ExtDual, labels: &[GroupWord], route: &[(ArcId, i8)]) -> GroupWord {
    let mut w = GroupWord::identity();
    for &(a, sign) in route {
        if let Some(&idx) = dual.dual_index.get(&a) {
            w = w.mul(&labels[idx].pow(sign));
        }
    }
    w
}

/// The labelling induced by an alternating join: g_i on the duals of the
/// i-th path's arcs, identity on every other dual arc, route products on
/// corner arcs.
pub fn psi_from_join(inst: &CohInstance, join: &AlternatingJoin) -> Result<Labeling, CohError> {
    if join.paths.len() != inst.r {
        return Err(CohError::JoinMismatch(join.paths.len(), inst.r));
    }
    let mut psi = vec![GroupWord::identity(); inst.dual.arcs.len()];
    for (i, path) in join.paths.iter().enumerate() {
        for a in path {
            if let Some(&idx) = inst.dual.dual_index.get(a) {
                psi[idx] = GroupWord::generator(i as u32 + 1);
            }
        }
    }
    for (i, ea) in inst.dual.arcs.iter().enumerate() {
        if let ExtArcKind::Corner { route, .. } = &ea.kind {
            psi[i] = route_product(&inst.dual, &psi, route);
        }
    }
    Ok(Labeling { psi })
}

/// True iff every label lies in its arc's admissible set.
pub fn check_constraints(inst: &CohInstance, labeling: &Labeling) -> bool {
    labeling
        .psi
        .iter()
        .zip(&inst.admissible)
        .all(|(w, h)| h.contains(w, inst.r))
}

/// True iff `psi(a) = F(from)⁻¹ · phi(a) · F(to)` on every arc, with `F`
/// required to be the identity on the faces listed in `pinned`.
pub fn cohomologous_check(
    inst: &CohInstance,
    labeling: &Labeling,
    shift: &BTreeMap<FaceId, GroupWord>,
    pinned: &[FaceId],
) -> bool {
    let f_of = |f: FaceId| shift.get(&f).cloned().unwrap_or_else(GroupWord::identity);
    if pinned.iter().any(|f| !f_of(*f).is_identity()) {
        return false;
    }
    inst.dual.arcs.iter().enumerate().all(|(i, ea)| {
        f_of(ea.from).inverse().mul(&inst.phi[i]).mul(&f_of(ea.to)) == labeling.psi[i]
    })
}

/// Label product along a dual cycle given as (extended-arc index, ±1).
pub fn cycle_word(labels: &[GroupWord], cycle: &[(usize, i8)]) -> GroupWord {
    let mut w = GroupWord::identity();
    for &(i, e) in cycle {
        w = w.mul(&labels[i].pow(e));
    }
    w
}

/// Necessary condition on a dual cycle winding once around the ring: the
/// labelling's product must be conjugate to the instance labelling's.
pub fn conjugacy_necessary(
    inst: &CohInstance,
    labeling: &Labeling,
    cycle: &[(usize, i8)],
) -> bool {
    conjugate(&cycle_word(&labeling.psi, cycle), &cycle_word(&inst.phi, cycle))
}

/// A once-winding dual cycle through the given cyclic face sequence, using
/// for each consecutive pair the first extended-dual arc joining the faces.
pub fn dual_cycle_through(inst: &CohInstance, faces: &[FaceId]) -> Result<Vec<(usize, i8)>, CohError> {
    let mut cyc = Vec::new();
    for p in 0..faces.len() {
        let (fa, fb) = (faces[p], faces[(p + 1) % faces.len()]);
        let step = inst
            .dual
            .arcs
            .iter()
            .enumerate()
            .find_map(|(i, ea)| {
                if ea.from == fa && ea.to == fb {
                    Some((i, 1i8))
                } else if ea.from == fb && ea.to == fa {
                    Some((i, -1i8))
                } else {
                    None
                }
            })
            .ok_or_else(|| {
                CohError::Unsupported(format!("faces {fa:?}, {fb:?} not dual-adjacent"))
            })?;
        cyc.push(step);
    }
    Ok(cyc)
}

/// Extract an alternating join from a labelling that passes the constraint
/// check: partition each generator's primal arcs into walks by the
/// clockwise-next rule, keep the walks connecting the ring boundaries, and
/// verify the alternating pattern.
pub fn extract_join(inst: &CohInstance, labeling: &Labeling) -> Result<AlternatingJoin, CohError> {
    let g = inst.g;
    let v1: BTreeSet<VertexId> = cycle_vertices(g, &inst.ring.inner).into_iter().collect();
    let v2: BTreeSet<VertexId> = cycle_vertices(g, &inst.ring.outer).into_iter().collect();
    // generator carried by each primal arc, if any
    let mut symbol: BTreeMap<ArcId, u32> = BTreeMap::new();
    for (a, &idx) in &inst.dual.dual_index {
        let w = &labeling.psi[idx];
        if let [(gen, 1)] = w.letters() {
            symbol.insert(*a, *gen);
        } else if !w.is_identity() {
            return Err(CohError::NoEmbedding(format!(
                "dual arc label {} is not a plain generator",
                w.render()
            )));
        }
    }
    // clockwise-next successor: from the head of a labelled arc, the next
    // dart clockwise carrying a nontrivial symbol — a successor only when it
    // leaves the vertex with the same generator
    let mut succ: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    for (&a, &gen) in &symbol {
        let v = g.head(a);
        if v1.contains(&v) || v2.contains(&v) {
            continue;
        }
        let rot = g.rotation_of(v);
        let here = rot
            .iter()
            .position(|d| d.arc == a && d.end == End::Head)
            .expect("head dart in rotation");
        for off in 1..=rot.len() {
            let d = rot[(here + off) % rot.len()];
            if d.arc == a {
                continue;
            }
            if let Some(&g2) = symbol.get(&d.arc) {
                if d.end == End::Tail && g2 == gen {
                    succ.insert(a, d.arc);
                }
                break;
            }
        }
    }
    let has_pred: BTreeSet<ArcId> = succ.values().copied().collect();
    // walk every chain; keep those crossing the ring
    let mut connectors: Vec<(Vec<ArcId>, u32)> = Vec::new();
    for (&a, &gen) in &symbol {
        if has_pred.contains(&a) {
            continue;
        }
        let mut chain = vec![a];
        let mut seen = BTreeSet::from([a]);
        let mut cur = a;
        while let Some(&nxt) = succ.get(&cur) {
            if !seen.insert(nxt) {
                break;
            }
            chain.push(nxt);
            cur = nxt;
        }
        let (s, t) = (g.tail(chain[0]), g.head(*chain.last().unwrap()));
        let crossing = (v1.contains(&s) && v2.contains(&t)) || (v2.contains(&s) && v1.contains(&t));
        if crossing {
            connectors.push((chain, gen));
        }
    }
    // one connector per generator, first in canonical order; remaining
    // chains and cycles are discarded
    let mut paths: Vec<Vec<ArcId>> = Vec::new();
    let mut dirs: Vec<PathDir> = Vec::new();
    for gen in 1..=inst.r as u32 {
        let chain = connectors
            .iter()
            .find(|(_, g2)| *g2 == gen)
            .map(|(c, _)| c.clone())
            .ok_or_else(|| {
                CohError::NoEmbedding(format!("no boundary-connecting walk carries g{gen}"))
            })?;
        let outward = v1.contains(&g.tail(chain[0]));
        let expected = if gen % 2 == 1 { PathDir::Out } else { PathDir::In };
        let actual = if outward { PathDir::Out } else { PathDir::In };
        if actual != expected {
            return Err(CohError::NoEmbedding(format!(
                "g{gen} walk runs {actual:?}, pattern needs {expected:?}"
            )));
        }
        paths.push(chain);
        dirs.push(actual);
    }
    // verify strict clockwise alternation around the inner boundary
    let order = clockwise_order(g, &inst.ring.inner)?;
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut items: Vec<(usize, usize)> = (0..paths.len())
        .map(|i| {
            let end = if dirs[i] == PathDir::Out {
                g.tail(paths[i][0])
            } else {
                g.head(*paths[i].last().unwrap())
            };
            (pos[&end], i)
        })
        .collect();
    items.sort();
    let alternates = items.windows(2).all(|w| dirs[w[0].1] != dirs[w[1].1])
        && (items.len() < 2 || dirs[items[0].1] != dirs[items[items.len() - 1].1]);
    if !alternates {
        return Err(CohError::NoEmbedding(
            "extracted walks do not alternate clockwise".into(),
        ));
    }
    let first_out = items
        .iter()
        .position(|&(_, i)| dirs[i] == PathDir::Out)
        .ok_or_else(|| CohError::NoEmbedding("no outward walk extracted".into()))?;
    items.rotate_left(first_out);
    Ok(AlternatingJoin {
        paths: items.iter().map(|&(_, i)| paths[i].clone()).collect(),
        dirs: items.iter().map(|&(_, i)| dirs[i]).collect(),
    })
}

// ----- serialization -----

pub fn instance_to_json(inst: &CohInstance) -> Value {
    let arcs: Vec<Value> = inst
        .dual
        .arcs
        .iter()
        .enumerate()
        .map(|(i, ea)| {
            let kind = match &ea.kind {
                ExtArcKind::Dual(a) => json!({ "dual_of": a.0 }),
                ExtArcKind::Corner { vertex, route } => json!({
                    "corner_at": inst.g.vertex_name(*vertex),
                    "route": route.iter().map(|&(a, s)| json!([a.0, s])).collect::<Vec<_>>(),
                }),
            };
            json!({
                "from": ea.from.0,
                "to": ea.to.0,
                "kind": kind,
                "phi": inst.phi[i].render(),
                "admissible": match inst.admissible[i] {
                    AdmissibleSet::Generators => "generators",
                    AdmissibleSet::GeneratorsWithInverses => "generators-with-inverses",
                },
            })
        })
        .collect();
    json!({
        "kind": "labelling-instance",
        "r": inst.r,
        "removed_faces": [inst.dual.removed.0 .0, inst.dual.removed.1 .0],
        "seed_path": inst.seed_path.iter().map(|&(a, s)| json!([a.0, s])).collect::<Vec<_>>(),
        "arcs": arcs,
    })
}

pub fn labeling_to_json(labeling: &Labeling) -> Value {
    json!({
        "kind": "labelling",
        "psi": labeling.psi.iter().map(|w| w.render()).collect::<Vec<_>>(),
    })
}

pub fn labeling_from_json(v: &Value) -> Result<Labeling, CohError> {
    let words = v["psi"]
        .as_array()
        .ok_or_else(|| CohError::Unsupported("labelling JSON lacks psi".into()))?;
    let psi = words
        .iter()
        .map(|w| {
            w.as_str()
                .ok_or_else(|| CohError::Unsupported("psi entry is not a string".into()))
                .and_then(GroupWord::parse)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Labeling { psi })
}
