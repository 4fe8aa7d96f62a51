//! Combinatorial curves on the embedding and their crossing-sign bookkeeping.
//!
//! A curve is stored as the alternating sequence of faces it passes through
//! and the elements (arcs or vertices) it crosses transversally.  Signs are
//! taken relative to the direction of travel of the curve: an arc crossing
//! the curve from its left to its right contributes -1, right to left +1.
//! For a crossed vertex the sign set is read off the rotation, split into a
//! left and a right block by the entry and exit corners.

use crate::embed::{ArcId, Dart, EmbeddedDigraph, End, FaceId, VertexId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CrossDir {
    /// The crossed arc traverses the curve from the curve's left to its right.
    LR,
    /// Right to left.
    RL,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Crossing {
    Vertex(VertexId),
    Arc { arc: ArcId, dir: CrossDir },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve {
    /// Faces visited, one more entry than crossings.
    pub faces: Vec<FaceId>,
    pub crossings: Vec<Crossing>,
    pub closed: bool,
}

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("path does not cross the ring of the reference curve")]
    NotCrossingRing,
}

/// A subset of {-1, +1}.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct SignSet {
    pub minus: bool,
    pub plus: bool,
}

impl SignSet {
    pub const EMPTY: SignSet = SignSet { minus: false, plus: false };
    pub const MINUS: SignSet = SignSet { minus: true, plus: false };
    pub const PLUS: SignSet = SignSet { minus: false, plus: true };
    pub const BOTH: SignSet = SignSet { minus: true, plus: true };
    pub fn is_empty(self) -> bool {
        !self.minus && !self.plus
    }
    pub fn singleton(self) -> Option<i8> {
        match (self.minus, self.plus) {
            (true, false) => Some(-1),
            (false, true) => Some(1),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlternationSeq {
    pub entries: Vec<SignSet>,
    pub cyclic: bool,
}

impl Curve {
    pub fn open(faces: Vec<FaceId>, crossings: Vec<Crossing>) -> Self {
        Curve { faces, crossings, closed: false }
    }

    pub fn closed(faces: Vec<FaceId>, crossings: Vec<Crossing>) -> Self {
        Curve { faces, crossings, closed: true }
    }

    pub fn first_face(&self) -> FaceId {
        *self.faces.first().expect("curve has at least one face")
    }

    pub fn last_face(&self) -> FaceId {
        *self.faces.last().expect("curve has at least one face")
    }

    pub fn crossed_arcs(&self) -> impl Iterator<Item = ArcId> + '_ {
        self.crossings.iter().filter_map(|c| match c {
            Crossing::Arc { arc, .. } => Some(*arc),
            _ => None,
        })
    }

    pub fn crossed_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.crossings.iter().filter_map(|c| match c {
            Crossing::Vertex(v) => Some(*v),
            _ => None,
        })
    }

    /// Check incidence of every step against the embedding.
    pub fn validate(&self, g: &EmbeddedDigraph) -> Result<(), CurveError> {
        if self.faces.len() != self.crossings.len() + 1 {
            return Err(CurveError::InvalidCurve("face/crossing count mismatch".into()));
        }
        if self.closed && self.first_face() != self.last_face() {
            return Err(CurveError::InvalidCurve("closed curve must return to its face".into()));
        }
        for (i, c) in self.crossings.iter().enumerate() {
            let (fp, fn_) = (self.faces[i], self.faces[i + 1]);
            match *c {
                Crossing::Arc { arc, dir } => {
                    let (l, r) = (g.left_face(arc), g.right_face(arc));
                    let ok = match dir {
                        // arc crossing curve L->R means the curve passes from
                        // the arc's right face to its left face
                        CrossDir::LR => fp == r && fn_ == l,
                        CrossDir::RL => fp == l && fn_ == r,
                    };
                    if !ok {
                        return Err(CurveError::InvalidCurve(format!(
                            "arc `{}` crossing inconsistent with its side faces",
                            g.arc_name(arc)
                        )));
                    }
                }
                Crossing::Vertex(v) => {
                    if fp == fn_ {
                        return Err(CurveError::InvalidCurve(format!(
                            "degenerate touch of `{}` (entry face equals exit face)",
                            g.vertex_name(v)
                        )));
                    }
                    let wedges = g.faces_at_vertex(v);
                    if !wedges.contains(&fp) || !wedges.contains(&fn_) {
                        return Err(CurveError::InvalidCurve(format!(
                            "vertex `{}` not incident to entry/exit face",
                            g.vertex_name(v)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Crossing of `a` entered from face `f_from`, direction inferred from the
/// arc's side faces.
pub fn arc_crossing(
    g: &EmbeddedDigraph,
    a: ArcId,
    f_from: FaceId,
) -> Result<Crossing, CurveError> {
    if f_from == g.right_face(a) {
        Ok(Crossing::Arc { arc: a, dir: CrossDir::LR })
    } else if f_from == g.left_face(a) {
        Ok(Crossing::Arc { arc: a, dir: CrossDir::RL })
    } else {
        Err(CurveError::InvalidCurve(format!(
            "face f{} is not a side of arc `{}`",
            f_from.0,
            g.arc_name(a)
        )))
    }
}

/// Open curve through consecutive faces, crossing the given arcs in order.
pub fn curve_through(
    g: &EmbeddedDigraph,
    faces: Vec<FaceId>,
    arcs: &[ArcId],
) -> Result<Curve, CurveError> {
    if faces.len() != arcs.len() + 1 {
        return Err(CurveError::InvalidCurve("face/arc count mismatch".into()));
    }
    let mut crossings = Vec::with_capacity(arcs.len());
    for (i, &a) in arcs.iter().enumerate() {
        crossings.push(arc_crossing(g, a, faces[i])?);
    }
    let c = Curve::open(faces, crossings);
    c.validate(g)?;
    Ok(c)
}

/// Left and right block of darts at a crossed vertex.  Entering from the
/// corner of `f_prev` and leaving through the corner of `f_next`, the darts
/// swept clockwise from entry to exit lie to the curve's left, the rest to
/// its right.  If a face has several corners at the vertex the first one in
/// rotation order is used.
pub fn vertex_blocks(
    g: &EmbeddedDigraph,
    v: VertexId,
    f_prev: FaceId,
    f_next: FaceId,
) -> Result<(Vec<Dart>, Vec<Dart>), CurveError> {
    let rot = g.rotation_of(v);
    let wedges = g.faces_at_vertex(v);
    let i = wedges
        .iter()
        .position(|&f| f == f_prev)
        .ok_or_else(|| CurveError::InvalidCurve("entry face not at vertex".into()))?;
    let j = wedges
        .iter()
        .position(|&f| f == f_next)
        .ok_or_else(|| CurveError::InvalidCurve("exit face not at vertex".into()))?;
    if f_prev == f_next {
        return Err(CurveError::InvalidCurve("degenerate vertex touch".into()));
    }
    let n = rot.len();
    let mut left = Vec::new();
    let mut t = (i + 1) % n;
    loop {
        left.push(rot[t]);
        if t == j {
            break;
        }
        t = (t + 1) % n;
    }
    let mut right = Vec::new();
    let mut t = (j + 1) % n;
    loop {
        right.push(rot[t]);
        if t == i {
            break;
        }
        t = (t + 1) % n;
    }
    Ok((left, right))
}

fn vertex_sign_set(
    g: &EmbeddedDigraph,
    v: VertexId,
    f_prev: FaceId,
    f_next: FaceId,
) -> Result<SignSet, CurveError> {
    let (left, right) = vertex_blocks(g, v, f_prev, f_next)?;
    let enters = |block: &[Dart]| block.iter().any(|d| d.end == End::Head);
    let leaves = |block: &[Dart]| block.iter().any(|d| d.end == End::Tail);
    Ok(SignSet {
        minus: enters(&left) && leaves(&right),
        plus: enters(&right) && leaves(&left),
    })
}

/// The crossing-sign sequence of a curve.
pub fn cross_sets(g: &EmbeddedDigraph, c: &Curve) -> Result<AlternationSeq, CurveError> {
    c.validate(g)?;
    let mut entries = Vec::with_capacity(c.crossings.len());
    for (i, cr) in c.crossings.iter().enumerate() {
        entries.push(match *cr {
            Crossing::Arc { dir, .. } => match dir {
                CrossDir::LR => SignSet::MINUS,
                CrossDir::RL => SignSet::PLUS,
            },
            Crossing::Vertex(v) => vertex_sign_set(g, v, c.faces[i], c.faces[i + 1])?,
        });
    }
    Ok(AlternationSeq { entries, cyclic: c.closed })
}

fn linear_alternation(entries: &[SignSet]) -> u32 {
    let (mut best_plus, mut best_minus) = (0u32, 0u32);
    for s in entries {
        let np = if s.plus { best_plus.max(best_minus + 1) } else { best_plus };
        let nm = if s.minus { best_minus.max(best_plus + 1) } else { best_minus };
        best_plus = np;
        best_minus = nm;
    }
    best_plus.max(best_minus)
}

/// Length of the longest strictly alternating +-1 sequence embeddable into
/// the sign sets; for cyclic sequences the maximum over all cyclic shifts.
pub fn alternation(s: &AlternationSeq) -> u32 {
    if !s.cyclic || s.entries.len() <= 1 {
        return linear_alternation(&s.entries);
    }
    let n = s.entries.len();
    let mut best = 0;
    let mut rotated: Vec<SignSet> = Vec::with_capacity(n);
    for shift in 0..n {
        rotated.clear();
        rotated.extend_from_slice(&s.entries[shift..]);
        rotated.extend_from_slice(&s.entries[..shift]);
        best = best.max(linear_alternation(&rotated));
    }
    best
}

/// Circumvent every vertex crossing whose sign set is a strict singleton,
/// replacing it by a run of equal-signed arc crossings on one side of the
/// vertex.  Alternation is preserved exactly.
pub fn make_pretty(g: &EmbeddedDigraph, c: &Curve) -> Result<Curve, CurveError> {
    let before = alternation(&cross_sets(g, c)?);
    let mut faces = vec![c.faces[0]];
    let mut crossings = Vec::new();
    for (i, cr) in c.crossings.iter().enumerate() {
        let (fp, fn_) = (c.faces[i], c.faces[i + 1]);
        match *cr {
            Crossing::Arc { .. } => {
                crossings.push(*cr);
                faces.push(fn_);
            }
            Crossing::Vertex(v) => {
                let s = vertex_sign_set(g, v, fp, fn_)?;
                match s.singleton() {
                    None => {
                        crossings.push(*cr);
                        faces.push(fn_);
                    }
                    Some(sign) => {
                        let (left, right) = vertex_blocks(g, v, fp, fn_)?;
                        // Pick the side whose crossings all carry `sign`:
                        // passing on the left crosses entering arcs with -1
                        // and leaving arcs with +1; on the right, leaving
                        // arcs give -1 and entering arcs +1.
                        let left_ok = left.iter().all(|d| {
                            (d.end == End::Head) == (sign == -1)
                        });
                        let (block, go_left) = if left_ok { (&left, true) } else { (&right, false) };
                        debug_assert!(block.iter().all(|d| (d.end == End::Head) == ((sign == -1) == go_left)));
                        let dir = if sign == -1 { CrossDir::LR } else { CrossDir::RL };
                        if go_left {
                            // cross left-block darts clockwise from the entry
                            for (bi, d) in block.iter().enumerate() {
                                crossings.push(Crossing::Arc { arc: d.arc, dir });
                                let f = if bi + 1 == block.len() { fn_ } else { g.wedge_face(*d) };
                                faces.push(f);
                            }
                        } else {
                            // cross right-block darts counterclockwise from
                            // the entry: rot[i], rot[i-1], ..., rot[j+1]
                            for (bi, d) in block.iter().rev().enumerate() {
                                crossings.push(Crossing::Arc { arc: d.arc, dir });
                                let f = if bi + 1 == block.len() {
                                    fn_
                                } else {
                                    g.wedge_face(g.prev_clockwise(*d))
                                };
                                faces.push(f);
                            }
                        }
                    }
                }
            }
        }
    }
    let out = Curve { faces, crossings, closed: c.closed };
    out.validate(g)?;
    let after = alternation(&cross_sets(g, &out)?);
    debug_assert_eq!(before, after, "circumventing must preserve alternation");
    Ok(out)
}

/// Excise revisits so that every face, vertex and arc appears at most once.
/// For closed curves only internal revisits (not spanning the anchor) are
/// excised.  Alternation never increases.
pub fn simplify_curve(g: &EmbeddedDigraph, c: &Curve) -> Result<Curve, CurveError> {
    c.validate(g)?;
    let mut faces = c.faces.clone();
    let mut crossings = c.crossings.clone();
    // Repeated faces: continue from the last visit.
    'outer: loop {
        let hi = faces.len() - if c.closed { 1 } else { 0 };
        for i in 0..hi {
            for j in ((i + 1)..hi).rev() {
                if faces[i] == faces[j] {
                    faces.drain(i + 1..=j);
                    crossings.drain(i..j);
                    continue 'outer;
                }
            }
        }
        break;
    }
    // Repeated vertices: merge the first and last visit into one crossing.
    'verts: loop {
        for i in 0..crossings.len() {
            let v = match crossings[i] {
                Crossing::Vertex(v) => v,
                _ => continue,
            };
            for j in ((i + 1)..crossings.len()).rev() {
                if crossings[j] != Crossing::Vertex(v) {
                    continue;
                }
                if faces[i] == faces[j + 1] {
                    // The whole excursion through v can be dropped.
                    faces.drain(i + 1..=j + 1);
                    crossings.drain(i..=j);
                } else {
                    faces.drain(i + 1..=j);
                    crossings.drain(i..j);
                }
                continue 'verts;
            }
        }
        break;
    }
    let out = Curve { faces, crossings, closed: c.closed };
    out.validate(g)?;
    #[cfg(debug_assertions)]
    {
        let before = alternation(&cross_sets(g, c)?);
        let after = alternation(&cross_sets(g, &out)?);
        debug_assert!(after <= before, "subcurves never raise alternation");
    }
    Ok(out)
}

/// An open curve between two designated faces crossing arcs only.
#[derive(Clone, Debug)]
pub struct ReferenceCurve {
    pub curve: Curve,
}

impl ReferenceCurve {
    pub fn new(g: &EmbeddedDigraph, curve: Curve) -> Result<Self, CurveError> {
        curve.validate(g)?;
        if curve.closed {
            return Err(CurveError::InvalidCurve("reference curve must be open".into()));
        }
        if curve.crossings.iter().any(|c| matches!(c, Crossing::Vertex(_))) {
            return Err(CurveError::InvalidCurve("reference curve must avoid vertices".into()));
        }
        Ok(ReferenceCurve { curve })
    }
    pub fn f1(&self) -> FaceId {
        self.curve.first_face()
    }
    pub fn f2(&self) -> FaceId {
        self.curve.last_face()
    }
    /// Crossing directions per arc, possibly several per arc.
    pub fn crossings_of(&self, a: ArcId) -> Vec<CrossDir> {
        self.curve
            .crossings
            .iter()
            .filter_map(|c| match c {
                Crossing::Arc { arc, dir } if *arc == a => Some(*dir),
                _ => None,
            })
            .collect()
    }
}

/// Signed crossing count of a directed path with a reference curve,
/// traversing the path from the f1 side of the ring to the f2 side no matter
/// how its arcs are directed.  A crossing from the curve's left to its right
/// counts +1.
pub fn winding_number(
    g: &EmbeddedDigraph,
    path_arcs: &[ArcId],
    w: &ReferenceCurve,
) -> Result<i32, CurveError> {
    if path_arcs.is_empty() {
        return Err(CurveError::NotCrossingRing);
    }
    let start = g.tail(path_arcs[0]);
    let end = g.head(path_arcs[path_arcs.len() - 1]);
    let touches = |v: VertexId, f: FaceId| g.faces_at_vertex(v).contains(&f);
    let forward = if touches(start, w.f1()) && touches(end, w.f2()) {
        true
    } else if touches(start, w.f2()) && touches(end, w.f1()) {
        false
    } else {
        return Err(CurveError::NotCrossingRing);
    };
    let mut sum = 0i32;
    for &a in path_arcs {
        for dir in w.crossings_of(a) {
            // LR: the arc itself crosses W left to right.
            let s = match dir {
                CrossDir::LR => 1,
                CrossDir::RL => -1,
            };
            sum += if forward { s } else { -s };
        }
    }
    Ok(sum)
}

// ----- JSON interchange -----

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonStep {
    Face { face: String },
    Vertex { vertex: String },
    Arc { arc: String, dir: CrossDir },
}

pub fn curve_to_json(g: &EmbeddedDigraph, c: &Curve) -> String {
    let mut steps = Vec::new();
    for (i, f) in c.faces.iter().enumerate() {
        steps.push(JsonStep::Face { face: format!("f{}", f.0) });
        if let Some(cr) = c.crossings.get(i) {
            steps.push(match *cr {
                Crossing::Vertex(v) => JsonStep::Vertex { vertex: g.vertex_name(v).to_string() },
                Crossing::Arc { arc, dir } => JsonStep::Arc { arc: g.arc_name(arc).to_string(), dir },
            });
        }
    }
    serde_json::to_string(&steps).expect("serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn seq(entries: Vec<SignSet>, cyclic: bool) -> AlternationSeq {
        AlternationSeq { entries, cyclic }
    }

    #[test]
    fn alternation_examples() {
        use SignSet as S;
        assert_eq!(alternation(&seq(vec![S::PLUS, S::PLUS, S::MINUS], false)), 2);
        assert_eq!(alternation(&seq(vec![S::BOTH, S::BOTH, S::BOTH], false)), 3);
        assert_eq!(alternation(&seq(vec![], false)), 0);
        assert_eq!(alternation(&seq(vec![S::PLUS; 5], true)), 1);
        assert_eq!(alternation(&seq(vec![S::EMPTY, S::EMPTY], false)), 0);
        // wraparound matters for cyclic sequences
        assert_eq!(
            alternation(&seq(vec![S::MINUS, S::PLUS, S::PLUS, S::MINUS], true)),
            3
        );
        assert_eq!(
            alternation(&seq(vec![S::MINUS, S::PLUS, S::PLUS, S::MINUS], false)),
            3
        );
    }

    #[test]
    fn ring2_crossing_curve() {
        // inner disc face -> annulus -> outer face, crossing one arc of each
        // triangle; the triangles have opposite orientation so the two signs
        // differ and the alternation is 2.
        let g = fixtures::ring2();
        let c1 = g.arc_by_name("c1").unwrap();
        let b1 = g.arc_by_name("b1").unwrap();
        let disc = g.right_face(c1);
        let annulus = g.left_face(c1);
        let outer = g.outer_face();
        assert_eq!(g.right_face(b1), outer);
        assert_eq!(g.left_face(b1), annulus);
        let c = Curve::open(
            vec![disc, annulus, outer],
            vec![
                Crossing::Arc { arc: c1, dir: CrossDir::LR },
                Crossing::Arc { arc: b1, dir: CrossDir::RL },
            ],
        );
        let s = cross_sets(&g, &c).unwrap();
        assert_eq!(s.entries, vec![SignSet::MINUS, SignSet::PLUS]);
        assert_eq!(alternation(&s), 2);
    }

    /// Square with an arc poking inward (entering the top vertex) and one
    /// poking outward (leaving it).
    fn crossed_square() -> crate::embed::EmbeddedDigraph {
        let mut d = fixtures::Drawing::new();
        d.vertex("a", 0.0, 1.0)
            .vertex("b", 1.0, 0.0)
            .vertex("c", 0.0, -1.0)
            .vertex("d", -1.0, 0.0)
            .vertex("p", 0.0, 0.5)
            .vertex("q", 0.0, 2.0)
            .arc("ab", "a", "b")
            .arc("bc", "b", "c")
            .arc("cd", "c", "d")
            .arc("da", "d", "a")
            .arc("x", "p", "a")
            .arc("y", "a", "q");
        d.build(false).unwrap()
    }

    #[test]
    fn vertex_crossing_sign() {
        let g = crossed_square();
        let a = g.vertex_by_name("a").unwrap();
        let ab = g.arc_by_name("ab").unwrap();
        let inner = g.right_face(ab); // square drawn clockwise
        let outer = g.outer_face();
        let s = vertex_sign_set(&g, a, inner, outer).unwrap();
        // arcs enter from the left (x, da) and leave to the right (ab)
        assert_eq!(s, SignSet::MINUS);
        // reversing the direction of travel swaps the blocks and flips the sign
        let s = vertex_sign_set(&g, a, outer, inner).unwrap();
        assert_eq!(s, SignSet::PLUS);
    }

    #[test]
    fn sink_vertex_is_silent() {
        // q is a sink of degree 1: a curve through a degree-1 vertex is not
        // representable (single face on both sides), so use c of the square
        // after reversing nothing: c has in-arc bc and out-arc cd; make a
        // sink variant instead.
        let mut d = fixtures::Drawing::new();
        d.vertex("a", 0.0, 1.0)
            .vertex("b", 1.0, 0.0)
            .vertex("c", 0.0, -1.0)
            .vertex("d", -1.0, 0.0)
            .vertex("p", 0.0, 0.5)
            .vertex("q", 0.0, 2.0)
            .arc("ab", "a", "b")
            .arc("bc", "b", "c")
            .arc("cd", "c", "d")
            .arc("da", "d", "a")
            .arc("x", "p", "a")
            .arc("y", "q", "a"); // both extra arcs now enter a: a is a sink locally
        let g = d.build(false).unwrap();
        let a = g.vertex_by_name("a").unwrap();
        let ab = g.arc_by_name("ab").unwrap();
        let inner = g.right_face(ab);
        let outer = g.outer_face();
        // a still has leaving arcs (ab) — the sign needs an entering arc on
        // one side and a leaving arc on the other.  Check a genuinely silent
        // split: entry/exit chosen so that one block is all-entering and the
        // other carries no leaving arc in the right combination.
        let s = vertex_sign_set(&g, a, inner, outer).unwrap();
        assert_eq!(s, SignSet::MINUS); // da, x, y enter left; ab leaves right
    }

    #[test]
    fn make_pretty_circumvents() {
        let g = crossed_square();
        let a = g.vertex_by_name("a").unwrap();
        let ab = g.arc_by_name("ab").unwrap();
        let inner = g.right_face(ab);
        let outer = g.outer_face();
        let c = Curve::open(vec![inner, outer], vec![Crossing::Vertex(a)]);
        let before = alternation(&cross_sets(&g, &c).unwrap());
        let p = make_pretty(&g, &c).unwrap();
        assert!(p.crossed_vertices().next().is_none());
        assert_eq!(alternation(&cross_sets(&g, &p).unwrap()), before);
        // the right block is the single leaving arc ab: one crossing
        assert_eq!(p.crossings.len(), 1);
        assert_eq!(p.crossed_arcs().next(), Some(ab));
    }

    #[test]
    fn simplify_excises_detour() {
        let g = fixtures::onion(3);
        // walk out and back and out again across ring 2
        let a = g.arc_by_name("ring2_0").unwrap();
        let (l, r) = (g.left_face(a), g.right_face(a));
        let c = Curve::open(
            vec![r, l, r, l],
            vec![
                Crossing::Arc { arc: a, dir: CrossDir::LR },
                Crossing::Arc { arc: a, dir: CrossDir::RL },
                Crossing::Arc { arc: a, dir: CrossDir::LR },
            ],
        );
        let s = simplify_curve(&g, &c).unwrap();
        assert_eq!(s.crossings.len(), 1);
        assert_eq!(s.faces, vec![r, l]);
    }

    #[test]
    fn winding_examples() {
        let g = fixtures::join_ring(4);
        // reference curve crossing only the radial r1, anchored at the two
        // annulus faces flanking it
        let r1 = g.arc_by_name("r1").unwrap();
        let (l, r) = (g.left_face(r1), g.right_face(r1));
        let w = ReferenceCurve::new(
            &g,
            Curve::open(vec![r, l], vec![Crossing::Arc { arc: r1, dir: CrossDir::LR }]),
        )
        .unwrap();
        // r1 itself connects w's end faces (its endpoints lie on both) and
        // crosses w once, left to right
        assert_eq!(winding_number(&g, &[r1], &w).unwrap().abs(), 1);
        // a path with endpoints away from the ring is rejected
        let b1 = g.arc_by_name("b1").unwrap();
        let near = g.faces_at_vertex(g.tail(b1)).contains(&l)
            || g.faces_at_vertex(g.tail(b1)).contains(&r);
        if !near {
            assert!(matches!(
                winding_number(&g, &[b1], &w),
                Err(CurveError::NotCrossingRing)
            ));
        }
    }
}
