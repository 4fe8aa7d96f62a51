//! Bundles: maximal chains of parallel arcs running between two components
//! of a decomposition, and the word machinery built on top of them — bundle
//! words of paths, spiral detection and cutting, reference curves across ring
//! closures, and minimality diagnostics for solutions.

use crate::curves::{arc_crossing, CrossDir, Crossing, Curve, CurveError, ReferenceCurve};
use crate::decomposition::{ComponentKind, Decomposition};
use crate::embed::{ArcId, Dart, EmbeddedDigraph, Enclosure, End, FaceId, GraphError, VertexId};
use crate::rings::{cut_by_noose, RingError};
use crate::solver::{minimal_solution_by, SearchBudget, Solution, SolverError};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BundleError {
    #[error("word does not satisfy the non-nesting condition")]
    NestedInput,
    #[error("a spiral letter is a bundle incident to a ring component")]
    RingBundleInSpiral,
    #[error("no dual route from the outer face to the target region")]
    NoDualRoute,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// How a bundle relates to the ring structure of the decomposition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BundleLevel {
    /// Touches neither a ring component nor an isolating disc.
    Normal,
    /// Touches the ring component with the given index.
    Ring(u32),
    /// Touches a disc that appears in some isolation record.
    Isolation,
}

/// A maximal chain of arcs between the same ordered pair of components such
/// that consecutive arcs bound a common empty face (the strip between them
/// contains no third component and no further arcs).
#[derive(Clone, Debug)]
pub struct Bundle {
    /// Chain order: `left_face(arcs[i]) == right_face(arcs[i+1])`.
    pub arcs: Vec<ArcId>,
    pub from: usize,
    pub to: usize,
    pub level: BundleLevel,
    /// The chain closes up on itself (the last arc's strip leads back to the
    /// first).
    pub cyclic: bool,
}

#[derive(Clone, Debug)]
pub struct BundleSet {
    pub bundles: Vec<Bundle>,
    pub arc_to_bundle: BTreeMap<ArcId, usize>,
}

impl BundleSet {
    pub fn len(&self) -> usize {
        self.bundles.len()
    }
    pub fn is_empty(&self) -> bool {
        self.bundles.is_empty()
    }
}

fn component_of(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
) -> Result<Vec<usize>, BundleError> {
    let mut comp_of = vec![usize::MAX; g.vertex_count()];
    for (ci, c) in decomp.components.iter().enumerate() {
        for &v in &c.vertices {
            if comp_of[v.0 as usize] != usize::MAX {
                return Err(BundleError::Unsupported(format!(
                    "vertex `{}` lies in two components",
                    g.vertex_name(v)
                )));
            }
            comp_of[v.0 as usize] = ci;
        }
    }
    if let Some(v) = comp_of.iter().position(|&c| c == usize::MAX) {
        return Err(BundleError::Unsupported(format!(
            "vertex `{}` lies in no component",
            g.vertex_name(VertexId(v as u32))
        )));
    }
    Ok(comp_of)
}

/// Group the arcs running between different components into bundles.
///
/// Arc `b` immediately follows arc `a` in a bundle when both run from the
/// same component to the same component, `left_face(a) == right_face(b)`,
/// and that face is empty: a single boundary walk made of `a`, `b` and arcs
/// owned by the two components only.
pub fn recognize_bundles(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
) -> Result<BundleSet, BundleError> {
    let comp_of = component_of(g, decomp)?;
    let pair = |a: ArcId| (comp_of[g.tail(a).0 as usize], comp_of[g.head(a).0 as usize]);
    let cross: Vec<ArcId> = g.arc_ids().filter(|&a| pair(a).0 != pair(a).1).collect();
    let is_cross: BTreeSet<ArcId> = cross.iter().copied().collect();

    let mut succ: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    let mut pred: BTreeMap<ArcId, ArcId> = BTreeMap::new();
    for &a in &cross {
        let f = g.left_face(a);
        if f == g.right_face(a) || f == g.outer_face() {
            // both sides one face, or the unbounded face: no strip
            continue;
        }
        let face = g.face(f);
        if face.walks.len() != 1 {
            continue; // another component floats inside the strip
        }
        let (from, to) = pair(a);
        let mut cands: Vec<ArcId> = Vec::new();
        let mut empty = true;
        for fa in g.face_arcs(f) {
            if fa == a {
                continue;
            }
            if is_cross.contains(&fa) {
                if pair(fa) == (from, to) && g.right_face(fa) == f {
                    cands.push(fa);
                } else {
                    empty = false;
                    break;
                }
            } else {
                let c = comp_of[g.tail(fa).0 as usize];
                if c != from && c != to {
                    empty = false;
                    break;
                }
            }
        }
        if empty && cands.len() == 1 {
            succ.insert(a, cands[0]);
            pred.insert(cands[0], a);
        }
    }

    let mut bundles: Vec<Bundle> = Vec::new();
    let mut placed: BTreeSet<ArcId> = BTreeSet::new();
    let mut emit = |start: ArcId, cyclic: bool, placed: &mut BTreeSet<ArcId>| {
        let mut arcs = vec![start];
        placed.insert(start);
        let mut cur = start;
        while let Some(&nxt) = succ.get(&cur) {
            if nxt == start {
                break;
            }
            arcs.push(nxt);
            placed.insert(nxt);
            cur = nxt;
        }
        let (from, to) = pair(start);
        bundles.push(Bundle { arcs, from, to, level: BundleLevel::Normal, cyclic });
    };
    // open chains first, from their unique head
    for &a in &cross {
        if !pred.contains_key(&a) {
            emit(a, false, &mut placed);
        }
    }
    // whatever remains sits on a cyclic chain
    for &a in &cross {
        if !placed.contains(&a) {
            emit(a, true, &mut placed);
        }
    }

    let iso_discs: BTreeSet<usize> =
        decomp.isolation.values().flatten().map(|r| r.disc).collect();
    for b in &mut bundles {
        let ends = [b.from, b.to];
        if ends.iter().any(|c| iso_discs.contains(c)) {
            b.level = BundleLevel::Isolation;
        } else if let Some(&r) = ends
            .iter()
            .find(|c| matches!(decomp.components[**c].kind, ComponentKind::Ring))
        {
            b.level = BundleLevel::Ring(r as u32);
        }
    }

    let mut arc_to_bundle = BTreeMap::new();
    for (i, b) in bundles.iter().enumerate() {
        for &a in &b.arcs {
            arc_to_bundle.insert(a, i);
        }
    }
    Ok(BundleSet { bundles, arc_to_bundle })
}

/// The sequence of bundle indices a path crosses, in path order.  Arcs owned
/// by a single component contribute nothing.
pub fn bundle_word(bundles: &BundleSet, path: &[ArcId]) -> Vec<usize> {
    path.iter().filter_map(|a| bundles.arc_to_bundle.get(a).copied()).collect()
}

/// For each arc of the bundle, in chain order, the 1-based index of the
/// solution path using it (unused arcs are skipped).
pub fn bundle_profile(bundles: &BundleSet, bundle: usize, sol: &Solution) -> Vec<usize> {
    let mut owner: BTreeMap<ArcId, usize> = BTreeMap::new();
    for (i, p) in sol.paths.iter().enumerate() {
        for &a in p {
            owner.insert(a, i + 1);
        }
    }
    bundles.bundles[bundle].arcs.iter().filter_map(|a| owner.get(a).copied()).collect()
}

// ----- word machinery -----

/// Non-nesting: for every two occurrences of a letter, `w = w1 x w2 x w3`,
/// any letter occurring both in `w1` and `w3` also occurs in `w2`.
pub fn is_nonnested<T: PartialEq>(w: &[T]) -> bool {
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] != w[j] {
                continue;
            }
            for b in 0..i {
                let x = &w[b];
                if w[j + 1..].contains(x) && !w[i + 1..j].contains(x) {
                    return false;
                }
            }
        }
    }
    true
}

/// A word written as u_1^{r_1} u_2^{r_2} … with each u_j repeat-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpiralDecomposition<T> {
    pub terms: Vec<(Vec<T>, usize)>,
}

impl<T: Clone> SpiralDecomposition<T> {
    pub fn concat(&self) -> Vec<T> {
        let mut out = Vec::new();
        for (u, r) in &self.terms {
            for _ in 0..*r {
                out.extend(u.iter().cloned());
            }
        }
        out
    }
}

/// Decompose a non-nested word into few powers of repeat-free blocks:
/// greedily take the longest repeat-free prefix, then merge equal
/// consecutive blocks into powers.  The number of terms is at most twice the
/// alphabet size.
pub fn spiral_decompose<T: Clone + Ord>(
    w: &[T],
) -> Result<SpiralDecomposition<T>, BundleError> {
    if !is_nonnested(w) {
        return Err(BundleError::NestedInput);
    }
    let mut blocks: Vec<Vec<T>> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut seen = BTreeSet::new();
        let mut j = i;
        while j < w.len() && seen.insert(w[j].clone()) {
            j += 1;
        }
        blocks.push(w[i..j].to_vec());
        i = j;
    }
    let mut terms: Vec<(Vec<T>, usize)> = Vec::new();
    for b in blocks {
        match terms.last_mut() {
            Some((u, r)) if *u == b => *r += 1,
            _ => terms.push((b, 1)),
        }
    }
    let alphabet: BTreeSet<&T> = w.iter().collect();
    if terms.len() > 2 * alphabet.len().max(1) {
        return Err(BundleError::Unsupported(format!(
            "{} spiral terms exceed twice the alphabet size {}",
            terms.len(),
            alphabet.len()
        )));
    }
    Ok(SpiralDecomposition { terms })
}

/// All spirals of a word: index pairs (i, j), i < j, with w[i] == w[j] and
/// all letters strictly between pairwise distinct and different from w[i].
pub fn find_spirals<T: PartialEq>(w: &[T]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        'next: for j in i + 1..w.len() {
            if w[i] != w[j] {
                continue;
            }
            for p in i + 1..j {
                for q in p + 1..=j {
                    if (p, q) != (i, j) && w[p] == w[q] {
                        continue 'next;
                    }
                }
                if w[p] == w[i] {
                    continue 'next;
                }
            }
            out.push((i, j));
        }
    }
    out
}

// ----- spiral cuts -----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpiralSide {
    Inside,
    Outside,
}

#[derive(Clone, Debug)]
pub struct SpiralCut {
    pub curve: Curve,
    /// Side per bundle index, for bundles without a letter in the spiral
    /// subword whose endpoints all fall on one side.
    pub sides: BTreeMap<usize, SpiralSide>,
}

/// Walk along one side of a path segment: starting from `f0`, at each
/// intermediate vertex sweep the rotation from the incoming head-dart to the
/// outgoing tail-dart, crossing every dart in between.  `clockwise` sweeps
/// visit the segment's left side.
fn hug_side(
    g: &EmbeddedDigraph,
    seg: &[ArcId],
    f0: FaceId,
    clockwise: bool,
) -> Result<(Vec<FaceId>, Vec<Crossing>), CurveError> {
    let mut faces = vec![f0];
    let mut crossings = Vec::new();
    let mut cur = f0;
    for t in 0..seg.len() - 1 {
        let d_in = Dart { arc: seg[t], end: End::Head };
        let d_out = Dart { arc: seg[t + 1], end: End::Tail };
        let step = |d: Dart| if clockwise { g.next_clockwise(d) } else { g.prev_clockwise(d) };
        let mut d = step(d_in);
        let mut guard = 0;
        while d != d_out {
            let c = arc_crossing(g, d.arc, cur)?;
            let Crossing::Arc { arc, dir } = c else { unreachable!() };
            cur = match dir {
                CrossDir::LR => g.left_face(arc),
                CrossDir::RL => g.right_face(arc),
            };
            crossings.push(c);
            faces.push(cur);
            d = step(d);
            guard += 1;
            if guard > g.arc_count() * 2 {
                return Err(CurveError::InvalidCurve("sweep does not close".into()));
            }
        }
    }
    Ok((faces, crossings))
}

/// Cut a spiral of a path: a closed curve hugging one side of the path
/// between the two occurrences of the repeated bundle and closing up through
/// that bundle's strip.  Returns the curve together with the side (inside or
/// outside the cut) of every bundle not involved in the spiral.
pub fn spiral_cut(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    bundles: &BundleSet,
    path: &[ArcId],
    spiral: (usize, usize),
) -> Result<SpiralCut, BundleError> {
    let cross_pos: Vec<usize> = path
        .iter()
        .enumerate()
        .filter(|(_, a)| bundles.arc_to_bundle.contains_key(a))
        .map(|(i, _)| i)
        .collect();
    let word = bundle_word(bundles, path);
    let (u, v) = spiral;
    if u >= v || v >= word.len() || word[u] != word[v] {
        return Err(BundleError::Unsupported("indices do not mark a spiral".into()));
    }
    for &letter in &word[u..=v] {
        let b = &bundles.bundles[letter];
        for c in [b.from, b.to] {
            if matches!(decomp.components[c].kind, ComponentKind::Ring) {
                return Err(BundleError::RingBundleInSpiral);
            }
        }
    }
    let bidx = word[u];
    let b = &bundles.bundles[bidx];
    if b.cyclic {
        return Err(BundleError::Unsupported("spiral through a cyclic bundle".into()));
    }
    let p_u = path[cross_pos[u]];
    let p_v = path[cross_pos[v]];
    let alpha = b.arcs.iter().position(|&a| a == p_u).unwrap();
    let beta = b.arcs.iter().position(|&a| a == p_v).unwrap();
    let seg = &path[cross_pos[u]..=cross_pos[v]];

    // Hug the side from which the return through the bundle strip can reach
    // the start face again: left (clockwise sweeps) when the second
    // occurrence sits earlier in the chain, right otherwise.
    let (f0, clockwise, ret): (FaceId, bool, Vec<ArcId>) = if alpha > beta {
        (g.left_face(p_u), true, b.arcs[beta + 1..=alpha].to_vec())
    } else {
        (g.right_face(p_u), false, b.arcs[alpha..beta].iter().rev().copied().collect())
    };
    let (mut faces, mut crossings) = hug_side(g, seg, f0, clockwise)?;
    for a in ret {
        let c = arc_crossing(g, a, *faces.last().unwrap())?;
        let Crossing::Arc { arc, dir } = c else { unreachable!() };
        let nxt = match dir {
            CrossDir::LR => g.left_face(arc),
            CrossDir::RL => g.right_face(arc),
        };
        crossings.push(c);
        faces.push(nxt);
    }
    if *faces.last().unwrap() != f0 {
        return Err(BundleError::Unsupported("cut does not close up".into()));
    }
    let curve = Curve::closed(faces, crossings);
    curve.validate(g)?;
    let cut = cut_by_noose(g, &curve)?;

    // Which side is "inside": the cut hugs one side of the path segment and
    // closes through the bundle strip, so the segment's interior vertices
    // always sit on the enclosed side.  (The cut may pass through the outer
    // face, whose vertices then land on both sides.)
    let crossed: BTreeSet<ArcId> = curve.crossed_arcs().collect();
    let inner_class = seg
        .windows(2)
        .map(|p| g.head(p[0]))
        .find_map(|v| cut.vertex_class[v.0 as usize])
        .ok_or_else(|| {
            BundleError::Unsupported("no segment vertex with a definite side".into())
        })?;
    let in_span: BTreeSet<usize> = word[u..=v].iter().copied().collect();
    let mut sides = BTreeMap::new();
    'bundles: for (i, bb) in bundles.bundles.iter().enumerate() {
        if in_span.contains(&i) || bb.arcs.iter().any(|a| crossed.contains(a)) {
            continue;
        }
        let mut cls: Option<usize> = None;
        for &a in &bb.arcs {
            for v in [g.tail(a), g.head(a)] {
                match (cls, cut.vertex_class[v.0 as usize]) {
                    (_, None) => continue 'bundles,
                    (None, Some(c)) => cls = Some(c),
                    (Some(p), Some(c)) if p != c => continue 'bundles,
                    _ => {}
                }
            }
        }
        if let Some(c) = cls {
            let side = if c == inner_class { SpiralSide::Inside } else { SpiralSide::Outside };
            sides.insert(i, side);
        }
    }
    Ok(SpiralCut { curve, sides })
}

// ----- reference curves across ring closures -----

/// The boundary cycles of a ring's level-λ closure: the outermost cycle of
/// the level +λ isolation record and the innermost cycle of the level −λ
/// record, with their enclosures.
pub(crate) struct ClosureGeom {
    pub(crate) outer_cycle: Vec<ArcId>,
    pub(crate) outer_enc: Enclosure,
    pub(crate) inner_cycle: Vec<ArcId>,
    pub(crate) inner_enc: Enclosure,
}

pub(crate) fn closure_geom(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    ring: usize,
    level: u32,
) -> Result<ClosureGeom, BundleError> {
    let records = decomp
        .isolation
        .get(&ring)
        .ok_or_else(|| BundleError::Unsupported(format!("component {ring} has no records")))?;
    let lvl = level as i32;
    let plus = records.iter().find(|r| r.level == lvl);
    let minus = records.iter().find(|r| r.level == -lvl);
    let (Some(plus), Some(minus)) = (plus, minus) else {
        return Err(BundleError::Unsupported(format!("no level ±{level} records")));
    };
    let outer_cycle = plus.cycles.cycles.last().unwrap().clone();
    let inner_cycle = minus.cycles.cycles.first().unwrap().clone();
    let outer_enc = g.enclosed(&outer_cycle)?;
    let inner_enc = g.enclosed(&inner_cycle)?;
    Ok(ClosureGeom { outer_cycle, outer_enc, inner_cycle, inner_enc })
}

impl ClosureGeom {
    /// Strictly inside the inner boundary (the deep side of the closure).
    pub(crate) fn inside_inner(&self, g: &EmbeddedDigraph, v: VertexId) -> bool {
        g.encloses_vertex(&self.inner_enc, &self.inner_cycle, v)
    }
    /// In the closure: under the outer boundary but not under the inner one.
    pub(crate) fn contains(&self, g: &EmbeddedDigraph, v: VertexId) -> bool {
        g.encloses_vertex(&self.outer_enc, &self.outer_cycle, v) && !self.inside_inner(g, v)
    }
}

enum RouteStep {
    Arc(ArcId),
    Bundle(usize, bool), // forward = entered at right_face(arcs[0])
}

/// A curve from just outside the ring's level-λ closure to just inside its
/// inner boundary, crossing every multi-arc bundle it meets either fully or
/// not at all and crossing each isolation cycle at most once.  Built as the
/// shortest dual route from the outer face, clipped to the requested level;
/// curves for smaller levels of the same ring are subcurves of it.
pub fn reference_curve(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    bundles: &BundleSet,
    ring: usize,
    level: u32,
) -> Result<ReferenceCurve, BundleError> {
    if level == 0 {
        return Err(BundleError::Unsupported("level must be at least 1".into()));
    }
    let records = decomp
        .isolation
        .get(&ring)
        .ok_or_else(|| BundleError::Unsupported(format!("component {ring} has no records")))?;
    let deepest = records
        .iter()
        .filter(|r| r.level < 0)
        .min_by_key(|r| r.level)
        .ok_or_else(|| BundleError::Unsupported("no negative-level records".into()))?;
    let target = g.enclosed(deepest.cycles.cycles.first().unwrap())?;

    // Shortest dual route from the outer face, where a multi-arc bundle can
    // only be traversed whole, strip by strip.
    let nf = g.face_count();
    let mut parent: Vec<Option<(FaceId, RouteStep)>> = (0..nf).map(|_| None).collect();
    let mut seen = vec![false; nf];
    let start = g.outer_face();
    seen[start.0 as usize] = true;
    let mut queue = VecDeque::from([start]);
    let mut goal: Option<FaceId> = None;
    while let Some(f) = queue.pop_front() {
        if target.faces.contains(&f) {
            goal = Some(f);
            break;
        }
        let push = |to: FaceId,
                        step: RouteStep,
                        seen: &mut Vec<bool>,
                        parent: &mut Vec<Option<(FaceId, RouteStep)>>,
                        queue: &mut VecDeque<FaceId>| {
            if !seen[to.0 as usize] {
                seen[to.0 as usize] = true;
                parent[to.0 as usize] = Some((f, step));
                queue.push_back(to);
            }
        };
        for a in g.face_arcs(f) {
            if bundles.arc_to_bundle.contains_key(&a) {
                continue; // bundle arcs only move the route as whole bundles
            }
            let to = if g.left_face(a) == f { g.right_face(a) } else { g.left_face(a) };
            if to == f {
                continue;
            }
            push(to, RouteStep::Arc(a), &mut seen, &mut parent, &mut queue);
        }
        for (i, b) in bundles.bundles.iter().enumerate() {
            if b.cyclic {
                continue;
            }
            let entry = g.right_face(b.arcs[0]);
            let exit = g.left_face(*b.arcs.last().unwrap());
            if entry == exit {
                continue;
            }
            if entry == f {
                push(exit, RouteStep::Bundle(i, true), &mut seen, &mut parent, &mut queue);
            } else if exit == f {
                push(entry, RouteStep::Bundle(i, false), &mut seen, &mut parent, &mut queue);
            }
        }
    }
    let goal = goal.ok_or(BundleError::NoDualRoute)?;

    // Reconstruct and expand the route into faces and crossings.
    let mut steps: Vec<RouteStep> = Vec::new();
    let mut f = goal;
    while f != start {
        let (pf, step) = parent[f.0 as usize].take().unwrap();
        steps.push(step);
        f = pf;
    }
    steps.reverse();
    let mut faces = vec![start];
    let mut crossings: Vec<Crossing> = Vec::new();
    for step in &steps {
        let arcs: Vec<ArcId> = match step {
            RouteStep::Arc(a) => vec![*a],
            RouteStep::Bundle(i, true) => bundles.bundles[*i].arcs.clone(),
            RouteStep::Bundle(i, false) => {
                bundles.bundles[*i].arcs.iter().rev().copied().collect()
            }
        };
        for a in arcs {
            let c = arc_crossing(g, a, *faces.last().unwrap())?;
            let Crossing::Arc { arc, dir } = c else { unreachable!() };
            let nxt = match dir {
                CrossDir::LR => g.left_face(arc),
                CrossDir::RL => g.right_face(arc),
            };
            crossings.push(c);
            faces.push(nxt);
        }
    }

    // Clip to the requested level: start just before the route passes under
    // the level +λ outer boundary, end as it first dips under the level −λ
    // inner boundary.
    let geom = closure_geom(g, decomp, ring, level)?;
    let first_in = |enc: &Enclosure| faces.iter().position(|f| enc.faces.contains(f));
    let enter = first_in(&geom.outer_enc)
        .ok_or_else(|| BundleError::Unsupported("route misses the outer boundary".into()))?;
    let end = first_in(&geom.inner_enc)
        .ok_or_else(|| BundleError::Unsupported("route misses the inner boundary".into()))?;
    if enter == 0 || enter >= end {
        return Err(BundleError::Unsupported("outer face already under the closure".into()));
    }
    let from = enter - 1;
    let sub = Curve::open(faces[from..=end].to_vec(), crossings[from..end].to_vec());

    // Each isolation cycle of this ring is crossed at most once: the route
    // descends monotonically, it never wanders inside an isolating disc.
    for r in records {
        for cyc in &r.cycles.cycles {
            let cyc: BTreeSet<ArcId> = cyc.iter().copied().collect();
            let hits = sub.crossed_arcs().filter(|a| cyc.contains(a)).count();
            if hits > 1 {
                return Err(BundleError::Unsupported(
                    "route crosses an isolation cycle more than once".into(),
                ));
            }
        }
    }
    Ok(ReferenceCurve::new(g, sub)?)
}

// ----- ring analysis -----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RunKind {
    /// Enters and leaves the closure on different sides.
    Passage { winding: i32 },
    /// Enters and leaves on the same side.
    Visitor,
}

/// A path's bundle word outside a ring closure, with one integer hole per
/// passage: p_0 w_1 p_1 … w_m p_m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BundleWordWithHoles {
    pub words: Vec<Vec<usize>>,
    pub windings: Vec<i32>,
}

#[derive(Clone, Debug)]
pub struct PathRingReport {
    pub runs: Vec<RunKind>,
    pub word: BundleWordWithHoles,
}

#[derive(Clone, Debug)]
pub struct RingAnalysis {
    pub per_path: Vec<PathRingReport>,
    pub passages: usize,
    pub visitors: usize,
}

/// Arcs running inside an isolating disc component.  Crossings of these with
/// a reference curve do not count towards passage windings: isolation depth
/// must not shift the measurement between levels.
fn disc_internal_arcs(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
) -> Result<BTreeSet<ArcId>, BundleError> {
    let comp_of = component_of(g, decomp)?;
    let iso_discs: BTreeSet<usize> =
        decomp.isolation.values().flatten().map(|r| r.disc).collect();
    Ok(g.arc_ids()
        .filter(|&a| {
            let (t, h) = (comp_of[g.tail(a).0 as usize], comp_of[g.head(a).0 as usize]);
            t == h && iso_discs.contains(&t)
        })
        .collect())
}

fn path_vertices(g: &EmbeddedDigraph, path: &[ArcId]) -> Vec<VertexId> {
    let mut vs = vec![g.tail(path[0])];
    vs.extend(path.iter().map(|&a| g.head(a)));
    vs
}

/// Maximal runs of path vertex indices inside the closure, with a passage
/// flag (sides of the neighbouring outside vertices differ).
fn scan_runs(
    g: &EmbeddedDigraph,
    geom: &ClosureGeom,
    verts: &[VertexId],
) -> Result<Vec<(usize, usize, bool)>, BundleError> {
    if geom.contains(g, verts[0]) || geom.contains(g, *verts.last().unwrap()) {
        return Err(BundleError::Unsupported("path endpoint inside the closure".into()));
    }
    let mut runs = Vec::new();
    let mut i = 0;
    while i < verts.len() {
        if !geom.contains(g, verts[i]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j + 1 < verts.len() && geom.contains(g, verts[j + 1]) {
            j += 1;
        }
        let before = geom.inside_inner(g, verts[i - 1]);
        let after = geom.inside_inner(g, verts[j + 1]);
        runs.push((i, j, before != after));
        i = j + 1;
    }
    Ok(runs)
}

/// Analyse a solution against one ring at one level: classify every maximal
/// stay inside the closure as a passage or a visitor, measure passage
/// windings against the reference curve, and condense each path into its
/// bundle word with holes.
pub fn ring_analysis(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    bundles: &BundleSet,
    ring: usize,
    level: u32,
    w: &ReferenceCurve,
    sol: &Solution,
) -> Result<RingAnalysis, BundleError> {
    let geom = closure_geom(g, decomp, ring, level)?;
    let excluded = disc_internal_arcs(g, decomp)?;
    let mut per_path = Vec::new();
    let mut passages = 0;
    let mut visitors = 0;
    for path in &sol.paths {
        let verts = path_vertices(g, path);
        let runs = scan_runs(g, &geom, &verts)?;
        let mut kinds = Vec::new();
        let mut words = vec![Vec::new()];
        let mut windings = Vec::new();
        // Arc t joins verts[t] and verts[t+1]; it belongs to a run's hole if
        // either endpoint is inside the closure.
        let run_of = |t: usize| {
            runs.iter().position(|&(i, j, _)| (t + 1 >= i && t + 1 <= j) || (t >= i && t <= j))
        };
        let mut cur_run: Option<usize> = None;
        for (t, &a) in path.iter().enumerate() {
            match run_of(t) {
                Some(r) => {
                    if cur_run != Some(r) {
                        cur_run = Some(r);
                        if runs[r].2 {
                            // passage: open a hole
                            let mut wind = 0i32;
                            for tt in t..path.len() {
                                if run_of(tt) != Some(r) {
                                    break;
                                }
                                if excluded.contains(&path[tt]) {
                                    continue;
                                }
                                for dir in w.crossings_of(path[tt]) {
                                    wind += match dir {
                                        CrossDir::LR => 1,
                                        CrossDir::RL => -1,
                                    };
                                }
                            }
                            windings.push(wind);
                            words.push(Vec::new());
                        }
                    }
                }
                None => {
                    cur_run = None;
                    if let Some(&b) = bundles.arc_to_bundle.get(&a) {
                        words.last_mut().unwrap().push(b);
                    }
                }
            }
        }
        for &(_, _, passage) in &runs {
            if passage {
                kinds.push(RunKind::Passage { winding: 0 });
                passages += 1;
            } else {
                kinds.push(RunKind::Visitor);
                visitors += 1;
            }
        }
        // fill passage windings back into the run list, in order
        let mut wi = 0;
        for k in kinds.iter_mut() {
            if let RunKind::Passage { winding } = k {
                *winding = windings[wi];
                wi += 1;
            }
        }
        per_path.push(PathRingReport {
            runs: kinds,
            word: BundleWordWithHoles { words, windings },
        });
    }
    Ok(RingAnalysis { per_path, passages, visitors })
}

/// Project a level-λ bundle word with holes onto a deeper level λ′ > λ of
/// the same ring, without looking at the underlying path again: letters
/// whose bundles touch the wider closure are absorbed into holes, each
/// contributing its uniform crossing count with the level-λ′ reference
/// curve.  The result must agree with the direct level-λ′ analysis.
pub fn project_word_with_holes(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    bundles: &BundleSet,
    ring: usize,
    to_level: u32,
    w: &ReferenceCurve,
    word: &BundleWordWithHoles,
) -> Result<BundleWordWithHoles, BundleError> {
    let geom = closure_geom(g, decomp, ring, to_level)?;
    let contrib = |b: usize| -> Result<i32, BundleError> {
        let mut per_arc = Vec::new();
        for &a in &bundles.bundles[b].arcs {
            let mut s = 0i32;
            for dir in w.crossings_of(a) {
                s += match dir {
                    CrossDir::LR => 1,
                    CrossDir::RL => -1,
                };
            }
            per_arc.push(s);
        }
        if per_arc.windows(2).any(|p| p[0] != p[1]) {
            return Err(BundleError::Unsupported(
                "bundle arcs cross the reference curve unevenly".into(),
            ));
        }
        Ok(per_arc[0])
    };
    // A letter is absorbed when its bundle touches the target closure: such
    // a crossing happened within some level-λ hole and sinks into the wider
    // holes of level λ′.
    let inside = |b: usize| -> bool {
        bundles.bundles[b]
            .arcs
            .iter()
            .any(|&a| geom.contains(g, g.tail(a)) || geom.contains(g, g.head(a)))
    };

    #[derive(Clone, Copy)]
    enum Tok {
        Letter(usize),
        Hole(i32),
    }
    let mut toks: Vec<Tok> = Vec::new();
    for (i, seg) in word.words.iter().enumerate() {
        if i > 0 {
            toks.push(Tok::Hole(word.windings[i - 1]));
        }
        toks.extend(seg.iter().map(|&b| Tok::Letter(b)));
    }
    let mut words = vec![Vec::new()];
    let mut windings = Vec::new();
    let mut open: Option<i32> = None;
    for t in toks {
        match t {
            Tok::Letter(b) if !inside(b) => {
                if let Some(wind) = open.take() {
                    windings.push(wind);
                    words.push(Vec::new());
                }
                words.last_mut().unwrap().push(b);
            }
            Tok::Letter(b) => *open.get_or_insert(0) += contrib(b)?,
            Tok::Hole(wd) => *open.get_or_insert(0) += wd,
        }
    }
    if let Some(wind) = open {
        windings.push(wind);
        words.push(Vec::new());
    }
    Ok(BundleWordWithHoles { words, windings })
}

// ----- minimality diagnostics -----

/// Two-level objective on solutions: first the number of crossings of
/// non-isolation bundles, then the total bundle word length.
pub fn bundle_objective<'a>(
    bundles: &'a BundleSet,
) -> impl Fn(&Solution) -> (u64, u64) + 'a {
    move |sol| {
        let mut non_iso = 0u64;
        let mut total = 0u64;
        for p in &sol.paths {
            for a in p {
                if let Some(&b) = bundles.arc_to_bundle.get(a) {
                    total += 1;
                    if bundles.bundles[b].level != BundleLevel::Isolation {
                        non_iso += 1;
                    }
                }
            }
        }
        (non_iso, total)
    }
}

/// A solution minimal under the bundle objective, if one exists.
pub fn minimal_solution(
    g: &EmbeddedDigraph,
    bundles: &BundleSet,
) -> Result<Option<Solution>, BundleError> {
    Ok(minimal_solution_by(g, SearchBudget::default(), bundle_objective(bundles))?)
}

#[derive(Clone, Debug)]
pub struct DiagnosticsReport {
    /// The given solution attains the optimum of the bundle objective.
    pub minimal: bool,
    pub objective: (u64, u64),
    pub bundle_count: usize,
    /// Maximal stays of solution paths inside isolating disc components.
    pub isolation_passages: usize,
    /// 4·|bundles|²·k²
    pub isolation_passage_bound: u64,
    /// Same-side stays in ring closures at level 1, over all rings.
    pub visitors: usize,
    /// Visitors are excluded only once every ring is isolated deeply enough
    /// (every record carries at least 2k cycles).
    pub visitor_bound_applies: bool,
    pub nonnested: bool,
    pub max_spiral_terms: usize,
    pub spiral_term_bound: usize,
}

/// Check the structural properties that minimal solutions must satisfy:
/// non-nested bundle words with few spiral terms, boundedly many stays in
/// isolating discs, and (when isolation is deep enough) no ring visitors.
pub fn minimal_solution_diagnostics(
    g: &EmbeddedDigraph,
    decomp: &Decomposition,
    bundles: &BundleSet,
    sol: &Solution,
) -> Result<DiagnosticsReport, BundleError> {
    let obj = bundle_objective(bundles);
    let score = obj(sol);
    let best = minimal_solution_by(g, SearchBudget::default(), &obj)?;
    let minimal = best.map(|b| obj(&b) == score).unwrap_or(false);

    let k = g.terminals().len() as u64;
    let nb = bundles.len() as u64;

    // stays inside isolating discs
    let iso_discs: BTreeSet<usize> =
        decomp.isolation.values().flatten().map(|r| r.disc).collect();
    let comp_of = component_of(g, decomp)?;
    let mut isolation_passages = 0;
    for path in &sol.paths {
        let verts = path_vertices(g, path);
        let mut prev_in = false;
        for &v in &verts {
            let now_in = iso_discs.contains(&comp_of[v.0 as usize]);
            if now_in && !prev_in {
                isolation_passages += 1;
            }
            prev_in = now_in;
        }
    }

    // ring visitors at level 1
    let mut visitors = 0;
    let mut d_min = usize::MAX;
    for (&ring, records) in &decomp.isolation {
        d_min = d_min.min(records.iter().map(|r| r.cycles.cycles.len()).min().unwrap_or(0));
        if let Ok(geom) = closure_geom(g, decomp, ring, 1) {
            for path in &sol.paths {
                let verts = path_vertices(g, path);
                for (_, _, passage) in scan_runs(g, &geom, &verts)? {
                    if !passage {
                        visitors += 1;
                    }
                }
            }
        }
    }
    let visitor_bound_applies =
        !decomp.isolation.is_empty() && d_min != usize::MAX && d_min as u64 >= 2 * k;

    let mut nonnested = true;
    let mut max_spiral_terms = 0;
    for path in &sol.paths {
        let word = bundle_word(bundles, path);
        if !is_nonnested(&word) {
            nonnested = false;
            continue;
        }
        max_spiral_terms = max_spiral_terms.max(spiral_decompose(&word)?.terms.len());
    }

    Ok(DiagnosticsReport {
        minimal,
        objective: score,
        bundle_count: bundles.len(),
        isolation_passages,
        isolation_passage_bound: 4 * nb * nb * k * k,
        visitors,
        visitor_bound_applies,
        nonnested,
        max_spiral_terms,
        spiral_term_bound: 2 * bundles.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{Component, ComponentKind, IsolationRecord};
    use crate::fixtures::Drawing;
    use crate::rings::CycleFamily;
    use crate::solver::{for_each_solution, solve_exact, SearchBudget};

    fn vset(g: &EmbeddedDigraph, names: &[&str]) -> BTreeSet<VertexId> {
        names.iter().map(|n| g.vertex_by_name(n).unwrap()).collect()
    }

    fn disc(g: &EmbeddedDigraph, names: &[&str]) -> Component {
        Component { kind: ComponentKind::Disc, vertices: vset(g, names), f_in: None }
    }

    fn a(g: &EmbeddedDigraph, n: &str) -> ArcId {
        g.arc_by_name(n).unwrap()
    }

    /// Two vertical chains and one rung per entry; `true` points west→east.
    /// With `mid`, a floating two-vertex component sits between rungs 1
    /// and 2.
    fn ladder(dirs: &[bool], mid: bool) -> (EmbeddedDigraph, Decomposition) {
        let n = dirs.len();
        let mut d = Drawing::new();
        for i in 0..n {
            d.vertex(&format!("x{i}"), 0.0, i as f64);
            d.vertex(&format!("y{i}"), 2.0, i as f64);
        }
        for i in 0..n - 1 {
            d.arc(&format!("xc{i}"), &format!("x{i}"), &format!("x{}", i + 1));
            d.arc(&format!("yc{i}"), &format!("y{i}"), &format!("y{}", i + 1));
        }
        for (i, &fwd) in dirs.iter().enumerate() {
            if fwd {
                d.arc(&format!("r{i}"), &format!("x{i}"), &format!("y{i}"));
            } else {
                d.arc(&format!("r{i}"), &format!("y{i}"), &format!("x{i}"));
            }
        }
        if mid {
            d.vertex("m0", 1.0, 1.3).vertex("m1", 1.0, 1.7).arc("mm", "m0", "m1");
        }
        let g = d.build(false).unwrap();
        let xs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let ys: Vec<String> = (0..n).map(|i| format!("y{i}")).collect();
        let mut components = vec![
            disc(&g, &xs.iter().map(String::as_str).collect::<Vec<_>>()),
            disc(&g, &ys.iter().map(String::as_str).collect::<Vec<_>>()),
        ];
        if mid {
            components.push(disc(&g, &["m0", "m1"]));
        }
        (g, Decomposition { components, isolation: BTreeMap::new() })
    }

    #[test]
    fn recognize_parallel_arcs_one_bundle() {
        let (g, dc) = ladder(&[true, true, true], false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        assert_eq!(bs.len(), 1);
        let b = &bs.bundles[0];
        assert_eq!(b.arcs, vec![a(&g, "r0"), a(&g, "r1"), a(&g, "r2")]);
        assert_eq!((b.from, b.to), (0, 1));
        assert!(!b.cyclic);
        assert_eq!(b.level, BundleLevel::Normal);
        // chain invariant
        for w in b.arcs.windows(2) {
            assert_eq!(g.left_face(w[0]), g.right_face(w[1]));
        }
    }

    #[test]
    fn recognize_direction_flip_splits() {
        let (g, dc) = ladder(&[true, false, true], false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        assert_eq!(bs.len(), 3);
        assert!(bs.bundles.iter().all(|b| b.arcs.len() == 1));
    }

    #[test]
    fn recognize_component_between_splits() {
        let (g, dc) = ladder(&[true, true, true, true], true);
        let bs = recognize_bundles(&g, &dc).unwrap();
        assert_eq!(bs.len(), 2);
        let mut arcs: Vec<Vec<ArcId>> = bs.bundles.iter().map(|b| b.arcs.clone()).collect();
        arcs.sort();
        assert_eq!(arcs[0], vec![a(&g, "r0"), a(&g, "r1")]);
        assert_eq!(arcs[1], vec![a(&g, "r2"), a(&g, "r3")]);
    }

    #[test]
    fn nonnested_examples() {
        assert!(is_nonnested(&['a', 'b', 'a', 'b']));
        assert!(!is_nonnested(&['a', 'b', 'c', 'a', 'c', 'b']));
        assert!(is_nonnested::<char>(&[]));
        assert!(is_nonnested(&['a']));
    }

    #[test]
    fn spiral_decompose_examples() {
        let d = spiral_decompose(&['a', 'a', 'a']).unwrap();
        assert_eq!(d.terms, vec![(vec!['a'], 3)]);
        let d = spiral_decompose(&['a', 'b', 'c']).unwrap();
        assert_eq!(d.terms, vec![(vec!['a', 'b', 'c'], 1)]);
        let w: Vec<char> = "abababcdcd".chars().collect();
        let d = spiral_decompose(&w).unwrap();
        assert_eq!(
            d.terms,
            vec![
                (vec!['a', 'b'], 2),
                (vec!['a', 'b', 'c', 'd'], 1),
                (vec!['c', 'd'], 1),
            ]
        );
        assert_eq!(d.concat(), w);
        let nested: Vec<char> = "abcacb".chars().collect();
        assert!(matches!(spiral_decompose(&nested), Err(BundleError::NestedInput)));
    }

    #[test]
    fn spiral_terms_bounded_by_alphabet() {
        // every non-nested word over a fixed alphabet decomposes into at
        // most 2·|alphabet| terms (exhaustive over short binary words)
        for len in 0..=10u32 {
            for code in 0..2u32.pow(len) {
                let w: Vec<u8> = (0..len).map(|i| ((code >> i) & 1) as u8).collect();
                if is_nonnested(&w) {
                    let d = spiral_decompose(&w).unwrap();
                    assert!(d.terms.len() <= 4, "{w:?}");
                    assert_eq!(d.concat(), w);
                }
            }
        }
    }

    #[test]
    fn find_spirals_examples() {
        assert_eq!(find_spirals(&['a', 'b', 'c', 'a']), vec![(0, 3)]);
        assert_eq!(find_spirals(&['a', 'b', 'c']), vec![]);
        assert_eq!(find_spirals(&['a', 'b', 'a', 'b', 'a']), vec![(0, 2), (1, 3), (2, 4)]);
    }

    /// An outer ring X around a centre square Y.  The first terminal pair
    /// forces a path that winds once around Y: it enters on the east, crosses
    /// to Y, leaves Y on the west, travels over the top of the ring, and
    /// re-enters Y on the east again — visiting the east-side bundle twice.
    /// The second pair dives straight in from the south.
    fn spiral_stage(ring_y: bool) -> (EmbeddedDigraph, Decomposition) {
        let mut d = Drawing::new();
        // centre square, with a split east edge and a southern bulge
        d.vertex("y0", 1.0, 1.0);
        d.vertex("y1", -1.0, 1.0);
        d.vertex("y2", -1.0, -1.0);
        d.vertex("y3", 1.0, -1.0);
        d.vertex("yE", 1.0, 0.0);
        d.vertex("ySm", 0.0, -1.6);
        d.arc("ye1", "y3", "yE");
        d.arc("ye2", "yE", "y0");
        d.arc("yn", "y0", "y1");
        d.arc("yw", "y1", "y2");
        d.arc("ysd", "y3", "y2");
        d.arc("ys1", "y3", "ySm");
        d.arc("ys2", "ySm", "y2");
        // interior pendants
        d.vertex("w", 0.0, 0.0);
        d.arc("d1", "y1", "w");
        d.vertex("t2", 0.0, -1.3);
        d.arc("d2", "ySm", "t2");
        // outer ring
        d.vertex("xE1", 3.76, -1.37);
        d.vertex("xE2", 3.76, 1.37);
        d.vertex("xN", 0.0, 4.0);
        d.vertex("xW", -4.0, 0.0);
        d.vertex("xS", 0.0, -4.0);
        d.vertex("xC1", -2.6, -3.0);
        d.vertex("xC2", -1.8, -3.6);
        d.arc("xwn", "xW", "xN");
        d.arc("xne", "xN", "xE2");
        d.arc("xee", "xE1", "xE2");
        d.arc("xwc", "xW", "xC1");
        d.arc("xcc", "xC1", "xC2");
        d.arc("xcs", "xC2", "xS");
        d.arc("xse", "xS", "xE1");
        // a spectator component hanging off the ring's south-west corner
        d.vertex("z1", -3.2, -4.6);
        d.vertex("z2", -2.2, -5.4);
        d.arc("zz", "z1", "z2");
        d.arc("c1", "xC1", "z1");
        d.arc("c2", "xC2", "z2");
        // ring-to-centre arcs
        d.arc("a1", "xE1", "y3");
        d.arc("a2", "xE2", "yE");
        d.arc("b1", "y2", "xW");
        d.arc("e1", "xS", "ySm");
        // terminals
        d.vertex("s1", 5.0, -0.5);
        d.vertex("t1", 1.5, 1.5);
        d.vertex("s2", 0.0, -5.5);
        d.arc("as1", "s1", "xE1");
        d.arc("at1", "y0", "t1");
        d.arc("as2", "s2", "xS");
        d.terminal_pair("s1", "t1");
        d.terminal_pair("s2", "t2");
        let g = d.build(false).unwrap();
        let mut components = vec![
            disc(&g, &["xE1", "xE2", "xN", "xW", "xS", "xC1", "xC2"]),
            disc(&g, &["y0", "y1", "y2", "y3", "yE", "ySm"]),
            disc(&g, &["w"]),
            disc(&g, &["z1", "z2"]),
            disc(&g, &["s1"]),
            disc(&g, &["t1"]),
            disc(&g, &["s2"]),
            disc(&g, &["t2"]),
        ];
        if ring_y {
            components[1].kind = ComponentKind::Ring;
        }
        (g, Decomposition { components, isolation: BTreeMap::new() })
    }

    /// The winding route of the first pair through the spiral stage.
    fn spiral_stage_path(g: &EmbeddedDigraph) -> Vec<ArcId> {
        ["as1", "a1", "ysd", "b1", "xwn", "xne", "a2", "ye2", "at1"]
            .iter()
            .map(|n| a(g, n))
            .collect()
    }

    #[test]
    fn spiral_stage_bundle_structure() {
        let (g, dc) = spiral_stage(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        assert_eq!(bs.len(), 8);
        assert!(bs.bundles.iter().all(|b| !b.cyclic));
        assert!(bs.bundles.iter().all(|b| b.level == BundleLevel::Normal));
        // The three ring-to-centre arcs on the east and south sides chain
        // into a single bundle; the spectator pair chains as well.
        let ba = &bs.bundles[bs.arc_to_bundle[&a(&g, "a1")]];
        assert_eq!(ba.arcs, vec![a(&g, "a2"), a(&g, "a1"), a(&g, "e1")]);
        let bc = &bs.bundles[bs.arc_to_bundle[&a(&g, "c1")]];
        assert_eq!(bc.arcs, vec![a(&g, "c1"), a(&g, "c2")]);
        for n in ["b1", "d1", "d2", "as1", "at1", "as2"] {
            let b = &bs.bundles[bs.arc_to_bundle[&a(&g, n)]];
            assert_eq!(b.arcs, vec![a(&g, n)], "{n} should be a singleton bundle");
        }
    }

    #[test]
    fn spiral_stage_word_and_spirals() {
        let (g, dc) = spiral_stage(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let path = spiral_stage_path(&g);
        let word = bundle_word(&bs, &path);
        let (ia, ib) = (bs.arc_to_bundle[&a(&g, "a1")], bs.arc_to_bundle[&a(&g, "b1")]);
        let (is1, it1) = (bs.arc_to_bundle[&a(&g, "as1")], bs.arc_to_bundle[&a(&g, "at1")]);
        assert_eq!(word, vec![is1, ia, ib, ia, it1]);
        assert!(is_nonnested(&word));
        assert_eq!(find_spirals(&word), vec![(1, 3)]);
        // component-internal stretches contribute no letters
        assert_eq!(bundle_word(&bs, &[a(&g, "ysd"), a(&g, "yw")]), Vec::<usize>::new());
    }

    #[test]
    fn spiral_stage_cut_sides() {
        let (g, dc) = spiral_stage(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let path = spiral_stage_path(&g);
        let cut = spiral_cut(&g, &dc, &bs, &path, (1, 3)).unwrap();
        assert!(cut.curve.closed);
        let crossed: BTreeSet<ArcId> = cut.curve.crossed_arcs().collect();
        let expect: BTreeSet<ArcId> =
            ["ys1", "ys2", "xwc", "xee", "a1"].iter().map(|n| a(&g, n)).collect();
        assert_eq!(crossed, expect);
        // spiral letters never get a side
        for n in ["a1", "b1"] {
            assert!(!cut.sides.contains_key(&bs.arc_to_bundle[&a(&g, n)]));
        }
        let side = |n: &str| cut.sides[&bs.arc_to_bundle[&a(&g, n)]];
        assert_eq!(side("d1"), SpiralSide::Inside);
        assert_eq!(side("at1"), SpiralSide::Inside);
        assert_eq!(side("c1"), SpiralSide::Outside);
        assert_eq!(side("as1"), SpiralSide::Outside);
        assert_eq!(side("as2"), SpiralSide::Outside);
        assert_eq!(side("d2"), SpiralSide::Outside);
    }

    #[test]
    fn spiral_stage_ring_bundle_rejected() {
        let (g, dc) = spiral_stage(true);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let path = spiral_stage_path(&g);
        match spiral_cut(&g, &dc, &bs, &path, (1, 3)) {
            Err(BundleError::RingBundleInSpiral) => {}
            other => panic!("expected ring-bundle rejection, got {other:?}"),
        }
    }

    /// Oracle: in every solution of the spiral stage, every spiral of every
    /// path admits a cut, and any other path of the solution crosses that
    /// cut at most once.
    #[test]
    fn spiral_stage_cut_oracle() {
        let (g, dc) = spiral_stage(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let mut solutions = 0usize;
        let mut spirals_seen = 0usize;
        for_each_solution(&g, SearchBudget::default(), |paths| {
            solutions += 1;
            for (pi, path) in paths.iter().enumerate() {
                let word = bundle_word(&bs, path);
                assert!(is_nonnested(&word), "{word:?}");
                let dec = spiral_decompose(&word).unwrap();
                assert!(dec.terms.len() <= 2 * bs.len());
                for spiral in find_spirals(&word) {
                    spirals_seen += 1;
                    let cut = spiral_cut(&g, &dc, &bs, path, spiral).unwrap();
                    let crossed: BTreeSet<ArcId> = cut.curve.crossed_arcs().collect();
                    for (qi, other) in paths.iter().enumerate() {
                        if qi == pi {
                            continue;
                        }
                        let hits = other.iter().filter(|x| crossed.contains(x)).count();
                        assert!(hits <= 1, "other path crosses a spiral cut {hits} times");
                    }
                }
            }
            true
        })
        .unwrap();
        assert!(solutions > 0);
        assert!(spirals_seen > 0);
    }

    /// Two terminal pairs forced to interleave through one four-arc bundle:
    /// each path crosses the bundle twice and the two alternate along the
    /// bundle's chain, giving the profile 1,2,1,2.
    fn double_spiral_stage() -> (EmbeddedDigraph, Decomposition) {
        let mut d = Drawing::new();
        for (i, y) in [(1usize, -1.5f64), (2, -0.5), (3, 0.5), (4, 1.5)] {
            d.vertex(&format!("u{i}"), 0.0, y);
            d.vertex(&format!("e{i}"), 3.0, y);
        }
        // chain arcs point downward so they cannot serve as shortcuts
        for i in 1..4usize {
            d.arc(&format!("uu{i}"), &format!("u{}", i + 1), &format!("u{i}"));
            d.arc(&format!("ee{i}"), &format!("e{}", i + 1), &format!("e{i}"));
        }
        for i in 1..=4usize {
            d.arc(&format!("b{i}"), &format!("e{i}"), &format!("u{i}"));
        }
        d.vertex("g1", -3.0, -1.5);
        d.vertex("g2", -3.0, -0.5);
        d.arc("w1", "u1", "g1");
        d.arc("w2", "u2", "g2");
        d.vertex("p1a", -3.5, 2.0);
        d.vertex("p1b", 0.0, 3.5);
        d.vertex("p1c", 3.5, 2.0);
        d.arc("l1a", "g1", "p1a");
        d.arc("l1b", "p1a", "p1b");
        d.arc("l1c", "p1b", "p1c");
        d.arc("l1d", "p1c", "e3");
        d.vertex("p2a", -2.5, 1.5);
        d.vertex("p2b", 0.0, 2.5);
        d.vertex("p2c", 2.5, 1.8);
        d.arc("l2a", "g2", "p2a");
        d.arc("l2b", "p2a", "p2b");
        d.arc("l2c", "p2b", "p2c");
        d.arc("l2d", "p2c", "e4");
        d.vertex("tA", -1.5, 0.5);
        d.vertex("tB", -1.5, 1.5);
        d.arc("q1", "u3", "tA");
        d.arc("q2", "u4", "tB");
        d.vertex("sA", 5.0, -2.5);
        d.vertex("sB", 5.0, -0.5);
        d.arc("asA", "sA", "e1");
        d.arc("asB", "sB", "e2");
        d.terminal_pair("sB", "tB");
        d.terminal_pair("sA", "tA");
        let g = d.build(false).unwrap();
        let components = vec![
            disc(
                &g,
                &["e1", "e2", "e3", "e4", "g1", "g2", "p1a", "p1b", "p1c", "p2a", "p2b", "p2c"],
            ),
            disc(&g, &["u1", "u2", "u3", "u4"]),
            disc(&g, &["sA"]),
            disc(&g, &["sB"]),
            disc(&g, &["tA"]),
            disc(&g, &["tB"]),
        ];
        (g, Decomposition { components, isolation: BTreeMap::new() })
    }

    #[test]
    fn double_spiral_interleaved_profile() {
        let (g, dc) = double_spiral_stage();
        let bs = recognize_bundles(&g, &dc).unwrap();
        let ib = bs.arc_to_bundle[&a(&g, "b1")];
        assert_eq!(
            bs.bundles[ib].arcs,
            vec![a(&g, "b4"), a(&g, "b3"), a(&g, "b2"), a(&g, "b1")]
        );
        let sol = solve_exact(&g).unwrap().expect("stage is solvable");
        assert_eq!(
            sol.paths[0],
            ["asB", "b2", "w2", "l2a", "l2b", "l2c", "l2d", "b4", "q2"]
                .iter()
                .map(|n| a(&g, n))
                .collect::<Vec<_>>()
        );
        let profile = bundle_profile(&bs, ib, &sol);
        assert_eq!(profile, vec![1, 2, 1, 2]);
        assert!(is_nonnested(&profile));
        for path in &sol.paths {
            let word = bundle_word(&bs, path);
            assert!(is_nonnested(&word));
            // each path meets the shared bundle twice with one letter between
            assert_eq!(word.iter().filter(|&&x| x == ib).count(), 2);
            assert_eq!(find_spirals(&word), vec![(1, 3)]);
            let dec = spiral_decompose(&word).unwrap();
            assert!(dec.terms.len() <= 2 * bs.len());
            assert_eq!(dec.concat(), word);
        }
    }

    // ----- nested-square stages for reference curves and ring analysis -----

    /// Concentric square with vertices {tag}e/n/w/s and counterclockwise arcs
    /// {tag}0..{tag}3 starting at the east vertex.
    fn add_square(d: &mut Drawing, tag: &str, r: f64) {
        d.vertex(&format!("{tag}e"), r, 0.0);
        d.vertex(&format!("{tag}n"), 0.0, r);
        d.vertex(&format!("{tag}w"), -r, 0.0);
        d.vertex(&format!("{tag}s"), 0.0, -r);
        let corners = ["e", "n", "w", "s", "e"];
        for i in 0..4 {
            d.arc(
                &format!("{tag}{i}"),
                &format!("{tag}{}", corners[i]),
                &format!("{tag}{}", corners[i + 1]),
            );
        }
    }

    fn square_cycle(g: &EmbeddedDigraph, tag: &str) -> Vec<ArcId> {
        (0..4).map(|i| a(g, &format!("{tag}{i}"))).collect()
    }

    fn square_names(tags: &[&str]) -> Vec<String> {
        let mut out = Vec::new();
        for t in tags {
            for c in ["e", "n", "w", "s"] {
                out.push(format!("{t}{c}"));
            }
        }
        out
    }

    fn square_comp(g: &EmbeddedDigraph, tags: &[&str]) -> Component {
        let names = square_names(tags);
        disc(g, &names.iter().map(String::as_str).collect::<Vec<_>>())
    }

    fn record(g: &EmbeddedDigraph, disc: usize, level: i32, tags: &[&str]) -> IsolationRecord {
        IsolationRecord {
            disc,
            level,
            cycles: CycleFamily { cycles: tags.iter().map(|t| square_cycle(g, t)).collect() },
        }
    }

    /// Three concentric squares: inner disc, middle ring, outer disc, with
    /// one radial between consecutive squares and a terminal pair crossing
    /// the whole arrangement.  With `detour`, two extra arcs let a path dip
    /// into the ring's closure and pop back out on the same side.
    fn onion3(detour: bool) -> (EmbeddedDigraph, Decomposition) {
        let mut d = Drawing::new();
        add_square(&mut d, "q0", 1.0);
        add_square(&mut d, "q1", 2.0);
        add_square(&mut d, "q2", 3.0);
        d.arc("rad2", "q2e", "q1e");
        d.arc("rad1", "q1w", "q0w");
        if detour {
            d.arc("x2", "q1e", "q2n");
            d.arc("x3", "q2w", "q1w");
        }
        d.vertex("s", 4.0, 0.0);
        d.vertex("t", 0.3, 0.0);
        d.arc("as", "s", "q2e");
        d.arc("at", "q0e", "t");
        d.terminal_pair("s", "t");
        let g = d.build(false).unwrap();
        let mut ring = square_comp(&g, &["q1"]);
        ring.kind = ComponentKind::Ring;
        let components = vec![
            square_comp(&g, &["q0"]),
            ring,
            square_comp(&g, &["q2"]),
            disc(&g, &["s"]),
            disc(&g, &["t"]),
        ];
        let isolation = BTreeMap::from([(
            1usize,
            vec![record(&g, 0, -1, &["q0"]), record(&g, 2, 1, &["q2"])],
        )]);
        (g, Decomposition { components, isolation })
    }

    #[test]
    fn reference_curve_crosses_each_shell_once() {
        let (g, dc) = onion3(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let w = reference_curve(&g, &dc, &bs, 1, 1).unwrap();
        assert!(!w.curve.closed);
        assert_eq!(w.f1(), g.outer_face());
        let crossed: Vec<ArcId> = w.curve.crossed_arcs().collect();
        assert_eq!(crossed, vec![a(&g, "q20"), a(&g, "q10"), a(&g, "q00")]);
        assert_eq!(w.curve.faces.len(), 4);
        assert!(reference_curve(&g, &dc, &bs, 1, 0).is_err());
    }

    #[test]
    fn ring_analysis_single_passage_winding_one() {
        let (g, dc) = onion3(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let w = reference_curve(&g, &dc, &bs, 1, 1).unwrap();
        let sol = solve_exact(&g).unwrap().unwrap();
        assert_eq!(
            sol.paths[0],
            ["as", "rad2", "q10", "q11", "rad1", "q02", "q03", "at"]
                .iter()
                .map(|n| a(&g, n))
                .collect::<Vec<_>>()
        );
        let an = ring_analysis(&g, &dc, &bs, 1, 1, &w, &sol).unwrap();
        assert_eq!(an.passages, 1);
        assert_eq!(an.visitors, 0);
        let rep = &an.per_path[0];
        assert_eq!(rep.runs, vec![RunKind::Passage { winding: 1 }]);
        let ias = bs.arc_to_bundle[&a(&g, "as")];
        assert_eq!(rep.word.words, vec![vec![ias], vec![]]);
        assert_eq!(rep.word.windings, vec![1]);
        // every bundle of this stage touches an isolating disc
        assert!(bs.bundles.iter().all(|b| b.level == BundleLevel::Isolation));
    }

    #[test]
    fn diagnostics_on_minimal_onion_solution() {
        let (g, dc) = onion3(false);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let sol = solve_exact(&g).unwrap().unwrap();
        let rep = minimal_solution_diagnostics(&g, &dc, &bs, &sol).unwrap();
        assert!(rep.minimal);
        assert_eq!(rep.bundle_count, 4);
        assert_eq!(rep.visitors, 0);
        assert_eq!(rep.isolation_passages, 2); // one per isolating disc
        assert!(rep.isolation_passage_bound >= rep.isolation_passages as u64);
        assert!(!rep.visitor_bound_applies); // single-cycle records, 2k = 2
        assert!(rep.nonnested);
        assert!(rep.max_spiral_terms <= rep.spiral_term_bound);
    }

    #[test]
    fn visitor_detected_and_nonminimal() {
        let (g, dc) = onion3(true);
        let bs = recognize_bundles(&g, &dc).unwrap();
        let w = reference_curve(&g, &dc, &bs, 1, 1).unwrap();

        // The cheapest route slips in through the detour: no visitors.
        let sol = solve_exact(&g).unwrap().unwrap();
        assert_eq!(
            sol.paths[0],
            ["as", "q20", "q21", "x3", "rad1", "q02", "q03", "at"]
                .iter()
                .map(|n| a(&g, n))
                .collect::<Vec<_>>()
        );
        let an = ring_analysis(&g, &dc, &bs, 1, 1, &w, &sol).unwrap();
        assert_eq!((an.passages, an.visitors), (1, 0));
        let rep = minimal_solution_diagnostics(&g, &dc, &bs, &sol).unwrap();
        assert!(rep.minimal);
        assert_eq!(rep.visitors, 0);

        // A hand-built route that enters the closure and backs out on the
        // same side before descending: one visitor, and not minimal.
        let wander = Solution {
            paths: vec![["as", "rad2", "x2", "q21", "x3", "rad1", "q02", "q03", "at"]
                .iter()
                .map(|n| a(&g, n))
                .collect()],
        };
        let an = ring_analysis(&g, &dc, &bs, 1, 1, &w, &wander).unwrap();
        assert_eq!((an.passages, an.visitors), (1, 1));
        assert!(matches!(an.per_path[0].runs[0], RunKind::Visitor));
        let rep = minimal_solution_diagnostics(&g, &dc, &bs, &wander).unwrap();
        assert!(!rep.minimal);
        assert_eq!(rep.visitors, 1);
        assert!(rep.nonnested);
    }

    /// Five concentric squares around a middle ring with level-1 and level-2
    /// isolation records on both sides.
    fn onion5() -> (EmbeddedDigraph, Decomposition) {
        let mut d = Drawing::new();
        for (i, r) in [(0usize, 1.0f64), (1, 2.0), (2, 3.0), (3, 4.0), (4, 5.0)] {
            add_square(&mut d, &format!("q{i}"), r);
        }
        d.arc("rad4", "q4e", "q3e");
        d.arc("rad3", "q3n", "q2e");
        d.arc("rad2", "q2n", "q1n");
        d.arc("rad1", "q1w", "q0w");
        d.vertex("s", 6.0, 0.0);
        d.vertex("t", 0.3, 0.0);
        d.arc("as", "s", "q4e");
        d.arc("at", "q0e", "t");
        d.terminal_pair("s", "t");
        let g = d.build(false).unwrap();
        let mut ring = square_comp(&g, &["q2"]);
        ring.kind = ComponentKind::Ring;
        let components = vec![
            square_comp(&g, &["q0"]),
            square_comp(&g, &["q1"]),
            ring,
            square_comp(&g, &["q3"]),
            square_comp(&g, &["q4"]),
            disc(&g, &["s"]),
            disc(&g, &["t"]),
        ];
        let isolation = BTreeMap::from([(
            2usize,
            vec![
                record(&g, 1, -1, &["q1"]),
                record(&g, 0, -2, &["q0"]),
                record(&g, 3, 1, &["q3"]),
                record(&g, 4, 2, &["q4"]),
            ],
        )]);
        (g, Decomposition { components, isolation })
    }

    #[test]
    fn reference_curves_nest_across_levels() {
        let (g, dc) = onion5();
        let bs = recognize_bundles(&g, &dc).unwrap();
        let w2 = reference_curve(&g, &dc, &bs, 2, 2).unwrap();
        let w1 = reference_curve(&g, &dc, &bs, 2, 1).unwrap();
        let c2: Vec<ArcId> = w2.curve.crossed_arcs().collect();
        assert_eq!(
            c2,
            ["q40", "q30", "q20", "q10", "q00"].iter().map(|n| a(&g, n)).collect::<Vec<_>>()
        );
        // the level-1 curve is the middle stretch of the level-2 curve
        assert_eq!(w1.curve.crossings, w2.curve.crossings[1..4].to_vec());
        assert_eq!(w1.curve.faces, w2.curve.faces[1..5].to_vec());
    }

    #[test]
    fn word_projection_matches_direct_analysis() {
        let (g, dc) = onion5();
        let bs = recognize_bundles(&g, &dc).unwrap();
        let w2 = reference_curve(&g, &dc, &bs, 2, 2).unwrap();
        let w1 = reference_curve(&g, &dc, &bs, 2, 1).unwrap();
        let sol = solve_exact(&g).unwrap().unwrap();
        assert_eq!(
            sol.paths[0],
            ["as", "rad4", "q30", "rad3", "q20", "rad2", "q11", "rad1", "q02", "q03", "at"]
                .iter()
                .map(|n| a(&g, n))
                .collect::<Vec<_>>()
        );
        let (ias, ir4) = (bs.arc_to_bundle[&a(&g, "as")], bs.arc_to_bundle[&a(&g, "rad4")]);
        let iat = bs.arc_to_bundle[&a(&g, "at")];

        let an1 = ring_analysis(&g, &dc, &bs, 2, 1, &w1, &sol).unwrap();
        let word1 = &an1.per_path[0].word;
        assert_eq!(word1.words, vec![vec![ias, ir4], vec![iat]]);
        assert_eq!(word1.windings, vec![1]);

        let an2 = ring_analysis(&g, &dc, &bs, 2, 2, &w2, &sol).unwrap();
        let word2 = &an2.per_path[0].word;
        assert_eq!(word2.words, vec![vec![ias], vec![]]);
        assert_eq!(word2.windings, vec![1]);

        // projecting the level-1 word outward reproduces the level-2 word
        let proj = project_word_with_holes(&g, &dc, &bs, 2, 2, &w2, word1).unwrap();
        assert_eq!(proj.words, word2.words);
        assert_eq!(proj.windings, word2.windings);
    }

    /// Like `onion3` but every isolating disc is two concentric squares
    /// joined by an internal arc, so the records are two cycles deep and the
    /// visitor bound applies.
    fn onion_deep() -> (EmbeddedDigraph, Decomposition) {
        let mut d = Drawing::new();
        add_square(&mut d, "q0", 0.6);
        add_square(&mut d, "q1", 1.0);
        add_square(&mut d, "q2", 2.0);
        add_square(&mut d, "q3", 3.0);
        add_square(&mut d, "q4", 3.6);
        d.arc("cin", "q1e", "q0e");
        d.arc("cout", "q4e", "q3e");
        d.arc("rad2", "q3e", "q2e");
        d.arc("rad1", "q2w", "q1w");
        d.vertex("s", 5.0, 0.0);
        d.vertex("t", 0.1, 0.0);
        d.arc("as", "s", "q4e");
        d.arc("at", "q0e", "t");
        d.terminal_pair("s", "t");
        let g = d.build(false).unwrap();
        let mut ring = square_comp(&g, &["q2"]);
        ring.kind = ComponentKind::Ring;
        let components = vec![
            square_comp(&g, &["q0", "q1"]),
            ring,
            square_comp(&g, &["q3", "q4"]),
            disc(&g, &["s"]),
            disc(&g, &["t"]),
        ];
        let isolation = BTreeMap::from([(
            1usize,
            vec![record(&g, 0, -1, &["q0", "q1"]), record(&g, 2, 1, &["q3", "q4"])],
        )]);
        (g, Decomposition { components, isolation })
    }

    #[test]
    fn deep_isolation_visitor_bound_applies() {
        let (g, dc) = onion_deep();
        let bs = recognize_bundles(&g, &dc).unwrap();
        let w = reference_curve(&g, &dc, &bs, 1, 1).unwrap();
        let crossed: Vec<ArcId> = w.curve.crossed_arcs().collect();
        assert_eq!(
            crossed,
            ["q40", "q30", "q20", "q10", "q00"].iter().map(|n| a(&g, n)).collect::<Vec<_>>()
        );
        let sol = solve_exact(&g).unwrap().unwrap();
        let an = ring_analysis(&g, &dc, &bs, 1, 1, &w, &sol).unwrap();
        assert_eq!((an.passages, an.visitors), (1, 0));
        assert_eq!(an.per_path[0].word.windings, vec![1]);
        let rep = minimal_solution_diagnostics(&g, &dc, &bs, &sol).unwrap();
        assert!(rep.minimal);
        assert!(rep.visitor_bound_applies); // two-cycle records, 2k = 2
        assert_eq!(rep.visitors, 0);
    }
}
