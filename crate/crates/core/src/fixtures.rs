//! Hand-checkable test instances, built from straight-line drawings.
//!
//! The builder takes vertex coordinates and derives the clockwise rotation of
//! each vertex by sorting darts by angle.  The outer face is found at the
//! leftmost vertex: the wedge containing the direction pointing away from the
//! drawing belongs to the outer face.

use crate::embed::{ArcId, ArcRec, Dart, EmbeddedDigraph, End, GraphError, VertexId};
use std::collections::HashMap;

pub struct Drawing {
    names: Vec<String>,
    coords: Vec<(f64, f64)>,
    arcs: Vec<(String, usize, usize)>,
    terminals: Vec<(String, String)>,
    lookup: HashMap<String, usize>,
}

impl Drawing {
    pub fn new() -> Self {
        Drawing {
            names: Vec::new(),
            coords: Vec::new(),
            arcs: Vec::new(),
            terminals: Vec::new(),
            lookup: HashMap::new(),
        }
    }

    pub fn vertex(&mut self, name: &str, x: f64, y: f64) -> &mut Self {
        assert!(
            self.lookup.insert(name.to_string(), self.names.len()).is_none(),
            "duplicate vertex {name}"
        );
        self.names.push(name.to_string());
        self.coords.push((x, y));
        self
    }

    pub fn arc(&mut self, name: &str, tail: &str, head: &str) -> &mut Self {
        let t = self.lookup[tail];
        let h = self.lookup[head];
        self.arcs.push((name.to_string(), t, h));
        self
    }

    pub fn terminal_pair(&mut self, s: &str, t: &str) -> &mut Self {
        self.terminals.push((s.to_string(), t.to_string()));
        self
    }

    pub fn has_vertex(&self, name: &str) -> bool {
        self.lookup.contains_key(name)
    }

    /// Angle of the initial segment of the dart, in radians, mathematical
    /// convention (counterclockwise from east, y up).
    fn dart_angle(&self, d: &(String, usize, usize), end: End) -> f64 {
        let (from, to) = match end {
            End::Tail => (d.1, d.2),
            End::Head => (d.2, d.1),
        };
        let (x0, y0) = self.coords[from];
        let (x1, y1) = self.coords[to];
        (y1 - y0).atan2(x1 - x0)
    }

    /// At vertex `vi` (which must be leftmost within its component) find the
    /// traversal token of the face filling the wedge that contains the
    /// direction pointing west.  That face is the component's unbounded one.
    fn west_token(&self, vi: usize, rotation: &[Vec<Dart>]) -> Dart {
        let rot = &rotation[vi];
        let angles: Vec<f64> = rot
            .iter()
            .map(|d| self.dart_angle(&self.arcs[d.arc.0 as usize], d.end))
            .collect();
        let west = std::f64::consts::PI - 1e-9;
        let mut pick = 0usize;
        if rot.len() > 1 {
            // The wedge clockwise of darts[i] runs from angles[i] downward
            // (decreasing angle) to the next dart.  West lies in the wedge
            // of the dart with the smallest angle >= west, or of the
            // minimum-angle dart when no angle reaches west (wraparound).
            let mut cand: Option<(f64, usize)> = None;
            let mut mini = 0usize;
            for (i, &ang) in angles.iter().enumerate() {
                if ang < angles[mini] {
                    mini = i;
                }
                if ang >= west && cand.map_or(true, |(c, _)| ang < c) {
                    cand = Some((ang, i));
                }
            }
            pick = cand.map(|(_, i)| i).unwrap_or(mini);
        }
        // The wedge clockwise of `d` belongs to left(a) for a head dart and
        // right(a) for a tail dart; as a traversal token that is d.opposite().
        rot[pick].opposite()
    }

    pub fn build(&self, normalize_terminals: bool) -> Result<EmbeddedDigraph, GraphError> {
        // Collect darts per vertex and sort clockwise = by decreasing angle.
        let mut per_vertex: Vec<Vec<(f64, Dart)>> = vec![Vec::new(); self.names.len()];
        for (ai, a) in self.arcs.iter().enumerate() {
            per_vertex[a.1].push((self.dart_angle(a, End::Tail), Dart::tail(ArcId(ai as u32))));
            per_vertex[a.2].push((self.dart_angle(a, End::Head), Dart::head(ArcId(ai as u32))));
        }
        let mut rotation = Vec::new();
        for list in per_vertex.iter_mut() {
            list.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
            rotation.push(list.iter().map(|&(_, d)| d).collect::<Vec<_>>());
        }
        // Weak components over arcs.
        let mut parent: Vec<usize> = (0..self.names.len()).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
                r
            } else {
                x
            }
        }
        for &(_, t, h) in &self.arcs {
            let (x, y) = (find(&mut parent, t), find(&mut parent, h));
            if x != y {
                parent[x] = y;
            }
        }
        // Leftmost vertex with darts, per component and globally.
        let mut leftmost: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
        let mut global: Option<usize> = None;
        for vi in 0..self.names.len() {
            if rotation[vi].is_empty() {
                continue;
            }
            let c = find(&mut parent, vi);
            let better = |old: usize| self.coords[vi] < self.coords[old];
            if leftmost.get(&c).map_or(true, |&old| better(old)) {
                leftmost.insert(c, vi);
            }
            if global.map_or(true, better) {
                global = Some(vi);
            }
        }
        let outer = global.map(|vi| self.west_token(vi, &rotation));
        // Placement of every other component: shoot a ray west from its
        // leftmost vertex; the nearest segment hit bounds the face the
        // component is drawn in, on the side facing the ray.
        let mut placements = Vec::new();
        if let Some(gvi) = global {
            let anchor_comp = find(&mut parent, gvi);
            let comps: Vec<usize> = {
                let mut c: Vec<usize> = leftmost.keys().copied().collect();
                c.sort();
                c
            };
            for c in comps {
                if c == anchor_comp {
                    continue;
                }
                let vi = leftmost[&c];
                let (x0, y0) = self.coords[vi];
                let mut hit: Option<(f64, Dart)> = None;
                for (ai, &(_, t, h)) in self.arcs.iter().enumerate() {
                    if find(&mut parent, t) == c {
                        continue;
                    }
                    let (x1, y1) = self.coords[t];
                    let (x2, y2) = self.coords[h];
                    if (y1 > y0) == (y2 > y0) {
                        continue;
                    }
                    let xi = x1 + (y0 - y1) * (x2 - x1) / (y2 - y1);
                    if xi >= x0 {
                        continue;
                    }
                    if hit.map_or(true, |(hx, _)| xi > hx) {
                        // Side of the segment facing back east toward the
                        // component: left of tail->head iff the cross
                        // product is positive at a point just east.
                        let cross = (x2 - x1) * (y0 - y1) - (y2 - y1) * (x0 - x1);
                        let token = if cross > 0.0 {
                            Dart::tail(ArcId(ai as u32)) // forward traversal: left face
                        } else {
                            Dart::head(ArcId(ai as u32))
                        };
                        hit = Some((xi, token));
                    }
                }
                if let Some((_, token)) = hit {
                    placements.push((self.west_token(vi, &rotation), token));
                }
            }
        }
        let arcs = self
            .arcs
            .iter()
            .map(|(n, t, h)| ArcRec {
                name: n.clone(),
                tail: VertexId(*t as u32),
                head: VertexId(*h as u32),
            })
            .collect();
        let mut terminals = Vec::new();
        let tmp_names = &self.lookup;
        for (s, t) in &self.terminals {
            terminals.push((
                VertexId(tmp_names[s] as u32),
                VertexId(tmp_names[t] as u32),
            ));
        }
        EmbeddedDigraph::build(
            self.names.clone(),
            arcs,
            rotation,
            outer,
            placements,
            terminals,
            normalize_terminals,
        )
    }
}

impl Default for Drawing {
    fn default() -> Self {
        Self::new()
    }
}

/// A single directed triangle v1 -> v2 -> v3 -> v1, drawn clockwise.
/// Two faces: the inner disc and the outer face.
pub fn tri() -> EmbeddedDigraph {
    let mut d = Drawing::new();
    d.vertex("v1", 0.0, 1.0)
        .vertex("v2", 1.0, -1.0)
        .vertex("v3", -1.0, -1.0)
        .arc("a1", "v1", "v2")
        .arc("a2", "v2", "v3")
        .arc("a3", "v3", "v1");
    d.build(false).expect("tri fixture")
}

/// Two disjoint concentric triangles: inner clockwise, outer
/// counterclockwise.  Three faces: inner disc, the annulus, outer face.
pub fn ring2() -> EmbeddedDigraph {
    let mut d = Drawing::new();
    d.vertex("o1", 0.0, 3.0)
        .vertex("o2", -3.0, -3.0)
        .vertex("o3", 3.0, -3.0)
        .vertex("i1", 0.0, 1.0)
        .vertex("i2", 1.0, -1.0)
        .vertex("i3", -1.0, -1.0)
        // outer triangle counterclockwise: o1 -> o2 -> o3 -> o1
        .arc("b1", "o1", "o2")
        .arc("b2", "o2", "o3")
        .arc("b3", "o3", "o1")
        // inner triangle clockwise: i1 -> i2 -> i3 -> i1
        .arc("c1", "i1", "i2")
        .arc("c2", "i2", "i3")
        .arc("c3", "i3", "i1");
    d.build(false).expect("ring2 fixture")
}

/// ring2 plus a pendant terminal pair attached outside both triangles; both
/// pendant arcs point into the graph, so the pair is infeasible.
pub fn ring_with_outside_terminals() -> EmbeddedDigraph {
    let mut d = Drawing::new();
    d.vertex("o1", 0.0, 3.0)
        .vertex("o2", -3.0, -3.0)
        .vertex("o3", 3.0, -3.0)
        .vertex("i1", 0.0, 1.0)
        .vertex("i2", 1.0, -1.0)
        .vertex("i3", -1.0, -1.0)
        .arc("b1", "o1", "o2")
        .arc("b2", "o2", "o3")
        .arc("b3", "o3", "o1")
        .arc("c1", "i1", "i2")
        .arc("c2", "i2", "i3")
        .arc("c3", "i3", "i1")
        .vertex("s", 0.0, 4.5)
        .vertex("t", -4.5, -3.5)
        .arc("as", "s", "o1")
        .arc("at", "t", "o2")
        .terminal_pair("s", "t");
    d.build(false).expect("ring with outside terminals fixture")
}

/// Two concentric squares with `m` radial arcs between them whose directions
/// alternate out, in, out, in ... in clockwise order (out = from the inner
/// square to the outer).  With all four radials present this carries an
/// alternating join of size 4 between the squares.
pub fn join_ring(m: usize) -> EmbeddedDigraph {
    assert!(m <= 4);
    let mut d = Drawing::new();
    let outer = [(0.0, 3.0), (3.0, 0.0), (0.0, -3.0), (-3.0, 0.0)];
    let inner = [(0.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, 0.0)];
    for i in 0..4 {
        d.vertex(&format!("o{}", i + 1), outer[i].0, outer[i].1);
    }
    for i in 0..4 {
        d.vertex(&format!("i{}", i + 1), inner[i].0, inner[i].1);
    }
    // outer square clockwise, inner square counterclockwise
    for i in 0..4 {
        d.arc(
            &format!("b{}", i + 1),
            &format!("o{}", i + 1),
            &format!("o{}", i % 4 + 2 - (i / 3) * 4),
        );
    }
    for i in 0..4 {
        d.arc(
            &format!("c{}", i + 1),
            &format!("i{}", i % 4 + 2 - (i / 3) * 4),
            &format!("i{}", i + 1),
        );
    }
    for i in 0..m {
        let (t, h) = if i % 2 == 0 {
            (format!("i{}", i + 1), format!("o{}", i + 1))
        } else {
            (format!("o{}", i + 1), format!("i{}", i + 1))
        };
        d.arc(&format!("r{}", i + 1), &t, &h);
    }
    d.build(false).expect("join ring fixture")
}

/// Concentric squares; ring `j` (0 = innermost) is directed clockwise for
/// even `j`, counterclockwise otherwise, and consecutive rings are connected
/// by four radial arcs.  A standard stage for cycle-packing and noose tests.
pub fn onion(rings: usize) -> EmbeddedDigraph {
    assert!(rings >= 1);
    let mut d = Drawing::new();
    for j in 0..rings {
        let rad = 1.0 + j as f64;
        let pos = [(0.0, rad), (rad, 0.0), (0.0, -rad), (-rad, 0.0)];
        for i in 0..4 {
            d.vertex(&format!("v{}_{}", j, i), pos[i].0, pos[i].1);
        }
        for i in 0..4 {
            let (t, h) = if j % 2 == 0 {
                (i, (i + 1) % 4)
            } else {
                ((i + 1) % 4, i)
            };
            d.arc(
                &format!("ring{}_{}", j, i),
                &format!("v{}_{}", j, t),
                &format!("v{}_{}", j, h),
            );
        }
        if j > 0 {
            for i in 0..4 {
                d.arc(
                    &format!("rad{}_{}", j, i),
                    &format!("v{}_{}", j - 1, i),
                    &format!("v{}_{}", j, i),
                );
            }
        }
    }
    d.build(false).expect("onion fixture")
}

/// Concentric `width`-gon rings (ring j clockwise iff j even) with a full
/// radial column at every position; column i points outward iff i is even.
pub fn lattice_ring(rings: usize, width: usize) -> EmbeddedDigraph {
    assert!(rings >= 1 && width >= 3);
    let mut d = Drawing::new();
    for j in 0..rings {
        let rad = 1.0 + j as f64;
        for i in 0..width {
            // start north, advance clockwise
            let ang = std::f64::consts::FRAC_PI_2 - (i as f64) * std::f64::consts::TAU / width as f64;
            d.vertex(&format!("v{}_{}", j, i), rad * ang.cos(), rad * ang.sin());
        }
        for i in 0..width {
            let (t, h) = if j % 2 == 0 { (i, (i + 1) % width) } else { ((i + 1) % width, i) };
            d.arc(
                &format!("ring{}_{}", j, i),
                &format!("v{}_{}", j, t),
                &format!("v{}_{}", j, h),
            );
        }
        if j > 0 {
            for i in 0..width {
                let (t, h) = if i % 2 == 0 { (j - 1, j) } else { (j, j - 1) };
                d.arc(
                    &format!("rad{}_{}", j, i),
                    &format!("v{}_{}", t, i),
                    &format!("v{}_{}", h, i),
                );
            }
        }
    }
    d.build(false).expect("lattice fixture")
}

/// `rings` nested squares with no arcs between them (disconnected layers).
pub fn nested_squares(rings: usize) -> EmbeddedDigraph {
    assert!(rings >= 1);
    let mut d = Drawing::new();
    for j in 0..rings {
        let rad = 1.0 + j as f64;
        let pos = [(0.0, rad), (rad, 0.0), (0.0, -rad), (-rad, 0.0)];
        for i in 0..4 {
            d.vertex(&format!("v{}_{}", j, i), pos[i].0, pos[i].1);
        }
        for i in 0..4 {
            let (t, h) = if j % 2 == 0 { (i, (i + 1) % 4) } else { ((i + 1) % 4, i) };
            d.arc(
                &format!("ring{}_{}", j, i),
                &format!("v{}_{}", j, t),
                &format!("v{}_{}", j, h),
            );
        }
    }
    d.build(false).expect("nested squares fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tri_faces() {
        let g = tri();
        assert_eq!(g.face_count(), 2);
        let a1 = g.arc_by_name("a1").unwrap();
        // Drawn clockwise, so the interior lies to the right of a1.
        assert_ne!(g.left_face(a1), g.right_face(a1));
        assert_eq!(g.outer_face(), g.left_face(a1));
    }

    #[test]
    fn ring2_faces() {
        let g = ring2();
        assert_eq!(g.face_count(), 3);
        // inner triangle clockwise: its right faces are the inner disc
        let c1 = g.arc_by_name("c1").unwrap();
        let b1 = g.arc_by_name("b1").unwrap();
        assert_ne!(g.right_face(c1), g.outer_face());
        assert_ne!(g.left_face(c1), g.outer_face());
        // outer triangle counterclockwise: right face is the outer face
        assert_eq!(g.right_face(b1), g.outer_face());
        assert_eq!(g.left_face(b1), g.left_face(c1)); // the annulus
    }

    #[test]
    fn tri_enclosure() {
        let g = tri();
        let cyc: Vec<_> = ["a1", "a2", "a3"]
            .iter()
            .map(|n| g.arc_by_name(n).unwrap())
            .collect();
        let enc = g.enclosed(&cyc).unwrap();
        assert_eq!(enc.orientation, crate::embed::Orientation::Clockwise);
        assert_eq!(enc.faces.len(), 1);
    }

    #[test]
    fn ring2_enclosures() {
        let g = ring2();
        let inner: Vec<_> = ["c1", "c2", "c3"]
            .iter()
            .map(|n| g.arc_by_name(n).unwrap())
            .collect();
        let enc = g.enclosed(&inner).unwrap();
        assert_eq!(enc.orientation, crate::embed::Orientation::Clockwise);
        assert_eq!(enc.faces.len(), 1);
        for v in ["o1", "o2", "o3"] {
            assert!(!g.encloses_vertex(&enc, &inner, g.vertex_by_name(v).unwrap()));
        }
        let outer: Vec<_> = ["b1", "b2", "b3"]
            .iter()
            .map(|n| g.arc_by_name(n).unwrap())
            .collect();
        let enc = g.enclosed(&outer).unwrap();
        assert_eq!(enc.orientation, crate::embed::Orientation::Counterclockwise);
        assert_eq!(enc.faces.len(), 2);
        for v in ["i1", "i2", "i3"] {
            assert!(g.encloses_vertex(&enc, &outer, g.vertex_by_name(v).unwrap()));
        }
    }

    #[test]
    fn join_ring_builds() {
        for m in 0..=4 {
            let g = join_ring(m);
            // V=8, E=8+m, Euler: F = 2 - V + E = 2 + m  ... per component.
            if m == 0 {
                // two separate squares drawn concentrically share the annulus
                assert_eq!(g.face_count(), 3);
            } else {
                assert_eq!(g.face_count(), 2 + m);
            }
        }
    }

    #[test]
    fn onion_builds() {
        for r in 1..=7 {
            let g = onion(r);
            assert_eq!(g.vertex_count(), 4 * r);
        }
    }

    #[test]
    fn json_roundtrip() {
        let g = ring2();
        let text = g.to_json();
        let h = EmbeddedDigraph::from_json(&text, false).unwrap();
        assert_eq!(h.vertex_count(), g.vertex_count());
        assert_eq!(h.face_count(), g.face_count());
        // outer face is preserved through the anchor dart
        let b1 = h.arc_by_name("b1").unwrap();
        assert_eq!(h.right_face(b1), h.outer_face());
    }

    #[test]
    fn delete_vertex_merges_faces() {
        let g = onion(2);
        let v = g.vertex_by_name("v0_0").unwrap();
        let (h, _) = g.delete_vertex(v).unwrap();
        assert_eq!(h.vertex_count(), 7);
        // v0_0 had degree 3 (two ring arcs + one radial)
        assert_eq!(h.arc_count(), 12 - 3);
    }
}
