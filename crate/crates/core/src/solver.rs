//! Exhaustive ground-truth solver for vertex-disjoint path instances.
//!
//! Everything here is deliberately brute force: it is the reference the rest
//! of the library is tested against, so clarity and exactness beat speed.

use crate::curves::{winding_number, CurveError, ReferenceCurve};
use crate::embed::{ArcId, EmbeddedDigraph, VertexId};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Solution {
    /// One directed arc sequence per terminal pair, in pair order.
    pub paths: Vec<Vec<ArcId>>,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("instance exceeds search budget ({0})")]
    SizeBudget(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_vertices: usize,
    pub max_pairs: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_vertices: 30, max_pairs: 4 }
    }
}

fn check_budget(g: &EmbeddedDigraph, budget: SearchBudget) -> Result<(), SolverError> {
    if g.vertex_count() > budget.max_vertices {
        return Err(SolverError::SizeBudget(format!(
            "{} vertices > {}",
            g.vertex_count(),
            budget.max_vertices
        )));
    }
    if g.terminals().len() > budget.max_pairs {
        return Err(SolverError::SizeBudget(format!(
            "{} pairs > {}",
            g.terminals().len(),
            budget.max_pairs
        )));
    }
    Ok(())
}

/// Depth-first enumeration of complete solutions in canonical order (pairs in
/// index order, arcs in id order).  `on_solution` returns false to stop.
fn enumerate_solutions_inner(
    g: &EmbeddedDigraph,
    pair: usize,
    used: &mut Vec<bool>,
    paths: &mut Vec<Vec<ArcId>>,
    on_solution: &mut dyn FnMut(&[Vec<ArcId>]) -> bool,
) -> bool {
    let pairs = g.terminals();
    if pair == pairs.len() {
        return on_solution(paths);
    }
    let (s, t) = pairs[pair];
    // walk from s towards t over unused vertices
    fn dfs(
        g: &EmbeddedDigraph,
        at: VertexId,
        t: VertexId,
        pair: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<ArcId>,
        paths: &mut Vec<Vec<ArcId>>,
        on_solution: &mut dyn FnMut(&[Vec<ArcId>]) -> bool,
    ) -> bool {
        if at == t {
            paths.push(cur.clone());
            let go_on = enumerate_solutions_inner(g, pair + 1, used, paths, on_solution);
            paths.pop();
            return go_on;
        }
        let mut outs = g.out_arcs(at);
        outs.sort_by_key(|a| a.0);
        for a in outs {
            let h = g.head(a);
            if used[h.0 as usize] {
                continue;
            }
            used[h.0 as usize] = true;
            cur.push(a);
            let go_on = dfs(g, h, t, pair, used, cur, paths, on_solution);
            cur.pop();
            used[h.0 as usize] = false;
            if !go_on {
                return false;
            }
        }
        true
    }
    if used[s.0 as usize] {
        return true; // s consumed by an earlier path: dead branch
    }
    used[s.0 as usize] = true;
    let mut cur = Vec::new();
    let go_on = dfs(g, s, t, pair, used, &mut cur, paths, on_solution);
    used[s.0 as usize] = false;
    go_on
}

/// Run `on_solution` for every solution in canonical order.
pub fn for_each_solution(
    g: &EmbeddedDigraph,
    budget: SearchBudget,
    mut on_solution: impl FnMut(&[Vec<ArcId>]) -> bool,
) -> Result<(), SolverError> {
    check_budget(g, budget)?;
    let mut used = vec![false; g.vertex_count()];
    let mut paths = Vec::new();
    enumerate_solutions_inner(g, 0, &mut used, &mut paths, &mut on_solution);
    Ok(())
}

/// First (canonical) solution, if the instance is feasible.
pub fn solve_exact(g: &EmbeddedDigraph) -> Result<Option<Solution>, SolverError> {
    solve_exact_with(g, SearchBudget::default())
}

pub fn solve_exact_with(
    g: &EmbeddedDigraph,
    budget: SearchBudget,
) -> Result<Option<Solution>, SolverError> {
    let mut found = None;
    for_each_solution(g, budget, |paths| {
        found = Some(Solution { paths: paths.to_vec() });
        false
    })?;
    Ok(found)
}

/// True iff the instance has exactly one solution.
pub fn is_unique(g: &EmbeddedDigraph) -> Result<bool, SolverError> {
    let mut count = 0;
    for_each_solution(g, SearchBudget::default(), |_| {
        count += 1;
        count < 2
    })?;
    Ok(count == 1)
}

/// Optimum under a two-level objective, ties broken by canonical order.
pub fn minimal_solution_by(
    g: &EmbeddedDigraph,
    budget: SearchBudget,
    objective: impl Fn(&Solution) -> (u64, u64),
) -> Result<Option<Solution>, SolverError> {
    let mut best: Option<((u64, u64), Solution)> = None;
    for_each_solution(g, budget, |paths| {
        let sol = Solution { paths: paths.to_vec() };
        let score = objective(&sol);
        if best.as_ref().map_or(true, |(b, _)| score < *b) {
            best = Some((score, sol));
        }
        true
    })?;
    Ok(best.map(|(_, s)| s))
}

/// Validate a solution against the instance it claims to solve.
pub fn validate_solution(g: &EmbeddedDigraph, sol: &Solution) -> bool {
    let pairs = g.terminals();
    if sol.paths.len() != pairs.len() {
        return false;
    }
    let mut used = vec![false; g.vertex_count()];
    for (path, &(s, t)) in sol.paths.iter().zip(pairs) {
        let mut at = s;
        if used[at.0 as usize] {
            return false;
        }
        used[at.0 as usize] = true;
        for &a in path {
            if g.tail(a) != at {
                return false;
            }
            at = g.head(a);
            if used[at.0 as usize] {
                return false;
            }
            used[at.0 as usize] = true;
        }
        if at != t {
            return false;
        }
    }
    true
}

/// A family of vertex-disjoint paths crossing a ring, one winding number per
/// path relative to the reference curve.
#[derive(Clone, Debug)]
pub struct CrossingFamily {
    pub paths: Vec<Vec<ArcId>>,
    pub windings: Vec<i32>,
}

/// All families of vertex-disjoint paths with the given endpoint pairs.  A
/// pair (u, v) is connected by a simple path in either arc direction as long
/// as one endpoint touches the reference curve's first face and the other
/// its last face; windings are taken traversing from the first-face side.
pub fn enumerate_crossing_families(
    g: &EmbeddedDigraph,
    w: &ReferenceCurve,
    pairs: &[(VertexId, VertexId)],
    budget: SearchBudget,
) -> Result<Vec<CrossingFamily>, SolverError> {
    if g.vertex_count() > budget.max_vertices {
        return Err(SolverError::SizeBudget(format!(
            "{} vertices > {}",
            g.vertex_count(),
            budget.max_vertices
        )));
    }
    let mut out = Vec::new();
    let mut used = vec![false; g.vertex_count()];
    let mut family: Vec<Vec<ArcId>> = Vec::new();
    fn paths_between(
        g: &EmbeddedDigraph,
        at: VertexId,
        t: VertexId,
        used: &mut Vec<bool>,
        cur: &mut Vec<ArcId>,
        sink: &mut dyn FnMut(&[ArcId], &mut Vec<bool>),
    ) {
        if at == t {
            sink(cur, used);
            return;
        }
        let mut outs = g.out_arcs(at);
        outs.sort_by_key(|a| a.0);
        for a in outs {
            let h = g.head(a);
            if used[h.0 as usize] {
                continue;
            }
            used[h.0 as usize] = true;
            cur.push(a);
            paths_between(g, h, t, used, cur, sink);
            cur.pop();
            used[h.0 as usize] = false;
        }
    }
    fn rec(
        g: &EmbeddedDigraph,
        pairs: &[(VertexId, VertexId)],
        i: usize,
        used: &mut Vec<bool>,
        family: &mut Vec<Vec<ArcId>>,
        out: &mut Vec<Vec<Vec<ArcId>>>,
    ) {
        if i == pairs.len() {
            out.push(family.clone());
            return;
        }
        let (u, v) = pairs[i];
        if used[u.0 as usize] || used[v.0 as usize] {
            return;
        }
        // try both directions of travel between the endpoints
        for (s, t) in [(u, v), (v, u)] {
            used[s.0 as usize] = true;
            let mut cur = Vec::new();
            // collect candidate paths first to keep the borrow simple
            let mut found: Vec<Vec<ArcId>> = Vec::new();
            paths_between(g, s, t, used, &mut cur, &mut |p, _| found.push(p.to_vec()));
            used[s.0 as usize] = false;
            for p in found {
                let mut touched: Vec<VertexId> = vec![s];
                for &a in &p {
                    touched.push(g.head(a));
                }
                if touched.iter().any(|x| used[x.0 as usize]) {
                    continue;
                }
                for x in &touched {
                    used[x.0 as usize] = true;
                }
                family.push(p);
                rec(g, pairs, i + 1, used, family, out);
                family.pop();
                for x in &touched {
                    used[x.0 as usize] = false;
                }
            }
            if u == v {
                break;
            }
        }
    }
    let mut raw = Vec::new();
    rec(g, pairs, 0, &mut used, &mut family, &mut raw);
    for fam in raw {
        let mut windings = Vec::with_capacity(fam.len());
        let mut ok = true;
        for p in &fam {
            match winding_number(g, p, w) {
                Ok(x) => windings.push(x),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(CrossingFamily { paths: fam, windings });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::curve_through;
    use crate::fixtures;

    #[test]
    fn tri_single_pair() {
        let mut g = fixtures::tri();
        let v1 = g.vertex_by_name("v1").unwrap();
        let v3 = g.vertex_by_name("v3").unwrap();
        g.set_terminals(vec![(v1, v3)]);
        let sol = solve_exact(&g).unwrap().unwrap();
        assert!(validate_solution(&g, &sol));
        let names: Vec<_> = sol.paths[0].iter().map(|&a| g.arc_name(a)).collect();
        assert_eq!(names, vec!["a1", "a2"]);
        assert!(is_unique(&g).unwrap());
    }

    #[test]
    fn cut_vertex_blocks_two_pairs() {
        // two pairs forced through the shared middle vertex m
        let mut d = fixtures::Drawing::new();
        d.vertex("s1", -2.0, 1.0)
            .vertex("s2", -2.0, -1.0)
            .vertex("m", 0.0, 0.0)
            .vertex("t1", 2.0, 1.0)
            .vertex("t2", 2.0, -1.0)
            .arc("e1", "s1", "m")
            .arc("e2", "s2", "m")
            .arc("e3", "m", "t1")
            .arc("e4", "m", "t2")
            .terminal_pair("s1", "t1")
            .terminal_pair("s2", "t2");
        let g = d.build(false).unwrap();
        assert!(solve_exact(&g).unwrap().is_none());
    }

    #[test]
    fn parallel_routes_not_unique() {
        let mut d = fixtures::Drawing::new();
        d.vertex("s", -2.0, 0.0)
            .vertex("u", 0.0, 1.0)
            .vertex("w", 0.0, -1.0)
            .vertex("t", 2.0, 0.0)
            .arc("su", "s", "u")
            .arc("ut", "u", "t")
            .arc("sw", "s", "w")
            .arc("wt", "w", "t")
            .terminal_pair("s", "t");
        let g = d.build(true).unwrap();
        assert!(solve_exact(&g).unwrap().is_some());
        assert!(!is_unique(&g).unwrap());
    }

    #[test]
    fn budget_enforced() {
        let g = fixtures::onion(8); // 36 vertices
        assert!(matches!(solve_exact(&g), Err(SolverError::SizeBudget(_))));
    }

    #[test]
    fn crossing_families_on_join_ring() {
        let g = fixtures::join_ring(4);
        // radial cut of the annulus: inner disc face -> annulus face -> outer
        let c1 = g.arc_by_name("c1").unwrap();
        let disc = if g.left_face(c1) == g.outer_face() { g.right_face(c1) } else { g.left_face(c1) };
        // the annulus face on the other side of c1
        let mid = if g.left_face(c1) == disc { g.right_face(c1) } else { g.left_face(c1) };
        assert_ne!(mid, g.outer_face());
        // pick an outer-cycle arc with mid on one side
        let b = (1..=4)
            .map(|i| g.arc_by_name(&format!("b{i}")).unwrap())
            .find(|&a| g.left_face(a) == mid || g.right_face(a) == mid)
            .unwrap();
        let w = ReferenceCurve::new(
            &g,
            curve_through(&g, vec![disc, mid, g.outer_face()], &[c1, b]).unwrap(),
        )
        .unwrap();
        let o2 = g.vertex_by_name("o2").unwrap();
        let i2 = g.vertex_by_name("i2").unwrap();
        let fams =
            enumerate_crossing_families(&g, &w, &[(i2, o2)], SearchBudget::default()).unwrap();
        assert!(!fams.is_empty());
        for f in &fams {
            let spread = f.windings.iter().max().unwrap() - f.windings.iter().min().unwrap();
            assert!(spread <= 1);
        }
    }
}
