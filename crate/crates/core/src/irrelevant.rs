//! The irrelevant-vertex rule: the recursive bound on nested chord
//! structures, the search for terminal-free alternating concentric cycle
//! systems, and the reduction that deletes the centre of such a system —
//! optionally cross-checked against the exhaustive solver.

use crate::embed::{EmbeddedDigraph, GraphError, VertexId};
use crate::rings::{pack_alternating_cycles, CycleFamily, PackResult, RingError};
use crate::solver::{solve_exact, SolverError};
use num_bigint::BigUint;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IrrelevantError {
    #[error("deleting {vertex} changed feasibility; instance retained")]
    VerificationFailed {
        vertex: String,
        /// the offending instance, serialized for post-mortem study
        instance_json: String,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// f(k, 0) = base; f(k, t) = 40·(2^k+1)·(f(k,t−1)+5)·(2k+4).  Arbitrary
/// precision: the values are astronomically large already for small k, t.
pub fn bend_bound(k: u32, t: u32, base: &BigUint) -> BigUint {
    assert!(k >= 1, "at least one path");
    let s = (BigUint::from(1u32) << k) + 1u32; // 2^k + 1
    let factor = BigUint::from(40u32) * &s * (2 * k + 4);
    let mut f = base.clone();
    for _ in 0..t {
        f = &factor * (f + 5u32);
    }
    f
}

/// A terminal-free system of alternating concentric cycles centred on a
/// vertex of the innermost cycle.
#[derive(Clone, Debug)]
pub struct IrrelevanceWitness {
    pub center: VertexId,
    /// innermost first
    pub cycles: CycleFamily,
}

/// Search every face (canonical id order) for d alternating concentric
/// cycles packed outward, none of which encloses or touches a terminal; the
/// witness centre is the first canonical vertex of the innermost cycle.
pub fn find_concentric_system(
    g: &EmbeddedDigraph,
    d: usize,
) -> Result<Option<IrrelevanceWitness>, IrrelevantError> {
    if d < 1 || g.arc_count() == 0 {
        return Ok(None);
    }
    let terminal_vertices: Vec<VertexId> =
        g.terminals().iter().flat_map(|&(s, t)| [s, t]).collect();
    for f in g.face_ids() {
        if f == g.outer_face() {
            continue;
        }
        let fam = match pack_alternating_cycles(g, f, g.outer_face(), d) {
            Ok(PackResult::Family(fam)) => fam,
            Ok(PackResult::Stalled { .. }) => continue,
            Err(RingError::SizeBudget(m)) => return Err(RingError::SizeBudget(m).into()),
            Err(_) => continue,
        };
        let outermost = fam.cycles.last().expect("d >= 1");
        let enc = g.enclosed(outermost)?;
        let on_cycles = |v: VertexId| {
            fam.cycles
                .iter()
                .any(|c| c.iter().any(|&a| g.tail(a) == v || g.head(a) == v))
        };
        let blocked = terminal_vertices
            .iter()
            .any(|&v| on_cycles(v) || g.encloses_vertex(&enc, outermost, v));
        if blocked {
            continue;
        }
        let center = fam.cycles[0]
            .iter()
            .flat_map(|&a| [g.tail(a), g.head(a)])
            .min()
            .expect("nonempty cycle");
        return Ok(Some(IrrelevanceWitness { center, cycles: fam }));
    }
    Ok(None)
}

/// One applied deletion.
#[derive(Clone, Debug)]
pub struct ReductionStep {
    pub vertex: String,
    pub d: usize,
    pub verified: bool,
}

pub fn log_to_json(log: &[ReductionStep]) -> Value {
    Value::Array(
        log.iter()
            .map(|s| json!({ "vertex": s.vertex, "d": s.d, "verified": s.verified }))
            .collect(),
    )
}

/// Repeatedly find a witness and delete its centre.  With `verify` set, the
/// exhaustive solver must agree on feasibility before and after every
/// deletion; a disagreement aborts with the offending instance retained.
/// Verification is the literal meaning of irrelevance, so it is sound for
/// any d; without the theorem's (astronomical) d the rule itself is
/// heuristic, which is why verification defaults on at desk scale.
pub fn apply_irrelevant_rule(
    g: &EmbeddedDigraph,
    d: usize,
    verify: bool,
) -> Result<(EmbeddedDigraph, Vec<ReductionStep>), IrrelevantError> {
    let mut cur = g.clone();
    let mut log = Vec::new();
    loop {
        let Some(witness) = find_concentric_system(&cur, d)? else {
            return Ok((cur, log));
        };
        let name = cur.vertex_name(witness.center).to_string();
        let (next, _) = cur.delete_vertex(witness.center)?;
        if verify {
            let before = solve_exact(&cur)?.is_some();
            let after = solve_exact(&next)?.is_some();
            if before != after {
                return Err(IrrelevantError::VerificationFailed {
                    vertex: name,
                    instance_json: cur.to_json(),
                });
            }
        }
        log.push(ReductionStep { vertex: name, d, verified: verify });
        cur = next;
    }
}
