//! Seeded random instance generators.
//!
//! Four profiles, all deterministic per seed:
//! - `ring`: concentric alternating-orientation polygons joined by radials;
//! - `disc`: a convex polygon with random non-crossing chords and terminal
//!   pendants on the hull;
//! - `planted`: k disjoint west-to-east lanes plus random rungs between
//!   them, so the lanes themselves witness feasibility;
//! - `planted-unique`: lanes plus dead-end pendants only, so the planted
//!   routes are the unique solution.

use crate::embed::{EmbeddedDigraph, FaceId, GraphError};
use crate::fixtures::Drawing;
use crate::rings::Ring;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Profile {
    Ring,
    Disc,
    Planted,
    PlantedUnique,
}

impl std::str::FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ring" => Ok(Profile::Ring),
            "disc" => Ok(Profile::Disc),
            "planted" => Ok(Profile::Planted),
            "planted-unique" => Ok(Profile::PlantedUnique),
            other => Err(format!("unknown profile '{other}'")),
        }
    }
}

/// A generated ring instance together with its ring designation.
pub struct RingInstance {
    pub graph: EmbeddedDigraph,
    pub ring: Ring,
    pub f_in: FaceId,
    pub f_out: FaceId,
}

/// Concentric alternating polygons with radials; `small` caps the instance
/// at 14 vertices (two layers) for exhaustive family enumeration.
pub fn ring_instance(seed: u64, small: bool) -> Result<RingInstance, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x52494e47);
    let (layers, width) = if small {
        (2usize, *[4usize, 6].get(rng.gen_range(0..2)).unwrap())
    } else {
        let layers = rng.gen_range(2..=3usize);
        let width = [4usize, 6, 8][rng.gen_range(0..3)];
        (layers, width)
    };
    let mut d = Drawing::new();
    for j in 0..layers {
        let r = (j + 1) as f64;
        for i in 0..width {
            let ang = TAU * i as f64 / width as f64;
            d.vertex(&format!("v{j}_{i}"), r * ang.cos(), r * ang.sin());
        }
        // alternate orientation per layer
        let cw = j % 2 == 1;
        for i in 0..width {
            let (from, to) = if cw { ((i + 1) % width, i) } else { (i, (i + 1) % width) };
            d.arc(&format!("c{j}_{i}"), &format!("v{j}_{from}"), &format!("v{j}_{to}"));
        }
    }
    // radials between consecutive layers at random distinct positions
    for j in 0..layers - 1 {
        let count = rng.gen_range(1..=2usize);
        let mut pos: Vec<usize> = (0..width).collect();
        for i in (1..pos.len()).rev() {
            pos.swap(i, rng.gen_range(0..=i));
        }
        for (n, &i) in pos.iter().take(count).enumerate() {
            let (from, to) = if rng.gen_bool(0.5) {
                (format!("v{}_{i}", j + 1), format!("v{j}_{i}"))
            } else {
                (format!("v{j}_{i}"), format!("v{}_{i}", j + 1))
            };
            d.arc(&format!("r{j}_{n}"), &from, &to);
        }
    }
    let graph = d.build(false)?;
    let inner: Vec<_> = (0..width).map(|i| graph.arc_by_name(&format!("c0_{i}")).unwrap()).collect();
    let outer: Vec<_> = (0..width)
        .map(|i| graph.arc_by_name(&format!("c{}_{i}", layers - 1)).unwrap())
        .collect();
    let f_in = *graph.enclosed(&inner)?.faces.iter().next().expect("hole face");
    let f_out = graph.outer_face();
    Ok(RingInstance { graph, ring: Ring { inner, outer }, f_in, f_out })
}

/// Convex polygon, random non-crossing chords, pendant terminals on the hull.
fn disc_instance(seed: u64, k: usize) -> Result<EmbeddedDigraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x44495343);
    let n = rng.gen_range(6..=10usize);
    let mut d = Drawing::new();
    for i in 0..n {
        let ang = TAU * i as f64 / n as f64;
        d.vertex(&format!("h{i}"), 3.0 * ang.cos(), 3.0 * ang.sin());
    }
    for i in 0..n {
        let j = (i + 1) % n;
        let (from, to) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
        d.arc(&format!("e{i}"), &format!("h{from}"), &format!("h{to}"));
    }
    // chords: keep a candidate iff it crosses no kept chord (endpoints of two
    // straight chords of a convex polygon interleave iff the chords cross)
    let mut chords: Vec<(usize, usize)> = Vec::new();
    let crosses = |&(a, b): &(usize, usize), &(c, d): &(usize, usize)| {
        let between = |x: usize, lo: usize, hi: usize| {
            if lo < hi {
                lo < x && x < hi
            } else {
                x > lo || x < hi
            }
        };
        between(c, a, b) != between(d, a, b) && c != a && c != b && d != a && d != b
    };
    for _ in 0..2 * n {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || (a + 1) % n == b || (b + 1) % n == a {
            continue;
        }
        let c = (a.min(b), a.max(b));
        if chords.iter().any(|p| p == &c || crosses(p, &c)) {
            continue;
        }
        chords.push(c);
    }
    for (ci, &(a, b)) in chords.iter().enumerate() {
        let (from, to) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        d.arc(&format!("d{ci}"), &format!("h{from}"), &format!("h{to}"));
    }
    // terminal pendants on distinct hull vertices, pointing outward
    let mut slots: Vec<usize> = (0..n).collect();
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.gen_range(0..=i));
    }
    for p in 0..k.min(n / 2) {
        let (si, ti) = (slots[2 * p], slots[2 * p + 1]);
        for (role, hv) in [("s", si), ("t", ti)] {
            let ang = TAU * hv as f64 / n as f64;
            d.vertex(&format!("{role}{p}"), 4.0 * ang.cos(), 4.0 * ang.sin());
        }
        d.arc(&format!("as{p}"), &format!("s{p}"), &format!("h{si}"));
        d.arc(&format!("at{p}"), &format!("h{ti}"), &format!("t{p}"));
        d.terminal_pair(&format!("s{p}"), &format!("t{p}"));
    }
    d.build(false)
}

/// k west-to-east lanes; with `rungs`, random connectors between adjacent
/// lanes; without, dead-end pendants only (unique solution).
fn planted_instance(seed: u64, k: usize, rungs: bool) -> Result<EmbeddedDigraph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x504c414e);
    let k = k.clamp(1, 3);
    let mut d = Drawing::new();
    let mut len = Vec::new();
    for lane in 0..k {
        let l = rng.gen_range(3..=6usize);
        len.push(l);
        for x in 0..=l {
            d.vertex(&format!("v{lane}_{x}"), x as f64, 2.0 * lane as f64);
        }
        for x in 0..l {
            d.arc(&format!("a{lane}_{x}"), &format!("v{lane}_{x}"), &format!("v{lane}_{}", x + 1));
        }
        d.terminal_pair(&format!("v{lane}_0"), &format!("v{lane}_{l}"));
    }
    if rungs {
        for lane in 0..k.saturating_sub(1) {
            // strictly between the lane endpoints, which stay degree 1
            let max_x = len[lane].min(len[lane + 1]) - 1;
            if max_x < 1 {
                continue;
            }
            let mut used = vec![false; max_x + 1];
            for r in 0..rng.gen_range(0..=2usize) {
                let x = rng.gen_range(1..=max_x);
                if used[x] {
                    continue;
                }
                used[x] = true;
                let (from, to) = if rng.gen_bool(0.5) {
                    (format!("v{lane}_{x}"), format!("v{}_{x}", lane + 1))
                } else {
                    (format!("v{}_{x}", lane + 1), format!("v{lane}_{x}"))
                };
                d.arc(&format!("r{lane}_{r}"), &from, &to);
            }
        }
    } else {
        for lane in 0..k {
            for p in 0..rng.gen_range(0..=2usize) {
                let x = rng.gen_range(1..len[lane]);
                let name = format!("p{lane}_{p}");
                if d.has_vertex(&name) {
                    continue;
                }
                d.vertex(&name, x as f64 + 0.4, 2.0 * lane as f64 + 0.5 + 0.1 * p as f64);
                d.arc(&format!("pa{lane}_{p}"), &format!("v{lane}_{x}"), &name);
            }
        }
    }
    d.build(false)
}

/// Generate an instance of the given profile; `k` bounds the number of
/// terminal pairs where the profile has any.
pub fn generate(profile: Profile, seed: u64, k: usize) -> Result<EmbeddedDigraph, GraphError> {
    match profile {
        Profile::Ring => Ok(ring_instance(seed, false)?.graph),
        Profile::Disc => disc_instance(seed, k.max(1)),
        Profile::Planted => planted_instance(seed, k.max(1), true),
        Profile::PlantedUnique => planted_instance(seed, k.max(1), false),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{is_unique, solve_exact};

    #[test]
    fn generators_are_deterministic_and_valid() {
        for seed in 0..25u64 {
            for profile in [Profile::Ring, Profile::Disc, Profile::Planted, Profile::PlantedUnique]
            {
                let g1 = generate(profile, seed, 2).unwrap();
                let g2 = generate(profile, seed, 2).unwrap();
                assert_eq!(g1.to_json(), g2.to_json(), "{profile:?} seed {seed}");
                let back = EmbeddedDigraph::from_json(&g1.to_json(), false).unwrap();
                assert_eq!(back.to_json(), g1.to_json());
            }
        }
    }

    #[test]
    fn planted_instances_are_feasible() {
        for seed in 0..25u64 {
            let g = generate(Profile::Planted, seed, 2).unwrap();
            let sol = solve_exact(&g).unwrap();
            assert!(sol.is_some(), "seed {seed}");
        }
    }

    #[test]
    fn planted_unique_instances_have_one_solution() {
        for seed in 0..25u64 {
            let g = generate(Profile::PlantedUnique, seed, 2).unwrap();
            assert!(is_unique(&g).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn ring_instances_designate_a_valid_ring() {
        for seed in 0..25u64 {
            let ri = ring_instance(seed, false).unwrap();
            assert!(ri.graph.vertex_count() <= 30);
            assert_ne!(ri.f_in, ri.f_out);
            let small = ring_instance(seed, true).unwrap();
            assert!(small.graph.vertex_count() <= 14);
        }
    }
}
