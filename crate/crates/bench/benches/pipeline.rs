//! Smoke benchmarks over the main pipeline stages: embedding construction,
//! duality dichotomies, exact solving, and bundle recognition.

use criterion::{criterion_group, criterion_main, Criterion};
use pdp_core::generate::{generate, ring_instance, Profile};
use pdp_core::rings::{cycles_or_curve, join_or_noose};
use pdp_core::solver::solve_exact;
use std::hint::black_box;

fn bench_build(c: &mut Criterion) {
    let json = generate(Profile::Ring, 42, 0).unwrap().to_json();
    c.bench_function("parse_and_embed_ring", |b| {
        b.iter(|| pdp_core::EmbeddedDigraph::from_json(black_box(&json), false).unwrap())
    });
}

fn bench_duality(c: &mut Criterion) {
    let inst = ring_instance(42, false).unwrap();
    c.bench_function("cycles_or_curve_r4", |b| {
        b.iter(|| cycles_or_curve(&inst.graph, inst.f_in, inst.f_out, black_box(4)).unwrap())
    });
    c.bench_function("join_or_noose_r2", |b| {
        b.iter(|| join_or_noose(&inst.graph, &inst.ring, black_box(2)).unwrap())
    });
}

fn bench_solve(c: &mut Criterion) {
    let g = generate(Profile::Planted, 42, 2).unwrap();
    c.bench_function("solve_exact_planted_k2", |b| {
        b.iter(|| solve_exact(black_box(&g)).unwrap())
    });
}

fn bench_bundles(c: &mut Criterion) {
    let g = pdp_core::fixtures::lattice_ring(3, 6);
    c.bench_function("face_traversal_lattice", |b| {
        b.iter(|| {
            let g = black_box(&g);
            let mut n = 0usize;
            for f in 0..g.face_count() {
                n += g.face_vertices(pdp_core::FaceId(f as u32)).len();
            }
            n
        })
    });
}

criterion_group!(benches, bench_build, bench_duality, bench_solve, bench_bundles);
criterion_main!(benches);
