//! Criterion benchmarks for the hot kernels: the ray-sampling trace loop,
//! straightening, reflection-group closure, and the exact no-return
//! enumeration.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use billiards_core::flow::{shoot, straighten, PhaseState, VertexPolicy};
use billiards_core::geom::{Point2, Vec2};
use billiards_core::illumination::{illuminate_search, SearchBudget};
use billiards_core::polygon::DEFAULT_MAX_DEN;
use billiards_core::tokarsky::builtin::room22;
use billiards_core::tokarsky::{verify_no_return_exact, CoxeterTriangle};
use billiards_core::unfolding::{generate_group, unfold, DEFAULT_CLOSURE_BOUND};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn room22_surface() -> billiards_core::UnfoldedSurface<f64> {
    let (room, _) = room22();
    let w = room.polygon.rationality(DEFAULT_MAX_DEN).unwrap();
    unfold(room.polygon.clone(), w, DEFAULT_CLOSURE_BOUND).unwrap()
}

fn bench_shoot(c: &mut Criterion) {
    let m = room22_surface();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("shoot_room22_len100", |b| {
        b.iter(|| {
            let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, co) = theta.sin_cos();
            let traj = shoot(
                &m.base,
                &m.witness,
                PhaseState {
                    point: Point2::new(0.31, 0.17),
                    direction: Vec2::new(co, s),
                },
                100.0,
                VertexPolicy::StopAtVertex,
            );
            black_box(traj.ok().map(|t| t.bounces.len()))
        })
    });
}

fn bench_straighten(c: &mut Criterion) {
    let m = room22_surface();
    let traj = shoot(
        &m.base,
        &m.witness,
        PhaseState { point: Point2::new(0.31, 0.17), direction: Vec2::new(0.8, 0.6) },
        100.0,
        VertexPolicy::StopAtVertex,
    )
    .unwrap();
    c.bench_function("straighten_room22_len100", |b| {
        b.iter(|| black_box(straighten(&m, &traj).endpoint_sheet))
    });
}

fn bench_group_closure(c: &mut Criterion) {
    let (q, w) = billiards_core::tokarsky::sampling::lemma_triangle(32, 13);
    c.bench_function("group_closure_d32", |b| {
        b.iter(|| black_box(generate_group(&q, &w, DEFAULT_CLOSURE_BOUND).unwrap().order()))
    });
}

fn bench_no_return(c: &mut Criterion) {
    c.bench_function("no_return_exact_244_r100", |b| {
        b.iter(|| {
            black_box(
                verify_no_return_exact(CoxeterTriangle::RIGHT_ISOSCELES, 100.0)
                    .images_checked,
            )
        })
    });
}

fn bench_illuminate(c: &mut Criterion) {
    let m = room22_surface();
    let (room, (c1, c2)) = room22();
    let a = room.to_plane(c1);
    let b2 = room.to_plane(c2);
    c.bench_function("illuminate_room22_1k_rays", |b| {
        b.iter(|| {
            black_box(
                illuminate_search(&m, &a, &b2, &SearchBudget::new(80.0, 1000, 9))
                    .connected(),
            )
        })
    });
}

criterion_group!(
    benches,
    bench_shoot,
    bench_straighten,
    bench_group_closure,
    bench_no_return,
    bench_illuminate
);
criterion_main!(benches);
