//! Property tests for the kernel invariants: group axioms, isometry of
//! the group action, development/folding duality, and the avoidance
//! correspondence between trajectories and their straightenings.

use billiards_core::flow::{
    fold, shoot, straighten, AffineIso, PhaseState, Termination, VertexPolicy,
};
use billiards_core::geom::{DihedralElement, Point2, RationalAngle, Vec2};
use billiards_core::illumination::{illuminate_search, IlluminationOutcome, SearchBudget};
use billiards_core::polygon::{Polygon, DEFAULT_MAX_DEN};
use billiards_core::unfolding::{generate_group, unfold, DEFAULT_CLOSURE_BOUND};
use num_rational::BigRational;
use proptest::prelude::*;

fn dihedral_elements(n: i64) -> Vec<DihedralElement> {
    let mut out = Vec::new();
    for k in 0..n {
        out.push(DihedralElement::rot(2 * k, n));
        out.push(DihedralElement::refl(k, n));
    }
    out
}

#[test]
fn group_axioms_exhaustive_d8() {
    let els = dihedral_elements(8);
    assert_eq!(els.len(), 16);
    // closure + associativity + identity + inverses, exhaustively
    for a in &els {
        assert_eq!(a.compose(&a.inverse()), DihedralElement::IDENTITY);
        assert_eq!(a.compose(&DihedralElement::IDENTITY), *a);
        for b in &els {
            assert!(els.contains(&a.compose(b)));
            for c in &els {
                assert_eq!(
                    a.compose(b).compose(c),
                    a.compose(&b.compose(c)),
                    "associativity fails at {a} {b} {c}"
                );
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_action_is_isometric(
        num in -24_i64..24,
        den in 1_i64..12,
        refl in any::<bool>(),
        px in -5.0_f64..5.0,
        py in -5.0_f64..5.0,
        qx in -5.0_f64..5.0,
        qy in -5.0_f64..5.0,
    ) {
        let g = if refl {
            DihedralElement::refl(num, den)
        } else {
            DihedralElement::rot(num, den)
        };
        let p = Point2::new(px, py);
        let q = Point2::new(qx, qy);
        let gp = billiards_core::geom::apply(&g, &p);
        let gq = billiards_core::geom::apply(&g, &q);
        let before = p.dist_f64(&q);
        let after = gp.dist_f64(&gq);
        prop_assert!((before - after).abs() <= 4.0 * billiards_core::geom::EPS_POINT);
    }

    #[test]
    fn matrix_respects_composition(
        n1 in -24_i64..24, d1 in 1_i64..12, r1 in any::<bool>(),
        n2 in -24_i64..24, d2 in 1_i64..12, r2 in any::<bool>(),
    ) {
        let a = if r1 { DihedralElement::refl(n1, d1) } else { DihedralElement::rot(n1, d1) };
        let b = if r2 { DihedralElement::refl(n2, d2) } else { DihedralElement::rot(n2, d2) };
        let ma = a.matrix_f64();
        let mb = b.matrix_f64();
        let mab = a.compose(&b).matrix_f64();
        for i in 0..2 {
            for j in 0..2 {
                let prod = ma[i][0] * mb[0][j] + ma[i][1] * mb[1][j];
                prop_assert!((prod - mab[i][j]).abs() <= 8.0 * billiards_core::geom::EPS_POINT);
            }
        }
    }

    #[test]
    fn angle_normalization_idempotent(num in -1000_i64..1000, den in 1_i64..64) {
        let a = RationalAngle::new(num, den);
        let r = a.normalized_rotation();
        prop_assert_eq!(r, r.normalized_rotation());
        let x = a.normalized_axis();
        prop_assert_eq!(x, x.normalized_axis());
    }

    #[test]
    fn square_round_trip(theta in 0.03_f64..1.54, sx in 0.05_f64..0.95, sy in 0.05_f64..0.95) {
        let q = Polygon::validate(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ]).unwrap();
        let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
        let m = unfold(q, w, DEFAULT_CLOSURE_BOUND).unwrap();
        let (s, c) = theta.sin_cos();
        let traj = shoot(
            &m.base,
            &m.witness,
            PhaseState { point: Point2::new(sx, sy), direction: Vec2::new(c, s) },
            7.0,
            VertexPolicy::StopAtVertex,
        ).unwrap();
        prop_assume!(traj.termination == Termination::ReachedLength);
        // reflection law at every bounce
        for (i, b) in traj.bounces.iter().enumerate() {
            if let billiards_core::flow::EventKind::Edge(e) = b.kind {
                let refl = billiards_core::flow::bounce_direction(&m.base, e, &traj.segment_directions[i]);
                let out = &traj.segment_directions[i + 1];
                prop_assert!((refl.x - out.x).abs() < 1e-12 && (refl.y - out.y).abs() < 1e-12);
            }
        }
        let lifted = straighten(&m, &traj);
        prop_assert!(lifted.direction_deviation() <= 1e-12);
        // developed length equals arc length
        prop_assert!((lifted.developed_length() - traj.total_length).abs() < 1e-9);
        let start = m.lift_point(&traj.start, &DihedralElement::IDENTITY).unwrap();
        let back = fold(&m, &start, traj.initial_direction.clone(), traj.total_length, VertexPolicy::StopAtVertex).unwrap();
        prop_assert!(back.end.dist_f64(&traj.end) <= 1e-9 * traj.total_length.max(1.0));
    }

    #[test]
    fn group_order_is_twice_lcm_for_lemma_triangles(n in 2_i64..12, m in 1_i64..10) {
        prop_assume!(m < n - 1); // third angle (n-1-m)pi/n must be positive
        let (q, w) = billiards_core::tokarsky::sampling::lemma_triangle(n, m);
        let g = generate_group(&q, &w, DEFAULT_CLOSURE_BOUND).unwrap();
        prop_assert_eq!(g.order() as i64, 2 * w.lcm_den);
    }

    #[test]
    fn rectilinear_polygons_are_rational_with_small_lcm(
        wdt in 1_i64..5, hgt in 1_i64..5, notch in 0_i64..3,
    ) {
        // axis-aligned L-shape on the integer lattice (45-degree family has
        // the bundled rooms as witnesses)
        prop_assume!(notch < wdt && notch < hgt);
        let (wf, hf, nf) = (wdt as f64, hgt as f64, notch as f64);
        let pts = if notch == 0 {
            vec![(0.0, 0.0), (wf, 0.0), (wf, hf), (0.0, hf)]
        } else {
            vec![
                (0.0, 0.0),
                (wf, 0.0),
                (wf, hf - nf),
                (wf - nf, hf - nf),
                (wf - nf, hf),
                (0.0, hf),
            ]
        };
        let q = Polygon::validate(pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect()).unwrap();
        let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
        prop_assert!(w.lcm_den == 2 || w.lcm_den == 4 || w.lcm_den == 1);
        prop_assert!(4 % w.lcm_den == 0 || w.lcm_den % 2 == 0);
    }
}

#[test]
fn avoidance_correspondence_with_marked_points() {
    // A trajectory passes through a marked base point at parameter t iff its
    // straightening passes through the corresponding developed image in the
    // matching parameter window. The two sides are computed independently:
    // base side by point-segment incidence, developed side by the offset of
    // the developed image from the straight line.
    let q = Polygon::validate(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap();
    let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
    let m = unfold(q, w, DEFAULT_CLOSURE_BOUND).unwrap();
    let traj = shoot(
        &m.base,
        &m.witness,
        PhaseState { point: Point2::new(0.21, 0.34), direction: Vec2::new(0.8, 0.6) },
        6.0,
        VertexPolicy::StopAtVertex,
    )
    .unwrap();
    // marked set: two points on the trajectory, two off it
    let on_1 = traj.position_at(1.3);
    let on_2 = traj.position_at(4.1);
    let marked = [
        Point2::new(on_1[0], on_1[1]),
        Point2::new(on_2[0], on_2[1]),
        Point2::new(0.123, 0.877),
        Point2::new(0.5, 0.111),
    ];
    let d0 = {
        let d = traj.initial_direction.to_f64();
        let n = d[0].hypot(d[1]);
        [d[0] / n, d[1] / n]
    };
    let a = traj.start.to_f64();
    let eps = 1e-7;

    // per-segment developing maps, rebuilt independently of straighten()
    let mut dev = AffineIso::<f64>::identity();
    let mut windows: Vec<(f64, f64, AffineIso<f64>)> = Vec::new();
    let mut t_prev = 0.0;
    for b in &traj.bounces {
        windows.push((t_prev, b.time, dev.clone()));
        if let billiards_core::flow::EventKind::Edge(e) = b.kind {
            let (ea, eb) = m.base.edge(e);
            let u = eb.sub(ea);
            dev = dev.compose(&AffineIso::line_reflection(ea, &u));
        }
        t_prev = b.time;
    }
    windows.push((t_prev, traj.total_length, dev));

    for e in &marked {
        // base side
        let mut base_hits = Vec::new();
        for (i, (t0, t1, _)) in windows.iter().enumerate() {
            let p0 = traj.position_at(*t0);
            let p1 = traj.position_at(*t1);
            let seg = [p1[0] - p0[0], p1[1] - p0[1]];
            let n2 = seg[0] * seg[0] + seg[1] * seg[1];
            if n2 <= 0.0 {
                continue;
            }
            let t = ((e.x - p0[0]) * seg[0] + (e.y - p0[1]) * seg[1]) / n2;
            if !(0.0..=1.0).contains(&t) {
                continue;
            }
            let proj = [p0[0] + t * seg[0], p0[1] + t * seg[1]];
            if (proj[0] - e.x).hypot(proj[1] - e.y) < eps {
                base_hits.push(i);
            }
        }
        // developed side
        let mut dev_hits = Vec::new();
        for (i, (t0, t1, psi)) in windows.iter().enumerate() {
            let img = psi.apply(e).to_f64();
            let rel = [img[0] - a[0], img[1] - a[1]];
            let t = rel[0] * d0[0] + rel[1] * d0[1];
            let off = d0[0] * rel[1] - d0[1] * rel[0];
            if off.abs() < eps && t >= t0 - eps && t <= t1 + eps {
                dev_hits.push(i);
            }
        }
        assert_eq!(
            base_hits, dev_hits,
            "avoidance correspondence broken for marked point {e:?}"
        );
    }
    // the two on-trajectory points must be detected at all
    assert!(windows.len() > 2);
}

#[test]
fn exact_backend_traces_rationally() {
    // unit square with rational start and direction: every bounce point stays
    // an exact rational, and the reflection law holds with zero tolerance
    type R = BigRational;
    fn r(n: i64, d: i64) -> R {
        <R as billiards_core::Scalar>::from_ratio(n, d)
    }
    let q: Polygon<R> = Polygon::validate(vec![
        Point2::new(r(0, 1), r(0, 1)),
        Point2::new(r(1, 1), r(0, 1)),
        Point2::new(r(1, 1), r(1, 1)),
        Point2::new(r(0, 1), r(1, 1)),
    ])
    .unwrap();
    let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
    let traj = shoot(
        &q,
        &w,
        PhaseState {
            point: Point2::new(r(1, 4), r(1, 3)),
            direction: Vec2::new(r(3, 1), r(2, 1)),
        },
        4.0,
        VertexPolicy::StopAtVertex,
    )
    .unwrap();
    assert!(traj.bounces.len() >= 3);
    for (i, b) in traj.bounces.iter().enumerate() {
        if let billiards_core::flow::EventKind::Edge(e) = b.kind {
            let refl = billiards_core::flow::bounce_direction(&q, e, &traj.segment_directions[i]);
            assert_eq!(refl.x, traj.segment_directions[i + 1].x);
            assert_eq!(refl.y, traj.segment_directions[i + 1].y);
        }
    }
    let m = unfold(q, w, DEFAULT_CLOSURE_BOUND).unwrap();
    let lifted = straighten(&m, &traj);
    // exact backend: direction deviation is exactly zero
    for d in &lifted.developed_directions {
        assert_eq!(d.x, lifted.direction.x);
        assert_eq!(d.y, lifted.direction.y);
    }
}

#[test]
fn negative_results_monotone_in_budget() {
    // a connection found at a small budget stays found at larger budgets
    let q = Polygon::validate(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap();
    let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
    let m = unfold(q, w, DEFAULT_CLOSURE_BOUND).unwrap();
    let a = Point2::new(0.15, 0.45);
    let b = Point2::new(0.85, 0.52);
    let mut lengths = Vec::new();
    for (n, l) in [(500, 5.0), (1000, 10.0), (2000, 20.0)] {
        let report = illuminate_search(&m, &a, &b, &SearchBudget::new(l, n, 5));
        match report.outcome {
            IlluminationOutcome::Connected(t) => lengths.push(t.total_length),
            _ => panic!("connection lost at budget ({n}, {l})"),
        }
    }
    assert!(lengths.iter().all(|l| l.is_finite()));
}

#[test]
fn illuminate_positive_results_straighten_to_target_images() {
    let q = Polygon::validate(vec![
        Point2::new(0.0, 0.0),
        Point2::new(1.0, 0.0),
        Point2::new(1.0, 1.0),
        Point2::new(0.0, 1.0),
    ])
    .unwrap();
    let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
    let m = unfold(q, w, DEFAULT_CLOSURE_BOUND).unwrap();
    let a = Point2::new(0.2, 0.6);
    let b = Point2::new(0.7, 0.3);
    let report = illuminate_search(&m, &a, &b, &SearchBudget::new(9.0, 3000, 11));
    let IlluminationOutcome::Connected(t) = &report.outcome else {
        panic!("expected a connection");
    };
    let lifted = straighten(&m, t);
    assert!(lifted.direction_deviation() <= 1e-12);
    assert!(m.group.contains(&lifted.endpoint_sheet));
    assert!(t.end.dist_f64(&b) <= 1e-9 * report.budget.max_length);
}
