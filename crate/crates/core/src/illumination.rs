//! Desk-scale illumination search and blocking-set verification.
//!
//! The search shoots a fan of directions from the source and works in the
//! developed picture: along a traced ray the target's unfolded images are
//! collinear checks against a fixed line, so a connection shows up as a
//! sign change of the perpendicular offset between neighbouring rays that
//! share a bounce combinatorics, and is then pinned down by bisection.
//!
//! A positive result carries a replayable trajectory. A negative result is
//! evidence at the stated budget, never a proof; certified negatives come
//! from the tokarsky module.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::flow::{
    shoot, straighten, AffineIso, PhaseState, Step, Termination, Tracer, Trajectory,
    VertexPolicy,
};
use crate::geom::{DihedralElement, Point2, Vec2};
use crate::polygon::{Polygon, RationalityWitness};
use crate::unfolding::{SurfacePoint, UnfoldedSurface};

/// Budget of a sampling sweep.
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub max_length: f64,
    pub directions: usize,
    pub seed: u64,
    /// Allow geodesics through removable singularities (pi/n vertex
    /// continuations). Off by default, matching the billiard convention;
    /// such rays can connect pairs that standard trajectories cannot.
    pub through_removable: bool,
}

impl SearchBudget {
    pub fn new(max_length: f64, directions: usize, seed: u64) -> Self {
        SearchBudget { max_length, directions, seed, through_removable: false }
    }

    pub fn with_through_removable(mut self, on: bool) -> Self {
        self.through_removable = on;
        self
    }
}

/// Default refinement tolerance on the direction angle.
pub const BISECT_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum IlluminationOutcome {
    Connected(Trajectory<f64>),
    NoConnectionFound {
        directions_tried: usize,
        vertex_discarded: usize,
        closest_approach: f64,
    },
}

#[derive(Clone, Debug)]
pub struct IlluminationReport {
    pub pair: (Point2<f64>, Point2<f64>),
    pub budget: SearchBudget,
    pub outcome: IlluminationOutcome,
}

impl IlluminationReport {
    pub fn connected(&self) -> bool {
        matches!(self.outcome, IlluminationOutcome::Connected(_))
    }
}

/// Per-ray candidate: the closest in-window target image.
#[derive(Clone, Copy, Debug)]
struct RayCandidate {
    /// FNV hash of the bounce combinatorics up to the candidate segment.
    hash: u64,
    /// Signed perpendicular offset of the image from the ray line.
    offset: f64,
}

#[derive(Clone, Debug, Default)]
struct RayResult {
    candidate: Option<RayCandidate>,
    discarded_vertex: bool,
}

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

#[inline]
fn fnv_step(h: u64, v: u64) -> u64 {
    (h ^ v).wrapping_mul(FNV_PRIME)
}

/// Trace one ray and report the best candidate target crossing.
fn trace_ray(
    polygon: &Polygon<f64>,
    witness: &RationalityWitness,
    tracer: &Tracer<'_, f64>,
    a: &Point2<f64>,
    b: &Point2<f64>,
    theta: f64,
    max_length: f64,
    through_removable: bool,
) -> RayResult {
    let (s, c) = theta.sin_cos();
    let d0 = Vec2::new(c, s);
    if !direction_enters(polygon, a, &d0) {
        return RayResult::default();
    }
    let mut x = a.clone();
    let mut d = d0.clone();
    let mut dev = AffineIso::<f64>::identity();
    let mut hash = FNV_OFFSET;
    let mut t0 = 0.0_f64;
    let mut exclude = edge_of_point(polygon, a);
    let mut best: Option<RayCandidate> = None;

    loop {
        let (seg_len, hit) = match tracer.step(&x, &d, exclude) {
            Step::Hit { edge, point, length } => (length, Some((Ok(edge), point))),
            Step::Vertex { vertex, point, length } => {
                let angle = witness.angles[vertex];
                if through_removable && angle.num() == 1 {
                    (length, Some((Err(vertex), point)))
                } else {
                    return RayResult { candidate: best, discarded_vertex: true };
                }
            }
            Step::Ambiguous => (0.0, None),
        };
        let Some((event, point)) = hit else {
            return RayResult { candidate: best, discarded_vertex: false };
        };
        let t1 = (t0 + seg_len).min(max_length);

        // candidate: developed image of the target against the ray line
        let img = dev.apply(b);
        let rel = img.sub(a);
        let t_target = rel.dot(&d0);
        if t_target > 1e-9 && t_target <= t1 + 1e-9 && t_target >= t0 - 1e-9 {
            let offset = d0.cross(&rel);
            if best.map_or(true, |prev| offset.abs() < prev.offset.abs()) {
                best = Some(RayCandidate { hash, offset });
            }
        }

        if t0 + seg_len >= max_length {
            return RayResult { candidate: best, discarded_vertex: false };
        }
        t0 += seg_len;
        match event {
            Ok(edge) => {
                hash = fnv_step(hash, edge as u64);
                let (ea, eb) = polygon.edge(edge);
                let u = eb.sub(ea);
                dev = dev.compose(&AffineIso::line_reflection(ea, &u));
                d = d.reflect_across(&u);
                exclude = Some(edge);
            }
            Err(vertex) => {
                // pass through the removable singularity: the developed ray
                // stays straight, the table-level direction continues by the
                // pi/n rule
                hash = fnv_step(hash, (1 << 32) | vertex as u64);
                let n = witness.angles[vertex].den();
                let local = vertex_pass_dev(polygon, vertex, n);
                dev = dev.compose(&local);
                d = crate::flow::vertex_continuation_direction(polygon, vertex, n, &d);
                exclude = None;
            }
        }
        x = point;
    }
}

fn vertex_pass_dev(polygon: &Polygon<f64>, v: usize, n: i64) -> AffineIso<f64> {
    let vertex = &polygon.vertices()[v];
    if n % 2 == 0 {
        AffineIso::point_reflection(vertex)
    } else {
        let out_dir = polygon.edge_vec(v).to_f64();
        let beta = out_dir[1].atan2(out_dir[0]);
        let axis = beta + (n + 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
        let (sa, ca) = axis.sin_cos();
        AffineIso::line_reflection(vertex, &Vec2::new(ca, sa))
    }
}

/// Can a ray from `p` with direction `d` enter the polygon interior?
/// Strict local wedge test at boundary points (tangent rays rejected).
pub fn direction_enters(polygon: &Polygon<f64>, p: &Point2<f64>, d: &Vec2<f64>) -> bool {
    polygon.admits_direction(p, d)
}

fn edge_of_point(polygon: &Polygon<f64>, p: &Point2<f64>) -> Option<usize> {
    (0..polygon.len()).find(|&e| {
        let (a, b) = polygon.edge(e);
        crate::geom::point_on_segment(p, a, b)
    })
}

/// Is the open segment a-b inside the polygon (a legal zero-bounce chord)?
fn chord_inside(polygon: &Polygon<f64>, a: &Point2<f64>, b: &Point2<f64>) -> bool {
    if !polygon.contains(a) || !polygon.contains(b) {
        return false;
    }
    for e in 0..polygon.len() {
        let (p, q) = polygon.edge(e);
        if crate::geom::segments_properly_cross(a, b, p, q) {
            return false;
        }
    }
    // the midpoint decides for boundary-hugging cases
    let mid = Point2::new((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
    let d = b.sub(a);
    if !direction_enters(polygon, a, &d) || !direction_enters(polygon, b, &d.neg()) {
        return false;
    }
    polygon.contains(&mid)
}

/// Replay a direction and cut the trajectory at the target if it passes
/// within `tol`; returns the connecting trajectory on success.
fn replay_connection(
    polygon: &Polygon<f64>,
    witness: &RationalityWitness,
    a: &Point2<f64>,
    b: &Point2<f64>,
    theta: f64,
    max_length: f64,
    tol: f64,
    policy: VertexPolicy,
) -> Option<Trajectory<f64>> {
    let (s, c) = theta.sin_cos();
    let traj = shoot(
        polygon,
        witness,
        PhaseState { point: a.clone(), direction: Vec2::new(c, s) },
        max_length,
        policy,
    )
    .ok()?;
    // walk segments, find the closest approach to b
    let mut best: Option<(f64, f64)> = None; // (dist, arc position)
    let mut seg_start = traj.start.clone();
    let mut t0 = 0.0;
    let ends: Vec<(Point2<f64>, f64)> = traj
        .bounces
        .iter()
        .map(|bb| (bb.point.clone(), bb.time))
        .chain(std::iter::once((traj.end.clone(), traj.total_length)))
        .collect();
    for (seg_end, t1) in ends {
        let ab = seg_end.sub(&seg_start);
        let n2 = ab.norm2();
        if n2 > 0.0 {
            let t = (b.sub(&seg_start).dot(&ab) / n2).clamp(0.0, 1.0);
            let proj = seg_start.add_vec(&ab.scale(t));
            let dist = proj.dist_f64(b);
            let pos = t0 + t * (t1 - t0);
            if best.map_or(true, |(bd, _)| dist < bd) {
                best = Some((dist, pos));
            }
        }
        seg_start = seg_end;
        t0 = t1;
    }
    let (dist, pos) = best?;
    if dist > tol {
        return None;
    }
    // truncate at the hit
    let (s2, c2) = theta.sin_cos();
    let mut cut = shoot(
        polygon,
        witness,
        PhaseState { point: a.clone(), direction: Vec2::new(c2, s2) },
        pos,
        policy,
    )
    .ok()?;
    cut.termination = Termination::ReachedTarget;
    Some(cut)
}

struct Sweep {
    results: Vec<RayResult>,
    thetas: Vec<f64>,
}

fn run_sweep(
    polygon: &Polygon<f64>,
    witness: &RationalityWitness,
    a: &Point2<f64>,
    b: &Point2<f64>,
    budget: &SearchBudget,
) -> Sweep {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let phase: f64 = rng.random_range(0.0..1.0);
    let n = budget.directions.max(1);
    let thetas: Vec<f64> = (0..n)
        .map(|j| (j as f64 + phase) / n as f64 * std::f64::consts::TAU)
        .collect();
    let tracer = Tracer::new(polygon);
    let results: Vec<RayResult> = thetas
        .par_iter()
        .map(|&theta| {
            trace_ray(
                polygon,
                witness,
                &tracer,
                a,
                b,
                theta,
                budget.max_length,
                budget.through_removable,
            )
        })
        .collect();
    Sweep { results, thetas }
}

/// All connections confirmed by the sweep, deduplicated by bounce
/// combinatorics, each paired with its endpoint sheet.
pub fn find_connections(
    surface: &UnfoldedSurface<f64>,
    a: &Point2<f64>,
    b: &Point2<f64>,
    budget: &SearchBudget,
    max_found: usize,
) -> (Vec<(Trajectory<f64>, DihedralElement)>, IlluminationReport) {
    let polygon = &surface.base;
    let witness = &surface.witness;
    let policy = if budget.through_removable {
        VertexPolicy::ContinueRemovable
    } else {
        VertexPolicy::StopAtVertex
    };
    let mut found: Vec<(Trajectory<f64>, DihedralElement)> = Vec::new();
    let hit_tol = (1e-9 * budget.max_length).max(1e-12);

    // direct chord first
    if chord_inside(polygon, a, b) {
        let d = b.sub(a);
        let len = d.norm_f64();
        let theta = d.y.atan2(d.x);
        if let Some(t) = replay_connection(
            polygon,
            witness,
            a,
            b,
            theta,
            len + 1e-9,
            hit_tol,
            policy,
        ) {
            found.push((t, DihedralElement::IDENTITY));
        }
    }

    let sweep = run_sweep(polygon, witness, a, b, budget);
    let n = sweep.thetas.len();
    let mut vertex_discarded = 0usize;
    let mut closest = f64::INFINITY;
    for r in &sweep.results {
        if r.discarded_vertex {
            vertex_discarded += 1;
        }
        if let Some(c) = r.candidate {
            closest = closest.min(c.offset.abs());
        }
    }

    let mut seen_hashes: Vec<u64> = found
        .iter()
        .map(|(t, _)| {
            t.bounce_edges()
                .iter()
                .fold(FNV_OFFSET, |h, &e| fnv_step(h, e as u64))
        })
        .collect();

    for j in 0..n {
        if found.len() >= max_found {
            break;
        }
        let (Some(c1), Some(c2)) =
            (sweep.results[j].candidate, sweep.results[(j + 1) % n].candidate)
        else {
            continue;
        };
        if c1.hash != c2.hash || c1.offset.signum() == c2.offset.signum() {
            continue;
        }
        if seen_hashes.contains(&c1.hash) {
            continue;
        }
        // bisect on the angle within this combinatorics class
        let tracer = Tracer::new(polygon);
        let (mut lo, mut hi) = (sweep.thetas[j], sweep.thetas[(j + 1) % n]);
        if hi < lo {
            hi += std::f64::consts::TAU;
        }
        let mut f_lo = c1.offset;
        let mut ok = true;
        for _ in 0..80 {
            if (hi - lo).abs() < BISECT_TOL {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let r = trace_ray(
                polygon,
                witness,
                &tracer,
                a,
                b,
                mid,
                budget.max_length,
                budget.through_removable,
            );
            match r.candidate {
                Some(c) if c.hash == c1.hash => {
                    if c.offset.signum() == f_lo.signum() {
                        lo = mid;
                        f_lo = c.offset;
                    } else {
                        hi = mid;
                    }
                }
                _ => {
                    // combinatorics changed under us: the crossing sits on a
                    // discarded (vertex) direction, not a real connection
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let theta = 0.5 * (lo + hi);
        if let Some(t) = replay_connection(
            polygon,
            witness,
            a,
            b,
            theta,
            budget.max_length,
            hit_tol,
            policy,
        ) {
            let sheet = straighten(surface, &t).endpoint_sheet;
            seen_hashes.push(c1.hash);
            found.push((t, sheet));
        }
    }

    let outcome = if let Some((t, _)) = found.first() {
        IlluminationOutcome::Connected(t.clone())
    } else {
        IlluminationOutcome::NoConnectionFound {
            directions_tried: n,
            vertex_discarded,
            closest_approach: closest,
        }
    };
    let report = IlluminationReport {
        pair: (a.clone(), b.clone()),
        budget: *budget,
        outcome,
    };
    (found, report)
}

/// Search for a billiard trajectory connecting `a` and `b`.
pub fn illuminate_search(
    surface: &UnfoldedSurface<f64>,
    a: &Point2<f64>,
    b: &Point2<f64>,
    budget: &SearchBudget,
) -> IlluminationReport {
    find_connections(surface, a, b, budget, 1).1
}

/// A candidate blocking set for a pair.
#[derive(Clone, Debug)]
pub struct BlockingSet {
    pub points: Vec<Point2<f64>>,
    pub pair: (Point2<f64>, Point2<f64>),
}

impl BlockingSet {
    pub fn new(
        points: Vec<Point2<f64>>,
        pair: (Point2<f64>, Point2<f64>),
    ) -> Result<Self, &'static str> {
        let eps = 1e-12;
        for p in &points {
            if p.dist_f64(&pair.0) < eps || p.dist_f64(&pair.1) < eps {
                return Err("blocking point coincides with the pair");
            }
        }
        Ok(BlockingSet { points, pair })
    }
}

#[derive(Clone, Debug)]
pub struct BlockingReport {
    pub consistent: bool,
    pub connections_checked: usize,
    /// A connecting trajectory that avoids the blocking set, if found.
    pub counterexample: Option<Trajectory<f64>>,
}

fn trajectory_min_distance(traj: &Trajectory<f64>, points: &[Point2<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    let mut seg_start = traj.start.clone();
    let ends: Vec<Point2<f64>> = traj
        .bounces
        .iter()
        .map(|b| b.point.clone())
        .chain(std::iter::once(traj.end.clone()))
        .collect();
    for seg_end in ends {
        let ab = seg_end.sub(&seg_start);
        let n2 = ab.norm2();
        for p in points {
            let d = if n2 > 0.0 {
                let t = (p.sub(&seg_start).dot(&ab) / n2).clamp(0.0, 1.0);
                seg_start.add_vec(&ab.scale(t)).dist_f64(p)
            } else {
                seg_start.dist_f64(p)
            };
            best = best.min(d);
        }
        seg_start = seg_end;
    }
    best
}

/// Check a blocking set: every connecting trajectory found by the sweep
/// must pass within `eps` of some blocking point.
pub fn verify_blocking(
    surface: &UnfoldedSurface<f64>,
    set: &BlockingSet,
    budget: &SearchBudget,
    eps: f64,
) -> BlockingReport {
    let (connections, _) =
        find_connections(surface, &set.pair.0, &set.pair.1, budget, 4096);
    let mut checked = 0;
    for (traj, _) in &connections {
        checked += 1;
        if trajectory_min_distance(traj, &set.points) > eps {
            return BlockingReport {
                consistent: false,
                connections_checked: checked,
                counterexample: Some(traj.clone()),
            };
        }
    }
    BlockingReport { consistent: true, connections_checked: checked, counterexample: None }
}

/// Default tolerance for "trajectory passes through a blocking point".
pub fn blocking_eps(polygon: &Polygon<f64>) -> f64 {
    1e-6 * polygon.diameter_f64()
}

/// Lift a blocking set to the surface: the union of the fibers of its
/// points. Cardinality is |group| per interior point and |group|/2 per
/// boundary non-vertex point.
pub fn lift_blocking_set(
    surface: &UnfoldedSurface<f64>,
    set: &BlockingSet,
) -> Result<Vec<SurfacePoint<f64>>, crate::unfolding::UnfoldError> {
    let mut out: Vec<SurfacePoint<f64>> = Vec::new();
    for p in &set.points {
        for sp in surface.fiber(p)? {
            if !out.iter().any(|q| q.sheet == sp.sheet && q.base == sp.base) {
                out.push(sp);
            }
        }
    }
    Ok(out)
}

/// Verification result of one transported pair.
#[derive(Clone, Debug)]
pub struct TransportedPair {
    pub tau: DihedralElement,
    pub gamma: DihedralElement,
    pub consistent: bool,
    pub connections: usize,
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub pairs: Vec<TransportedPair>,
}

impl InvarianceReport {
    pub fn all_consistent(&self) -> bool {
        self.pairs.iter().all(|p| p.consistent)
    }
}

/// Verify the whole group-squared orbit of a pair at one budget.
///
/// A geodesic from the tau-lift of A to the gamma-lift of B folds to a
/// billiard trajectory from A to B whose straightened endpoint sheet is
/// tau^{-1} gamma, so one sweep from A serves every transported pair: each
/// (tau, gamma) sees exactly the connections with its endpoint sheet. For a
/// blocked instance the lifted blocking set is group-invariant and projects
/// to the same base set, so the per-pair check is the sheet-filtered
/// blocking check.
pub fn invariance_check(
    surface: &UnfoldedSurface<f64>,
    pair: (Point2<f64>, Point2<f64>),
    blocking: Option<&BlockingSet>,
    budget: &SearchBudget,
    eps: f64,
) -> InvarianceReport {
    let (connections, _) = find_connections(surface, &pair.0, &pair.1, budget, 4096);
    let elements = surface.group.elements().to_vec();
    let mut pairs = Vec::new();
    for tau in &elements {
        for gamma in &elements {
            let want_sheet = tau.inverse().compose(gamma);
            let relevant: Vec<_> = connections
                .iter()
                .filter(|(_, sheet)| *sheet == want_sheet)
                .collect();
            let consistent = match blocking {
                None => relevant.is_empty(),
                Some(set) => relevant
                    .iter()
                    .all(|(t, _)| trajectory_min_distance(t, &set.points) <= eps),
            };
            pairs.push(TransportedPair {
                tau: *tau,
                gamma: *gamma,
                consistent,
                connections: relevant.len(),
            });
        }
    }
    InvarianceReport { pairs }
}

/// Brute-force torus oracle: images of `b` in the square's unfolding are
/// the orbit of the 4-element group translated by the even lattice; the
/// distinct midpoints of `a`-to-image segments folded back into the square
/// form the blocking set of the midpoint construction. Folds landing on
/// `a` or `b` themselves are dropped: a trajectory that revisits an
/// endpoint contains a shorter connecting tail, which the remaining points
/// block, and a blocking set may not contain the pair.
pub fn square_midpoint_blocking_oracle(
    a: &Point2<f64>,
    b: &Point2<f64>,
    reach: i64,
) -> Vec<Point2<f64>> {
    let mut out: Vec<Point2<f64>> = Vec::new();
    let images = [
        (b.x, b.y),
        (b.x, -b.y),
        (-b.x, b.y),
        (-b.x, -b.y),
    ];
    for (ix, iy) in images {
        for kx in -reach..=reach {
            for ky in -reach..=reach {
                let img = (ix + 2.0 * kx as f64, iy + 2.0 * ky as f64);
                let mid = ((a.x + img.0) / 2.0, (a.y + img.1) / 2.0);
                // fold into [0,1]^2: reflect-mod-2
                let fold = |v: f64| {
                    let m = v.rem_euclid(2.0);
                    if m <= 1.0 {
                        m
                    } else {
                        2.0 - m
                    }
                };
                let p = Point2::new(fold(mid.0), fold(mid.1));
                if p.dist_f64(a) < 1e-9 || p.dist_f64(b) < 1e-9 {
                    continue;
                }
                if !out.iter().any(|q| q.dist_f64(&p) < 1e-9) {
                    out.push(p);
                }
            }
        }
    }
    out.sort_by(|p, q| {
        (p.x, p.y)
            .partial_cmp(&(q.x, q.y))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    out
}
