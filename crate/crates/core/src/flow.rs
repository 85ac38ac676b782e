//! Billiard flow on a polygon, straightening of trajectories to geodesics on
//! the unfolded surface, and folding of geodesics back to trajectories.
//!
//! Tracing is parametrized by arc length. Positions are carried in the
//! active scalar backend; cumulative length bookkeeping is always f64 (a
//! stop criterion does not need exactness, positions do).

use thiserror::Error;

use crate::geom::{
    DihedralElement, Point2, RationalAngle, Scalar, Vec2, VERTEX_EPS_FACTOR,
};
use crate::polygon::{Polygon, RationalityWitness};
use crate::unfolding::UnfoldedSurface;

#[derive(Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("trajectory start is outside the polygon")]
    StartOutside,
    #[error("zero direction vector")]
    ZeroDirection,
    #[error("geodesic hits a singularity over vertex {vertex} at ({x}, {y})")]
    HitSingularity { vertex: usize, x: f64, y: f64 },
}

/// Vertex convention for the flow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexPolicy {
    /// Traditional convention: the trajectory stops at any vertex.
    StopAtVertex,
    /// Continue through vertices with reduced interior angle pi/n (the
    /// removable case): reversal for even n, the mirrored continuation for
    /// odd n. Other vertices still stop.
    ContinueRemovable,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    ReachedLength,
    HitVertex(usize),
    ReachedTarget,
    /// Float-mode tie between two candidate edges or a grazing ray; the
    /// trace is truncated rather than silently continued.
    AmbiguousTruncated,
}

/// What the trajectory did at one event point.
#[derive(Clone, Debug, PartialEq)]
pub enum EventKind {
    /// Ordinary wall bounce at the given edge.
    Edge(usize),
    /// Continuation through a pi/n vertex (only under `ContinueRemovable`).
    VertexPass(usize),
}

#[derive(Clone, Debug)]
pub struct Bounce<S: Scalar> {
    pub kind: EventKind,
    pub point: Point2<S>,
    /// Arc-length parameter of the event.
    pub time: f64,
}

#[derive(Clone, Debug)]
pub struct PhaseState<S: Scalar> {
    pub point: Point2<S>,
    pub direction: Vec2<S>,
}

#[derive(Clone, Debug)]
pub struct Trajectory<S: Scalar> {
    pub start: Point2<S>,
    pub end: Point2<S>,
    pub initial_direction: Vec2<S>,
    pub bounces: Vec<Bounce<S>>,
    /// Direction of segment i (between event i-1 and event i); length = bounces + 1.
    pub segment_directions: Vec<Vec2<S>>,
    pub termination: Termination,
    pub total_length: f64,
}

impl<S: Scalar> Trajectory<S> {
    pub fn bounce_edges(&self) -> Vec<usize> {
        self.bounces
            .iter()
            .filter_map(|b| match b.kind {
                EventKind::Edge(e) => Some(e),
                EventKind::VertexPass(_) => None,
            })
            .collect()
    }

    pub fn bounce_points(&self) -> Vec<Point2<S>> {
        self.bounces.iter().map(|b| b.point.clone()).collect()
    }

    pub fn bounce_times(&self) -> Vec<f64> {
        self.bounces.iter().map(|b| b.time).collect()
    }

    /// Position at arc-length parameter `t` (f64 evaluation).
    pub fn position_at(&self, t: f64) -> [f64; 2] {
        let mut seg_start = self.start.to_f64();
        let mut t0 = 0.0;
        for (i, b) in self.bounces.iter().enumerate() {
            if t <= b.time {
                let d = self.segment_directions[i].to_f64();
                let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
                return [
                    seg_start[0] + (t - t0) * d[0] / n,
                    seg_start[1] + (t - t0) * d[1] / n,
                ];
            }
            seg_start = b.point.to_f64();
            t0 = b.time;
        }
        let d = self.segment_directions.last().unwrap().to_f64();
        let n = (d[0] * d[0] + d[1] * d[1]).sqrt();
        [seg_start[0] + (t - t0) * d[0] / n, seg_start[1] + (t - t0) * d[1] / n]
    }
}

/// One step of the tracer: the next boundary event along `x + t d`.
pub enum Step<S: Scalar> {
    Hit { edge: usize, point: Point2<S>, length: f64 },
    Vertex { vertex: usize, point: Point2<S>, length: f64 },
    Ambiguous,
}

pub struct Tracer<'q, S: Scalar> {
    pub polygon: &'q Polygon<S>,
    vertex_eps: f64,
}

impl<'q, S: Scalar> Tracer<'q, S> {
    pub fn new(polygon: &'q Polygon<S>) -> Self {
        let vertex_eps =
            if S::EXACT { 0.0 } else { VERTEX_EPS_FACTOR * polygon.diameter_f64() };
        Tracer { polygon, vertex_eps }
    }

    /// Next event along the ray from `x` with direction `d`, skipping edge
    /// `exclude` (the edge just bounced off; the shared-endpoint hits at
    /// t = 0 on adjacent edges are excluded by the positive-t requirement).
    pub fn step(&self, x: &Point2<S>, d: &Vec2<S>, exclude: Option<usize>) -> Step<S> {
        let k = self.polygon.len();
        let dn = d.norm_f64();
        let t_floor = if S::EXACT { 0.0 } else { 1e-14 * self.polygon.diameter_f64() / dn };

        let mut best: Option<(f64, usize, S)> = None; // (length, edge, exact param)
        let mut second_len = f64::INFINITY;
        for e in 0..k {
            if Some(e) == exclude {
                continue;
            }
            let (a, b) = self.polygon.edge(e);
            let u = b.sub(a);
            let denom = d.cross(&u);
            if denom.is_zero_within_eps() {
                continue;
            }
            let ax = a.sub(x);
            let t = ax.cross(&u) / denom.clone();
            let s = ax.cross(d) / denom;
            // s in [0, 1] within tolerance, t positive
            if s.sign_eps() < 0 || (S::one() - s.clone()).sign_eps() < 0 {
                continue;
            }
            let t_f = t.to_f64() * dn;
            if t_f <= t_floor {
                continue;
            }
            match &best {
                None => best = Some((t_f, e, t)),
                Some((bt, _, _)) if t_f < *bt => {
                    second_len = *bt;
                    best = Some((t_f, e, t));
                }
                Some(_) => second_len = second_len.min(t_f),
            }
        }

        let Some((t_f, edge, t)) = best else {
            // No forward hit: grazing along a wall or numerical escape.
            return Step::Ambiguous;
        };
        let point = x.add_vec(&d.scale(t));

        // Vertex proximity.
        for v in [edge, (edge + 1) % k] {
            let vv = &self.polygon.vertices()[v];
            if S::EXACT {
                if vv.dist2(&point).is_zero_val() {
                    return Step::Vertex { vertex: v, point, length: t_f };
                }
            } else if vv.dist_f64(&point) <= self.vertex_eps {
                return Step::Vertex { vertex: v, point, length: t_f };
            }
        }

        // Tie between two distinct edges that is not a shared vertex.
        if !S::EXACT && second_len.is_finite() && (second_len - t_f) <= self.vertex_eps {
            // two nearly simultaneous hits away from a common vertex
            return Step::Ambiguous;
        }

        Step::Hit { edge, point, length: t_f }
    }
}

/// Reflect direction `d` across the line of edge `e`.
pub fn bounce_direction<S: Scalar>(polygon: &Polygon<S>, e: usize, d: &Vec2<S>) -> Vec2<S> {
    d.reflect_across(&polygon.edge_vec(e))
}

/// The continuation direction through a pi/n vertex: reversal for even n,
/// and for odd n the mirror of the incoming travel direction across the
/// axis at angle `beta + pi(n+1)/(2n)` (`beta` = plane angle of the
/// outgoing-edge ray at the vertex). Both agree with the limit of nearby
/// rays traced through the corner.
pub fn vertex_continuation_direction<S: Scalar>(
    polygon: &Polygon<S>,
    v: usize,
    n: i64,
    d: &Vec2<S>,
) -> Vec2<S> {
    if n % 2 == 0 {
        return d.neg();
    }
    let out_dir = polygon.edge_vec(v).to_f64();
    let beta = out_dir[1].atan2(out_dir[0]);
    let axis = beta + (n + 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
    let (sa, ca) = axis.sin_cos();
    let axis_vec = Vec2::new(S::from_f64(ca), S::from_f64(sa));
    d.reflect_across(&axis_vec)
}

/// Trace the billiard flow from `state` until `max_length`, a vertex stop,
/// or an ambiguity. See `VertexPolicy` for the vertex convention.
pub fn shoot<S: Scalar>(
    polygon: &Polygon<S>,
    witness: &RationalityWitness,
    state: PhaseState<S>,
    max_length: f64,
    policy: VertexPolicy,
) -> Result<Trajectory<S>, FlowError> {
    if state.direction.norm2().is_zero_within_eps() {
        return Err(FlowError::ZeroDirection);
    }
    if !polygon.admits_direction(&state.point, &state.direction) {
        // outward starts are errors; tangent starts from the boundary are
        // grazing rays, truncated under the corner-grazing tie-break
        let on_boundary = !matches!(
            polygon.locate(&state.point),
            crate::polygon::PointLocation::Outside
        );
        if !on_boundary {
            return Err(FlowError::StartOutside);
        }
        return Ok(Trajectory {
            start: state.point.clone(),
            end: state.point.clone(),
            initial_direction: state.direction.clone(),
            bounces: Vec::new(),
            segment_directions: vec![state.direction],
            termination: Termination::AmbiguousTruncated,
            total_length: 0.0,
        });
    }
    let tracer = Tracer::new(polygon);
    let mut x = state.point.clone();
    let mut d = state.direction.clone();
    let mut exclude: Option<usize> = current_edge(polygon, &x);
    let mut bounces: Vec<Bounce<S>> = Vec::new();
    let mut dirs: Vec<Vec2<S>> = vec![d.clone()];
    let mut traveled = 0.0_f64;

    loop {
        let (event_len, event_point, event) = match tracer.step(&x, &d, exclude) {
            Step::Ambiguous => {
                return Ok(Trajectory {
                    start: state.point,
                    end: x,
                    initial_direction: state.direction,
                    bounces,
                    segment_directions: dirs,
                    termination: Termination::AmbiguousTruncated,
                    total_length: traveled,
                });
            }
            Step::Hit { edge, point, length } => (length, point, Ok(edge)),
            Step::Vertex { vertex, point, length } => (length, point, Err(vertex)),
        };

        if traveled + event_len >= max_length {
            let remain = max_length - traveled;
            let dn = d.norm_f64();
            let end = x.add_vec(&d.scale(S::from_f64(remain / dn)));
            return Ok(Trajectory {
                start: state.point,
                end,
                initial_direction: state.direction,
                bounces,
                segment_directions: dirs,
                termination: Termination::ReachedLength,
                total_length: max_length,
            });
        }

        traveled += event_len;
        match event {
            Ok(edge) => {
                let nd = bounce_direction(polygon, edge, &d);
                bounces.push(Bounce {
                    kind: EventKind::Edge(edge),
                    point: event_point.clone(),
                    time: traveled,
                });
                dirs.push(nd.clone());
                x = event_point;
                d = nd;
                exclude = Some(edge);
            }
            Err(vertex) => {
                let angle = witness.angles[vertex];
                let continuable =
                    policy == VertexPolicy::ContinueRemovable && angle.num() == 1;
                if !continuable {
                    return Ok(Trajectory {
                        start: state.point,
                        end: event_point,
                        initial_direction: state.direction,
                        bounces,
                        segment_directions: dirs,
                        termination: Termination::HitVertex(vertex),
                        total_length: traveled,
                    });
                }
                let n = angle.den();
                let nd = vertex_continuation_direction(polygon, vertex, n, &d);
                bounces.push(Bounce {
                    kind: EventKind::VertexPass(vertex),
                    point: event_point.clone(),
                    time: traveled,
                });
                dirs.push(nd.clone());
                x = event_point;
                d = nd;
                exclude = None;
            }
        }
    }
}

fn current_edge<S: Scalar>(polygon: &Polygon<S>, p: &Point2<S>) -> Option<usize> {
    for e in 0..polygon.len() {
        let (a, b) = polygon.edge(e);
        if crate::geom::point_on_segment(p, a, b) {
            return Some(e);
        }
    }
    None
}

/// An affine isometry used for developing maps.
#[derive(Clone, Debug)]
pub struct AffineIso<S: Scalar> {
    /// Row-major 2x2 linear part.
    pub m: [[S; 2]; 2],
    pub t: Vec2<S>,
}

impl<S: Scalar> AffineIso<S> {
    pub fn identity() -> Self {
        AffineIso {
            m: [[S::one(), S::zero()], [S::zero(), S::one()]],
            t: Vec2::new(S::zero(), S::zero()),
        }
    }

    /// Reflection across the affine line through `p` with direction `u`.
    pub fn line_reflection(p: &Point2<S>, u: &Vec2<S>) -> Self {
        let n2 = u.norm2();
        let a = (u.x.clone() * u.x.clone() - u.y.clone() * u.y.clone()) / n2.clone();
        let b = (S::from_i64(2) * u.x.clone() * u.y.clone()) / n2;
        let m = [[a.clone(), b.clone()], [b.clone(), -a.clone()]];
        // t = p - M p
        let mp = Vec2::new(
            m[0][0].clone() * p.x.clone() + m[0][1].clone() * p.y.clone(),
            m[1][0].clone() * p.x.clone() + m[1][1].clone() * p.y.clone(),
        );
        AffineIso { m, t: Vec2::new(p.x.clone() - mp.x, p.y.clone() - mp.y) }
    }

    /// Rotation by pi about `p`.
    pub fn point_reflection(p: &Point2<S>) -> Self {
        AffineIso {
            m: [[-S::one(), S::zero()], [S::zero(), -S::one()]],
            t: Vec2::new(S::from_i64(2) * p.x.clone(), S::from_i64(2) * p.y.clone()),
        }
    }

    /// self after other: (self . other)(x) = self(other(x)).
    pub fn compose(&self, other: &AffineIso<S>) -> AffineIso<S> {
        let mut m = [[S::zero(), S::zero()], [S::zero(), S::zero()]];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.m[i][0].clone() * other.m[0][j].clone()
                    + self.m[i][1].clone() * other.m[1][j].clone();
            }
        }
        let t = Vec2::new(
            self.m[0][0].clone() * other.t.x.clone()
                + self.m[0][1].clone() * other.t.y.clone()
                + self.t.x.clone(),
            self.m[1][0].clone() * other.t.x.clone()
                + self.m[1][1].clone() * other.t.y.clone()
                + self.t.y.clone(),
        );
        AffineIso { m, t }
    }

    pub fn apply(&self, p: &Point2<S>) -> Point2<S> {
        Point2::new(
            self.m[0][0].clone() * p.x.clone() + self.m[0][1].clone() * p.y.clone() + self.t.x.clone(),
            self.m[1][0].clone() * p.x.clone() + self.m[1][1].clone() * p.y.clone() + self.t.y.clone(),
        )
    }

    pub fn apply_vec(&self, v: &Vec2<S>) -> Vec2<S> {
        Vec2::new(
            self.m[0][0].clone() * v.x.clone() + self.m[0][1].clone() * v.y.clone(),
            self.m[1][0].clone() * v.x.clone() + self.m[1][1].clone() * v.y.clone(),
        )
    }
}

/// A trajectory straightened to a geodesic: the group word, the developed
/// polyline (a straight segment up to backend tolerance), and the endpoint
/// sheet.
#[derive(Clone, Debug)]
pub struct LiftedGeodesic<S: Scalar> {
    /// tau_0 = id, tau_i = tau_{i-1} gamma_i.
    pub group_word: Vec<DihedralElement>,
    /// Developed images of start, every event point, and the end.
    pub developed_points: Vec<Point2<S>>,
    /// Developed directions of the sub-segments (images of the segment
    /// directions under the developing isometries); all equal the initial
    /// direction up to backend tolerance.
    pub developed_directions: Vec<Vec2<S>>,
    /// Developed direction (equals the initial direction).
    pub direction: Vec2<S>,
    /// Sheet of the straightened endpoint: the last word element.
    pub endpoint_sheet: DihedralElement,
}

impl<S: Scalar> LiftedGeodesic<S> {
    /// Largest angular deviation (radians) of any developed sub-segment
    /// direction from the initial direction. Zero exactly in the exact
    /// backend.
    pub fn direction_deviation(&self) -> f64 {
        let d0 = self.direction.to_f64();
        let base = d0[1].atan2(d0[0]);
        let mut worst = 0.0_f64;
        for d in &self.developed_directions {
            let v = d.to_f64();
            if v[0].hypot(v[1]) < 1e-30 {
                continue;
            }
            let ang = (v[1].atan2(v[0]) - base + std::f64::consts::PI)
                .rem_euclid(std::f64::consts::TAU)
                - std::f64::consts::PI;
            worst = worst.max(ang.abs());
        }
        worst
    }

    pub fn developed_length(&self) -> f64 {
        let a = self.developed_points.first().unwrap().to_f64();
        let b = self.developed_points.last().unwrap().to_f64();
        (b[0] - a[0]).hypot(b[1] - a[1])
    }
}

/// Straighten a traced trajectory to a geodesic on the unfolded surface.
///
/// The group word follows the recursion `tau_i = tau_{i-1} gamma_i` with
/// `gamma_i` the symbolic reflection of the bounced edge; the developed
/// polyline applies the matching affine edge-line reflections.
pub fn straighten<S: Scalar>(
    surface: &UnfoldedSurface<S>,
    traj: &Trajectory<S>,
) -> LiftedGeodesic<S> {
    let polygon = &surface.base;
    let witness = &surface.witness;
    let mut word = vec![DihedralElement::IDENTITY];
    let mut dev = AffineIso::<S>::identity();
    let mut developed_points = vec![traj.start.clone()];
    let mut developed_directions = vec![traj.segment_directions[0].clone()];

    for (idx, b) in traj.bounces.iter().enumerate() {
        developed_points.push(dev.apply(&b.point));
        match b.kind {
            EventKind::Edge(e) => {
                let gamma = polygon.edge_reflection(witness, e);
                word.push(word.last().unwrap().compose(&gamma));
                let (a, bb) = polygon.edge(e);
                let u = bb.sub(a);
                dev = dev.compose(&AffineIso::line_reflection(a, &u));
            }
            EventKind::VertexPass(v) => {
                let angle = witness.angles[v];
                let n = angle.den();
                let gamma = vertex_pass_word_element(polygon, witness, v, n);
                word.push(word.last().unwrap().compose(&gamma));
                let vertex = &polygon.vertices()[v];
                let local = if n % 2 == 0 {
                    AffineIso::point_reflection(vertex)
                } else {
                    // the continuation map is the involution refl(axis), so
                    // composing it sends the continued ray back onto the
                    // incoming line and keeps the development straight
                    let out_dir = polygon.edge_vec(v).to_f64();
                    let beta = out_dir[1].atan2(out_dir[0]);
                    let axis =
                        beta + (n + 1) as f64 * std::f64::consts::PI / (2 * n) as f64;
                    let (sa, ca) = axis.sin_cos();
                    AffineIso::line_reflection(
                        vertex,
                        &Vec2::new(S::from_f64(ca), S::from_f64(sa)),
                    )
                };
                dev = dev.compose(&local);
            }
        }
        developed_directions.push(dev.apply_vec(&traj.segment_directions[idx + 1]));
    }
    developed_points.push(dev.apply(&traj.end));
    LiftedGeodesic {
        endpoint_sheet: *word.last().unwrap(),
        group_word: word,
        developed_points,
        developed_directions,
        direction: traj.initial_direction.clone(),
    }
}

/// The symbolic group element picked up by a vertex passage: rot(pi) for
/// even n; for odd n the reflection at axis `theta_out + pi(n+1)/(2n)`
/// where `theta_out` is the symbolic direction angle of the outgoing edge.
fn vertex_pass_word_element<S: Scalar>(
    polygon: &Polygon<S>,
    witness: &RationalityWitness,
    v: usize,
    n: i64,
) -> DihedralElement {
    if n % 2 == 0 {
        return DihedralElement::rot(1, 1);
    }
    let theta_out = polygon.edge_reflection(witness, v).angle();
    let axis = theta_out.add(RationalAngle::new(n + 1, 2 * n));
    DihedralElement::reflection(axis)
}

/// Fold a straight developed segment back to a billiard trajectory.
///
/// The segment is specified by its start (base point + sheet) and its
/// direction in the chart of the starting copy; the start sheet only
/// left-multiplies the group word. Returns the folded trajectory; a vertex
/// hit is a singularity encounter and is an error unless the policy allows
/// continuing through removable lifts.
pub fn fold<S: Scalar>(
    surface: &UnfoldedSurface<S>,
    start: &crate::unfolding::SurfacePoint<S>,
    direction: Vec2<S>,
    length: f64,
    policy: VertexPolicy,
) -> Result<Trajectory<S>, FlowError> {
    let traj = shoot(
        &surface.base,
        &surface.witness,
        PhaseState { point: start.base.clone(), direction },
        length,
        policy,
    )?;
    if let Termination::HitVertex(v) = traj.termination {
        let [x, y] = traj.end.to_f64();
        return Err(FlowError::HitSingularity { vertex: v, x, y });
    }
    Ok(traj)
}
