//! Polygon model: validation, interior angles, rationality detection, and
//! the symbolic reflections attached to edges.

use thiserror::Error;

use crate::geom::{
    orient, segments_properly_cross, DihedralElement, Point2, RationalAngle, Scalar, Vec2,
};

#[derive(Debug, Error, PartialEq)]
pub enum PolygonError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("repeated or coincident vertices at index {0}")]
    DegenerateVertex(usize),
    #[error("edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
}

/// A validated simple polygon with counterclockwise vertex order.
#[derive(Clone, Debug)]
pub struct Polygon<S: Scalar> {
    vertices: Vec<Point2<S>>,
}

/// Where a point sits relative to a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointLocation {
    Interior,
    OnEdge(usize),
    AtVertex(usize),
    Outside,
}

/// Per-vertex rational interior angles plus the lcm of their denominators.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalityWitness {
    pub angles: Vec<RationalAngle>,
    pub lcm_den: i64,
}

impl<S: Scalar> Polygon<S> {
    /// Validate a raw vertex list. Clockwise input is reversed; collinear
    /// triples, repeated vertices and self-intersections are rejected.
    pub fn validate(vertices: Vec<Point2<S>>) -> Result<Self, PolygonError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PolygonError::TooFewVertices(n));
        }
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            if a.dist2(b).is_zero_within_eps() {
                return Err(PolygonError::DegenerateVertex(i));
            }
        }
        for i in 0..n {
            let prev = &vertices[(i + n - 1) % n];
            let cur = &vertices[i];
            let next = &vertices[(i + 1) % n];
            if orient(prev, cur, next).sign_eps() == 0 {
                // collinear triple: a pi (or 2pi) vertex
                return Err(PolygonError::DegenerateVertex(i));
            }
        }
        // Simplicity: no two non-adjacent edges may intersect at all; adjacent
        // edges may only share their common endpoint (the collinear check above
        // already rules out overlap).
        for i in 0..n {
            let (a0, a1) = (&vertices[i], &vertices[(i + 1) % n]);
            for j in (i + 1)..n {
                if j == i || (j + 1) % n == i || (i + 1) % n == j {
                    continue;
                }
                let (b0, b1) = (&vertices[j], &vertices[(j + 1) % n]);
                if segments_properly_cross(a0, a1, b0, b1)
                    || crate::geom::point_on_segment(b0, a0, a1)
                    || crate::geom::point_on_segment(b1, a0, a1)
                    || crate::geom::point_on_segment(a0, b0, b1)
                    || crate::geom::point_on_segment(a1, b0, b1)
                {
                    return Err(PolygonError::SelfIntersection(i, j));
                }
            }
        }
        let mut vertices = vertices;
        if Self::signed_area2(&vertices) < S::zero() {
            vertices.reverse();
        }
        Ok(Polygon { vertices })
    }

    fn signed_area2(vertices: &[Point2<S>]) -> S {
        let n = vertices.len();
        let mut acc = S::zero();
        for i in 0..n {
            let a = &vertices[i];
            let b = &vertices[(i + 1) % n];
            acc = acc + (a.x.clone() * b.y.clone() - b.x.clone() * a.y.clone());
        }
        acc
    }

    pub fn vertices(&self) -> &[Point2<S>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Directed edge `i`: from vertex i to vertex i+1.
    pub fn edge(&self, i: usize) -> (&Point2<S>, &Point2<S>) {
        (&self.vertices[i], &self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn edge_vec(&self, i: usize) -> Vec2<S> {
        let (a, b) = self.edge(i);
        b.sub(a)
    }

    pub fn area(&self) -> S {
        Self::signed_area2(&self.vertices) / S::from_i64(2)
    }

    pub fn contains(&self, p: &Point2<S>) -> bool {
        crate::geom::point_in_polygon(p, &self.vertices)
    }

    /// Locate a point relative to the polygon (vertex test first, then
    /// edges, then interior).
    pub fn locate(&self, p: &Point2<S>) -> PointLocation {
        let n = self.vertices.len();
        for v in 0..n {
            if self.vertices[v].dist2(p).is_zero_within_eps() {
                return PointLocation::AtVertex(v);
            }
        }
        for e in 0..n {
            let (a, b) = self.edge(e);
            if crate::geom::point_on_segment(p, a, b) {
                return PointLocation::OnEdge(e);
            }
        }
        if self.contains(p) {
            PointLocation::Interior
        } else {
            PointLocation::Outside
        }
    }

    /// Does a ray from `p` with direction `d` immediately enter the open
    /// interior? Strict at the boundary: tangent and outward directions are
    /// rejected. For boundary points this is a local wedge test, immune to
    /// the containment epsilon.
    pub fn admits_direction(&self, p: &Point2<S>, d: &Vec2<S>) -> bool {
        match self.locate(p) {
            PointLocation::Interior => true,
            PointLocation::Outside => false,
            PointLocation::OnEdge(e) => {
                // interior lies to the left of the ccw edge
                self.edge_vec(e).cross(d).sign_eps() > 0
            }
            PointLocation::AtVertex(v) => {
                let n = self.vertices.len();
                let u_out = self.edge_vec(v);
                let u_in = self.edge_vec((v + n - 1) % n).neg();
                // d strictly inside the interior wedge from u_out ccw to u_in
                let c1 = u_out.cross(d).sign_eps() > 0;
                let c2 = d.cross(&u_in).sign_eps() > 0;
                if u_out.cross(&u_in).sign_eps() > 0 {
                    c1 && c2 // convex wedge (< pi)
                } else {
                    c1 || c2 // straight or reflex wedge
                }
            }
        }
    }

    pub fn diameter_f64(&self) -> f64 {
        let mut best = 0.0_f64;
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                best = best.max(self.vertices[i].dist_f64(&self.vertices[j]));
            }
        }
        best
    }

    /// Interior angle at vertex `i`, in radians (geometric, f64).
    pub fn interior_angle(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        let prev = &self.vertices[(i + n - 1) % n];
        let cur = &self.vertices[i];
        let next = &self.vertices[(i + 1) % n];
        let u = prev.sub(cur).to_f64();
        let v = next.sub(cur).to_f64();
        // Counterclockwise polygon: interior is to the left of cur->next, so the
        // interior angle is the ccw angle from v to u.
        let ang = (u[1].atan2(u[0]) - v[1].atan2(v[0])).rem_euclid(std::f64::consts::TAU);
        ang
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        (0..self.vertices.len()).map(|i| self.interior_angle(i)).collect()
    }

    /// Direction angle of edge `i` relative to edge 0, as an exact rational
    /// multiple of pi, using the rational angle witness. The cumulative turn
    /// at vertex v is pi - interior(v), and all interior angles are rational.
    fn relative_edge_angle(&self, witness: &RationalityWitness, i: usize) -> RationalAngle {
        let mut acc = RationalAngle::ZERO;
        for v in 1..=i {
            // turning at vertex v (between edge v-1 and edge v): pi - interior
            acc = acc.add(RationalAngle::PI.sub(witness.angles[v]));
        }
        acc
    }

    /// The symbolic reflection across edge `i`'s direction, with axis angle
    /// measured from the reference direction (edge 0). For polygons whose
    /// first edge lies along the positive x-axis this is the plane axis angle.
    pub fn edge_reflection(&self, witness: &RationalityWitness, i: usize) -> DihedralElement {
        DihedralElement::reflection(self.relative_edge_angle(witness, i))
    }

    /// Snap every interior angle to `p*pi/q` with `q <= max_den`. Returns the
    /// witness when all angles snap within tolerance and the snapped angles
    /// sum to `(k-2)*pi` exactly; otherwise `None`.
    pub fn rationality(&self, max_den: i64) -> Option<RationalityWitness> {
        let tol = if S::EXACT { 1e-9 } else { 64.0 * crate::geom::EPS_ANGLE.max(1e-12) };
        let mut angles = Vec::with_capacity(self.vertices.len());
        let mut lcm_den: i64 = 1;
        for i in 0..self.vertices.len() {
            let t = self.interior_angle(i) / std::f64::consts::PI;
            let (p, q) = approximate_fraction(t, max_den)?;
            if (t - p as f64 / q as f64).abs() > tol.max(1e-9) {
                return None;
            }
            if p <= 0 {
                return None;
            }
            angles.push(RationalAngle::new(p, q));
            lcm_den = num_integer::lcm(lcm_den, RationalAngle::new(p, q).den());
        }
        // exact angle-sum check: sum p_i/q_i == k - 2
        let mut sum = RationalAngle::ZERO;
        for a in &angles {
            sum = sum.add(*a);
        }
        let expect = RationalAngle::new(self.vertices.len() as i64 - 2, 1);
        if sum != expect {
            return None;
        }
        Some(RationalityWitness { angles, lcm_den })
    }
}

/// Best rational approximation p/q of `x` with q <= max_den (continued
/// fractions, stopping early on near-exact convergents).
fn approximate_fraction(x: f64, max_den: i64) -> Option<(i64, i64)> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1_i64, 0_i64, x.floor() as i64, 1_i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        if (p1 as f64 / q1 as f64 - x).abs() < 1e-13 {
            break;
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        frac = r - a;
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    if q1 <= max_den && q1 >= 1 {
        Some((p1, q1))
    } else {
        None
    }
}

pub const DEFAULT_MAX_DEN: i64 = 64;

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(pts: &[(f64, f64)]) -> Result<Polygon<f64>, PolygonError> {
        Polygon::validate(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect())
    }

    #[test]
    fn unit_square_validates() {
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(q.len(), 4);
        assert!((q.area() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let q = poly(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]).unwrap();
        assert!(q.area() > 0.0);
    }

    #[test]
    fn bowtie_rejected() {
        let e = poly(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]).unwrap_err();
        assert!(matches!(e, PolygonError::SelfIntersection(..)));
    }

    #[test]
    fn collinear_vertex_rejected() {
        let e = poly(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (1.0, 1.0)]).unwrap_err();
        assert!(matches!(e, PolygonError::DegenerateVertex(_)));
    }

    #[test]
    fn square_rationality() {
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
        assert_eq!(w.lcm_den, 2);
        assert!(w.angles.iter().all(|a| *a == RationalAngle::new(1, 2)));
    }

    #[test]
    fn figure_triangle_rationality() {
        // angles pi/8, 5pi/8, pi/4 (third forced by the angle sum)
        let a = std::f64::consts::PI / 8.0;
        // place A at origin, B at (1, 0); angle at A = pi/8, at B = 5pi/8.
        let dir_ac = a;
        let b_interior = 5.0 * std::f64::consts::PI / 8.0;
        // C = intersection of ray from A at angle pi/8 with ray from B at pi - 5pi/8
        let dir_bc = std::f64::consts::PI - b_interior;
        // solve A + t*(cos a, sin a) = B + s*(cos(pi-b), sin(pi-b))
        let (ca, sa) = (dir_ac.cos(), dir_ac.sin());
        let (cb, sb) = (dir_bc.cos(), dir_bc.sin());
        // solve t*(ca, sa) - s*(cb, sb) = B - A = (1, 0)
        let t = sb / (ca * sb - sa * cb);
        let c = (t * ca, t * sa);
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), c]).unwrap();
        let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
        assert_eq!(w.lcm_den, 8);
        assert_eq!(w.angles[0], RationalAngle::new(1, 8));
        assert_eq!(w.angles[1], RationalAngle::new(5, 8));
        assert_eq!(w.angles[2], RationalAngle::new(1, 4));
    }

    #[test]
    fn irrational_angle_has_no_witness() {
        // triangle with an angle of 1 radian at the origin
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0_f64.cos(), 1.0_f64.sin())]).unwrap();
        assert!(q.rationality(DEFAULT_MAX_DEN).is_none());
    }

    #[test]
    fn edge_reflections_of_square() {
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
        assert_eq!(q.edge_reflection(&w, 0), DihedralElement::refl(0, 1));
        assert_eq!(q.edge_reflection(&w, 1), DihedralElement::refl(1, 2));
        assert_eq!(q.edge_reflection(&w, 2), DihedralElement::refl(0, 1));
        assert_eq!(q.edge_reflection(&w, 3), DihedralElement::refl(1, 2));
    }

    #[test]
    fn edge_reflection_of_hypotenuse() {
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]).unwrap();
        let w = q.rationality(DEFAULT_MAX_DEN).unwrap();
        assert_eq!(q.edge_reflection(&w, 2), DihedralElement::refl(1, 4));
    }

    #[test]
    fn direction_admission_at_boundary() {
        let q = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).unwrap();
        let w = Point2::new(0.5, 0.0);
        // inward, tangent, outward from a wall point
        assert!(q.admits_direction(&w, &Vec2::new(0.0, 1.0)));
        assert!(!q.admits_direction(&w, &Vec2::new(1.0, 0.0)));
        assert!(!q.admits_direction(&w, &Vec2::new(0.0, -1.0)));
        // convex corner wedge
        let c = Point2::new(0.0, 0.0);
        assert!(q.admits_direction(&c, &Vec2::new(1.0, 1.0)));
        assert!(!q.admits_direction(&c, &Vec2::new(-1.0, 1.0)));
        assert!(!q.admits_direction(&c, &Vec2::new(1.0, 0.0))); // tangent
        // reflex corner of an L-shape admits more than a half plane
        let l = poly(&[
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ])
        .unwrap();
        let r = Point2::new(1.0, 1.0);
        assert!(l.admits_direction(&r, &Vec2::new(-1.0, -1.0)));
        assert!(l.admits_direction(&r, &Vec2::new(1.0, -1.0)));
        assert!(l.admits_direction(&r, &Vec2::new(-1.0, 1.0)));
        assert!(!l.admits_direction(&r, &Vec2::new(1.0, 1.0)));
        // interior and exterior
        assert!(q.admits_direction(&Point2::new(0.5, 0.5), &Vec2::new(1.0, 0.0)));
        assert!(!q.admits_direction(&Point2::new(1.5, 0.5), &Vec2::new(-1.0, 0.0)));
    }

    #[test]
    fn angle_sum_matches_euler() {
        let q = poly(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)])
            .unwrap();
        let total: f64 = q.interior_angles().iter().sum();
        let expect = (q.len() as f64 - 2.0) * std::f64::consts::PI;
        assert!((total - expect).abs() < q.len() as f64 * 1e-9);
    }
}
