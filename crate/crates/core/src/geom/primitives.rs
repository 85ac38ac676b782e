//! Points, vectors and the small predicate set the tracing kernel needs.

use std::fmt;

use super::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Point2<S: Scalar> {
    pub x: S,
    pub y: S,
}

#[derive(Clone, PartialEq)]
pub struct Vec2<S: Scalar> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> fmt::Debug for Point2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<S: Scalar> fmt::Debug for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.x, self.y)
    }
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Point2 { x, y }
    }

    pub fn from_f64(x: f64, y: f64) -> Self {
        Point2 { x: S::from_f64(x), y: S::from_f64(y) }
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    pub fn sub(&self, other: &Point2<S>) -> Vec2<S> {
        Vec2 { x: self.x.clone() - other.x.clone(), y: self.y.clone() - other.y.clone() }
    }

    pub fn add_vec(&self, v: &Vec2<S>) -> Point2<S> {
        Point2 { x: self.x.clone() + v.x.clone(), y: self.y.clone() + v.y.clone() }
    }

    pub fn dist2(&self, other: &Point2<S>) -> S {
        let d = self.sub(other);
        d.norm2()
    }

    pub fn dist_f64(&self, other: &Point2<S>) -> f64 {
        self.dist2(other).to_f64().sqrt()
    }

    pub fn lerp(&self, other: &Point2<S>, t: S) -> Point2<S> {
        let d = other.sub(self);
        self.add_vec(&d.scale(t))
    }
}

impl<S: Scalar> Vec2<S> {
    pub fn new(x: S, y: S) -> Self {
        Vec2 { x, y }
    }

    pub fn scale(&self, t: S) -> Vec2<S> {
        Vec2 { x: self.x.clone() * t.clone(), y: self.y.clone() * t }
    }

    pub fn neg(&self) -> Vec2<S> {
        Vec2 { x: -self.x.clone(), y: -self.y.clone() }
    }

    pub fn dot(&self, other: &Vec2<S>) -> S {
        self.x.clone() * other.x.clone() + self.y.clone() * other.y.clone()
    }

    pub fn cross(&self, other: &Vec2<S>) -> S {
        self.x.clone() * other.y.clone() - self.y.clone() * other.x.clone()
    }

    pub fn norm2(&self) -> S {
        self.dot(self)
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm2().to_f64().sqrt()
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    /// Reflect this vector across the line through the origin with direction `axis`.
    /// Stays rational for rational input: the matrix is
    /// `1/(dx^2+dy^2) * [[dx^2-dy^2, 2 dx dy], [2 dx dy, dy^2-dx^2]]`.
    pub fn reflect_across(&self, axis: &Vec2<S>) -> Vec2<S> {
        let dx = axis.x.clone();
        let dy = axis.y.clone();
        let n2 = dx.clone() * dx.clone() + dy.clone() * dy.clone();
        let a = (dx.clone() * dx.clone() - dy.clone() * dy.clone()) / n2.clone();
        let b = (S::from_i64(2) * dx * dy) / n2;
        Vec2 {
            x: a.clone() * self.x.clone() + b.clone() * self.y.clone(),
            y: b * self.x.clone() - a * self.y.clone(),
        }
    }
}

/// Orientation of `c` relative to the directed line `a -> b`:
/// positive = left turn, negative = right turn (exact sign in exact mode,
/// epsilon-snapped sign for floats).
pub fn orient<S: Scalar>(a: &Point2<S>, b: &Point2<S>, c: &Point2<S>) -> S {
    let ab = b.sub(a);
    let ac = c.sub(a);
    ab.cross(&ac)
}

/// Reflect a point across the (affine) line through `p` with direction `d`.
pub fn reflect_point_across_line<S: Scalar>(
    x: &Point2<S>,
    p: &Point2<S>,
    d: &Vec2<S>,
) -> Point2<S> {
    let v = x.sub(p);
    p.add_vec(&v.reflect_across(d))
}

/// Do the closed segments `a0 a1` and `b0 b1` properly cross (intersection in
/// the open interior of both)? Used by polygon simplicity validation.
pub fn segments_properly_cross<S: Scalar>(
    a0: &Point2<S>,
    a1: &Point2<S>,
    b0: &Point2<S>,
    b1: &Point2<S>,
) -> bool {
    let o1 = orient(a0, a1, b0).sign_eps();
    let o2 = orient(a0, a1, b1).sign_eps();
    let o3 = orient(b0, b1, a0).sign_eps();
    let o4 = orient(b0, b1, a1).sign_eps();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Is `p` on the closed segment `a b` (within backend tolerance)?
pub fn point_on_segment<S: Scalar>(p: &Point2<S>, a: &Point2<S>, b: &Point2<S>) -> bool {
    if orient(a, b, p).sign_eps() != 0 {
        return false;
    }
    let ab = b.sub(a);
    let t = ab.dot(&p.sub(a));
    t.sign_eps() >= 0 && (ab.norm2() - t).sign_eps() >= 0
}

/// Point-in-polygon by winding parity; boundary points count as inside.
pub fn point_in_polygon<S: Scalar>(p: &Point2<S>, vertices: &[Point2<S>]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        if point_on_segment(p, &vertices[i], &vertices[(i + 1) % n]) {
            return true;
        }
    }
    // Ray cast along +x with symbolic-perturbation-free crossing rule.
    let mut inside = false;
    for i in 0..n {
        let a = &vertices[i];
        let b = &vertices[(i + 1) % n];
        let (lo, hi) = if a.y < b.y { (a, b) } else { (b, a) };
        // Half-open in y to avoid double counting at vertices.
        if !(lo.y <= p.y && p.y < hi.y) {
            continue;
        }
        // Strictly to the right of p?
        let o = orient(lo, hi, p);
        if o.sign_eps() < 0 {
            inside = !inside;
        }
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(x: f64, y: f64) -> Point2<f64> {
        Point2::new(x, y)
    }

    #[test]
    fn proper_crossing() {
        assert!(segments_properly_cross(
            &p(0.0, 0.0),
            &p(2.0, 2.0),
            &p(0.0, 2.0),
            &p(2.0, 0.0)
        ));
        assert!(!segments_properly_cross(
            &p(0.0, 0.0),
            &p(1.0, 0.0),
            &p(1.0, 0.0),
            &p(1.0, 1.0)
        ));
    }

    #[test]
    fn polygon_containment_square() {
        let sq = vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        assert!(point_in_polygon(&p(0.5, 0.5), &sq));
        assert!(point_in_polygon(&p(0.0, 0.5), &sq));
        assert!(point_in_polygon(&p(1.0, 1.0), &sq));
        assert!(!point_in_polygon(&p(1.5, 0.5), &sq));
        assert!(!point_in_polygon(&p(-0.1, 0.99), &sq));
    }

    #[test]
    fn exact_reflection_stays_rational() {
        let v: Vec2<BigRational> =
            Vec2::new(Scalar::from_ratio(3, 7), Scalar::from_ratio(-2, 5));
        // axis at 45 degrees swaps coordinates
        let r = v.reflect_across(&Vec2::new(Scalar::from_i64(1), Scalar::from_i64(1)));
        assert_eq!(r.x, Scalar::from_ratio(-2, 5));
        assert_eq!(r.y, Scalar::from_ratio(3, 7));
    }

    #[test]
    fn reflect_point_across_diagonal_line() {
        let x = p(2.0, 0.0);
        let r = reflect_point_across_line(&x, &p(0.0, 1.0), &Vec2::new(1.0, 1.0));
        // line y = x + 1; reflection of (2,0) is (-1,3)
        assert!((r.x + 1.0).abs() < 1e-12 && (r.y - 3.0).abs() < 1e-12);
    }
}
