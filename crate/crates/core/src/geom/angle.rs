//! Exact rational multiples of pi and the finite orthogonal-group elements
//! built from them.
//!
//! Group logic (closure, equality, orbits, gluing combinatorics) must never
//! go through floating point: a reflection group element is a `kind` plus a
//! reduced fraction of pi, and composition is fraction arithmetic. Floats
//! only appear when an element is finally applied to plane coordinates.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

/// An angle `num * pi / den`, stored as a reduced fraction of pi.
///
/// `den >= 1` and `gcd(|num|, den) = 1`. Rotation angles are normalized to
/// `[0, 2pi)`, reflection axes to `[0, pi)`; both normalizations are
/// idempotent.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalAngle {
    num: i64,
    den: i64,
}

impl RationalAngle {
    pub const ZERO: RationalAngle = RationalAngle { num: 0, den: 1 };
    pub const PI: RationalAngle = RationalAngle { num: 1, den: 1 };

    /// `num * pi / den`, reduced. Panics on `den = 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "angle denominator must be nonzero");
        let (mut num, mut den) = (num as i128, den as i128);
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        RationalAngle {
            num: i64::try_from(num).expect("angle numerator overflow"),
            den: i64::try_from(den).expect("angle denominator overflow"),
        }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn radians(&self) -> f64 {
        self.num as f64 * std::f64::consts::PI / self.den as f64
    }

    fn add_raw(a: RationalAngle, b: RationalAngle) -> RationalAngle {
        let den = (a.den as i128) * (b.den as i128);
        let num = (a.num as i128) * (b.den as i128) + (b.num as i128) * (a.den as i128);
        let g = num.gcd(&den);
        let (num, den) = if g > 1 { (num / g, den / g) } else { (num, den) };
        RationalAngle {
            num: i64::try_from(num).expect("angle numerator overflow"),
            den: i64::try_from(den).expect("angle denominator overflow"),
        }
    }

    pub fn add(self, other: RationalAngle) -> RationalAngle {
        Self::add_raw(self, other)
    }

    pub fn sub(self, other: RationalAngle) -> RationalAngle {
        Self::add_raw(self, RationalAngle { num: -other.num, den: other.den })
    }

    pub fn neg(self) -> RationalAngle {
        RationalAngle { num: -self.num, den: self.den }
    }

    pub fn scale(self, k: i64) -> RationalAngle {
        RationalAngle::new(
            i64::try_from(self.num as i128 * k as i128).expect("angle numerator overflow"),
            self.den,
        )
    }

    pub fn half(self) -> RationalAngle {
        RationalAngle::new(self.num, self.den.checked_mul(2).expect("angle denominator overflow"))
    }

    /// Reduce into `[0, modulus)` where the modulus is `m * pi`.
    fn rem_pi_multiple(self, m: i64) -> RationalAngle {
        let span = (m as i128) * (self.den as i128);
        let mut n = (self.num as i128).rem_euclid(span);
        let d = self.den as i128;
        // already reduced as a fraction, but the representative may share a
        // factor with den after the mod (it cannot: mod preserves gcd with den).
        let g = n.gcd(&d);
        let (den, num) = if g > 1 { (d / g, { n /= g; n }) } else { (d, n) };
        RationalAngle {
            num: i64::try_from(num).expect("angle numerator overflow"),
            den: i64::try_from(den).expect("angle denominator overflow"),
        }
    }

    /// Canonical representative in `[0, 2pi)`.
    pub fn normalized_rotation(self) -> RationalAngle {
        self.rem_pi_multiple(2)
    }

    /// Canonical representative in `[0, pi)`.
    pub fn normalized_axis(self) -> RationalAngle {
        self.rem_pi_multiple(1)
    }

    /// Compare as real numbers (exact; cross-multiplication).
    pub fn cmp_value(&self, other: &RationalAngle) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }
}

impl fmt::Debug for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{}pi", n),
            (1, d) => write!(f, "pi/{}", d),
            (n, d) => write!(f, "{}pi/{}", n, d),
        }
    }
}

/// An element of a finite subgroup of `O(2)`: a rotation by a rational angle
/// or a reflection across a line through the origin at a rational axis angle.
///
/// The representation is always canonical, so `==` is exact group equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum DihedralElement {
    /// Rotation by `angle`, normalized to `[0, 2pi)`.
    Rotation(RationalAngle),
    /// Reflection across the line at `axis` to the positive x-axis, axis in `[0, pi)`.
    Reflection(RationalAngle),
}

impl DihedralElement {
    pub const IDENTITY: DihedralElement = DihedralElement::Rotation(RationalAngle::ZERO);

    pub fn rotation(angle: RationalAngle) -> Self {
        DihedralElement::Rotation(angle.normalized_rotation())
    }

    pub fn reflection(axis: RationalAngle) -> Self {
        DihedralElement::Reflection(axis.normalized_axis())
    }

    /// Rotation by `num*pi/den`.
    pub fn rot(num: i64, den: i64) -> Self {
        Self::rotation(RationalAngle::new(num, den))
    }

    /// Reflection with axis angle `num*pi/den`.
    pub fn refl(num: i64, den: i64) -> Self {
        Self::reflection(RationalAngle::new(num, den))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, DihedralElement::Rotation(a) if a.is_zero())
    }

    pub fn is_rotation(&self) -> bool {
        matches!(self, DihedralElement::Rotation(_))
    }

    pub fn is_reflection(&self) -> bool {
        matches!(self, DihedralElement::Reflection(_))
    }

    /// The matrix product `self * other` (apply `other` first), canonical.
    pub fn compose(&self, other: &DihedralElement) -> DihedralElement {
        use DihedralElement::*;
        match (*self, *other) {
            (Rotation(a), Rotation(b)) => Self::rotation(a.add(b)),
            // rot(a) * refl(phi) reflects across phi then rotates: axis phi + a/2.
            (Rotation(a), Reflection(phi)) => Self::reflection(phi.add(a.half())),
            // refl(phi) * rot(a): axis phi - a/2.
            (Reflection(phi), Rotation(a)) => Self::reflection(phi.sub(a.half())),
            // refl(phi1) * refl(phi2) = rot(2(phi1 - phi2)).
            (Reflection(p1), Reflection(p2)) => Self::rotation(p1.sub(p2).scale(2)),
        }
    }

    pub fn inverse(&self) -> DihedralElement {
        match *self {
            DihedralElement::Rotation(a) => Self::rotation(a.neg()),
            DihedralElement::Reflection(_) => *self,
        }
    }

    pub fn pow(&self, mut k: u32) -> DihedralElement {
        let mut acc = DihedralElement::IDENTITY;
        let mut base = *self;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            k >>= 1;
        }
        acc
    }

    /// True iff the matrix of the element is `+I` or `-I`.
    pub fn is_real_scalar(&self) -> bool {
        match self {
            DihedralElement::Rotation(a) => {
                a.is_zero() || (a.num() == 1 && a.den() == 1)
            }
            DihedralElement::Reflection(_) => false,
        }
    }

    /// Rotation angle (rotations) or axis angle (reflections), canonical.
    pub fn angle(&self) -> RationalAngle {
        match *self {
            DihedralElement::Rotation(a) => a,
            DihedralElement::Reflection(a) => a,
        }
    }

    /// Orthogonal matrix `[[a, b], [c, d]]` in floating point.
    pub fn matrix_f64(&self) -> [[f64; 2]; 2] {
        match self {
            DihedralElement::Rotation(a) => {
                let (s, c) = a.radians().sin_cos();
                [[c, -s], [s, c]]
            }
            DihedralElement::Reflection(phi) => {
                let two_phi = phi.scale(2);
                let (s, c) = two_phi.radians().sin_cos();
                [[c, s], [s, -c]]
            }
        }
    }

    /// Exact integer matrix when every entry is in `{-1, 0, 1}`, i.e. when
    /// the rotation angle (or doubled axis angle) is a multiple of `pi/2`.
    /// The general rational-angle element has irrational entries and is only
    /// available through `matrix_f64`.
    pub fn matrix_exact(&self) -> Option<[[i64; 2]; 2]> {
        fn cos_sin_quarter(a: RationalAngle) -> Option<(i64, i64)> {
            // cos/sin of k*pi/2
            let a = a.normalized_rotation();
            if a.den() == 1 {
                return Some(if a.num() == 0 { (1, 0) } else { (-1, 0) });
            }
            if a.den() == 2 {
                return Some(if a.num() == 1 { (0, 1) } else { (0, -1) });
            }
            None
        }
        match self {
            DihedralElement::Rotation(a) => {
                let (c, s) = cos_sin_quarter(*a)?;
                Some([[c, -s], [s, c]])
            }
            DihedralElement::Reflection(phi) => {
                let (c, s) = cos_sin_quarter(phi.scale(2))?;
                Some([[c, s], [s, -c]])
            }
        }
    }

    /// Apply to a float point/vector.
    pub fn apply_f64(&self, p: [f64; 2]) -> [f64; 2] {
        let m = self.matrix_f64();
        [m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1]]
    }

    /// Deterministic total order: rotations first by angle, then reflections
    /// by axis. Used to pick canonical sheets and to index group elements.
    pub fn canonical_cmp(&self, other: &DihedralElement) -> Ordering {
        use DihedralElement::*;
        match (self, other) {
            (Rotation(_), Reflection(_)) => Ordering::Less,
            (Reflection(_), Rotation(_)) => Ordering::Greater,
            (Rotation(a), Rotation(b)) | (Reflection(a), Reflection(b)) => a.cmp_value(b),
        }
    }
}

impl fmt::Debug for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DihedralElement::Rotation(a) if a.is_zero() => write!(f, "id"),
            DihedralElement::Rotation(a) => write!(f, "rot({})", a),
            DihedralElement::Reflection(a) => write!(f, "refl({})", a),
        }
    }
}
