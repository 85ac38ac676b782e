//! Pluggable numeric backend for plane coordinates.
//!
//! Two backends: `f64` with tolerances, and exact rationals (`BigRational`,
//! zero tolerance). Exact coordinates are legal for any polygon whose
//! vertices are rational; note that edge-line reflections of rational data
//! stay rational, so the whole tracing pipeline closes over either backend.
//! Rotations by general rational angles do not (cos of pi/8 is irrational),
//! which is why group elements stay symbolic and only their quarter-turn
//! family is applied exactly.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Default float tolerance for point incidence tests.
pub const EPS_POINT: f64 = 1e-9;
/// Default float tolerance for angle comparisons.
pub const EPS_ANGLE: f64 = 1e-12;
/// Vertex-hit threshold, as a fraction of the polygon diameter.
pub const VERTEX_EPS_FACTOR: f64 = 1e-12;

/// Runtime description of the active backend.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Backend {
    /// Exact rational coordinates; epsilon is zero.
    Exact,
    /// f64 coordinates with the given incidence epsilon.
    Float { epsilon: f64 },
}

impl Backend {
    pub fn epsilon(&self) -> f64 {
        match self {
            Backend::Exact => 0.0,
            Backend::Float { epsilon } => *epsilon,
        }
    }
}

impl Default for Backend {
    fn default() -> Self {
        Backend::Float { epsilon: EPS_POINT }
    }
}

/// Coordinate scalar for the geometry kernel.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + Debug
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;
    fn is_zero_val(&self) -> bool;

    /// Incidence epsilon in the scalar's own scale (zero when exact).
    fn eps() -> Self;

    /// Sign with the backend's epsilon: -1, 0, +1.
    fn sign_eps(&self) -> i8 {
        if self.is_zero_within_eps() {
            0
        } else if *self > Self::zero() {
            1
        } else {
            -1
        }
    }

    fn is_zero_within_eps(&self) -> bool;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_zero_val(&self) -> bool {
        *self == 0.0
    }
    fn eps() -> Self {
        EPS_POINT
    }
    fn is_zero_within_eps(&self) -> bool {
        f64::abs(*self) <= EPS_POINT
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as num_traits::One>::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_f64(v: f64) -> Self {
        <BigRational as FromPrimitive>::from_f64(v)
            .expect("finite float required for exact backend")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn is_zero_val(&self) -> bool {
        Zero::is_zero(self)
    }
    fn eps() -> Self {
        <BigRational as Zero>::zero()
    }
    fn is_zero_within_eps(&self) -> bool {
        Zero::is_zero(self)
    }
}
