//! Rational polygonal billiards toolkit.
//!
//! A rational polygon (all interior angles in Q*pi) unfolds into a compact
//! translation surface: finitely many reflected copies of the table glued
//! along matched parallel edges. Billiard trajectories straighten to
//! geodesics on that surface and geodesics fold back down to trajectories.
//! On top of that correspondence this crate provides a desk-scale
//! illumination search, blocking-set verification with group-orbit lifting,
//! and exact certificates of non-illumination for polygons tiled by
//! reflections of the (2,4,4) and (2,3,6) triangles.

pub mod flow;
pub mod geom;
pub mod illumination;
pub mod io;
pub mod polygon;
pub mod render;
pub mod tokarsky;
pub mod unfolding;

pub use geom::{Backend, DihedralElement, Point2, RationalAngle, Scalar, Vec2};
pub use polygon::{Polygon, PolygonError, RationalityWitness};
pub use unfolding::{ReflectionGroup, SurfacePoint, UnfoldedSurface};
