//! The two bundled rooms with certified dark pairs, frozen as data files.
//!
//! Both live in the right-isosceles reflection tiling and were produced by
//! `search_min_edges`-style repair search, then frozen. room22 attains the
//! 22-edge bound with one interior marked point and one on a wall; room26
//! carries both marked points in the interior.

use super::cert::{certify, NonIlluminationCertificate};
use super::room::{compose_polygon, TiledPolygon};
use super::tiling::ChartPoint;
use crate::io::parse_cells_file;

pub const ROOM22_CELLS: &str = include_str!("../../data/room22.cells");
pub const ROOM26_CELLS: &str = include_str!("../../data/room26.cells");

pub const ROOM22_PAIR: (ChartPoint, ChartPoint) = ((0, 0), (4, 0));
pub const ROOM26_PAIR: (ChartPoint, ChartPoint) = ((0, 0), (4, 2));

fn load(text: &str) -> TiledPolygon {
    let (family, cells) = parse_cells_file(text).expect("bundled cells parse");
    compose_polygon(family, &cells).expect("bundled cells compose")
}

/// The 22-edge room and its dark pair.
pub fn room22() -> (TiledPolygon, (ChartPoint, ChartPoint)) {
    (load(ROOM22_CELLS), ROOM22_PAIR)
}

/// The 26-edge room (both marked points interior) and its dark pair.
pub fn room26() -> (TiledPolygon, (ChartPoint, ChartPoint)) {
    (load(ROOM26_CELLS), ROOM26_PAIR)
}

pub fn room22_certificate() -> NonIlluminationCertificate {
    let (room, (p1, p2)) = room22();
    certify(&room, p1, p2)
}

pub fn room26_certificate() -> NonIlluminationCertificate {
    let (room, (p1, p2)) = room26();
    certify(&room, p1, p2)
}
