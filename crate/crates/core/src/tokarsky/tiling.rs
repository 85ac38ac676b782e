//! Integer-chart models of the two Euclidean reflection tilings used for
//! certificates: the (2,4,4) right isosceles triangle and the (2,3,6)
//! half-equilateral.
//!
//! All combinatorics (cell vertices, vertex classes, incidence, orientation)
//! run on exact integer chart coordinates; the plane embedding is a diagonal
//! linear map, so chart cross products are proportional to plane cross
//! products and every collinearity/orientation decision made in the chart is
//! valid in the plane.
//!
//! (2,4,4) chart: plane coordinates themselves. Cells are half unit squares;
//! square (i,j) is cut by its main diagonal when i+j is even, by its
//! anti-diagonal when odd. Vertex classes: the acute tiling vertex A sits on
//! (even, even) points, the right-angle vertex B on odd-parity points, the
//! other acute vertex C on (odd, odd) points.
//!
//! (2,3,6) chart: the plane point is (U*sqrt(3)/2, V/2). Lattice corners,
//! edge midpoints and triangle centers of the equilateral tiling all land on
//! integer (U, V). The pi/6 vertex A lives on the corner lattice
//! {(4i+2j, 6j)}, B (pi/2) on edge midpoints, C (pi/3) on centers.

use crate::geom::Point2;

pub type ChartPoint = (i64, i64);

/// Identifier of one triangle cell of the tiling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub i: i64,
    pub j: i64,
    pub o: u8,
}

impl CellId {
    pub fn new(i: i64, j: i64, o: u8) -> Self {
        CellId { i, j, o }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VertexClass {
    /// Orbit of the lemma's acute vertex A (angle pi/n).
    A,
    /// Orbit of the right-angle vertex B.
    B,
    /// Orbit of the third vertex C.
    C,
}

/// The two plane-tiling triangle families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangleFamily {
    /// (pi/4, pi/2, pi/4): n = 4, m = 2.
    Right244,
    /// (pi/6, pi/2, pi/3): n = 6, m = 3.
    Half236,
}

impl TriangleFamily {
    pub fn n(&self) -> i64 {
        match self {
            TriangleFamily::Right244 => 4,
            TriangleFamily::Half236 => 6,
        }
    }

    pub fn m(&self) -> i64 {
        match self {
            TriangleFamily::Right244 => 2,
            TriangleFamily::Half236 => 3,
        }
    }

    /// Number of cells sharing an orbit-`class` tiling vertex.
    pub fn wedge_count(&self, class: VertexClass) -> usize {
        match (self, class) {
            (TriangleFamily::Right244, VertexClass::A | VertexClass::C) => 8,
            (TriangleFamily::Right244, VertexClass::B) => 4,
            (TriangleFamily::Half236, VertexClass::A) => 12,
            (TriangleFamily::Half236, VertexClass::B) => 4,
            (TriangleFamily::Half236, VertexClass::C) => 6,
        }
    }

    /// Chart vertices of a cell, in counterclockwise plane order.
    pub fn cell_vertices(&self, c: CellId) -> [ChartPoint; 3] {
        match self {
            TriangleFamily::Right244 => {
                let (i, j) = (c.i, c.j);
                let even = (i + j).rem_euclid(2) == 0;
                match (even, c.o) {
                    // main diagonal (i,j)-(i+1,j+1)
                    (true, 0) => [(i, j), (i + 1, j), (i + 1, j + 1)],
                    (true, _) => [(i, j), (i + 1, j + 1), (i, j + 1)],
                    // anti-diagonal (i+1,j)-(i,j+1)
                    (false, 0) => [(i, j), (i + 1, j), (i, j + 1)],
                    (false, _) => [(i + 1, j), (i + 1, j + 1), (i, j + 1)],
                }
            }
            TriangleFamily::Half236 => {
                let b = (4 * c.i + 2 * c.j, 6 * c.j);
                let add = |p: ChartPoint, q: (i64, i64)| (p.0 + q.0, p.1 + q.1);
                let (corners, center) = if c.o < 6 {
                    ([add(b, (0, 0)), add(b, (4, 0)), add(b, (2, 6))], add(b, (2, 2)))
                } else {
                    ([add(b, (4, 0)), add(b, (6, 6)), add(b, (2, 6))], add(b, (4, 4)))
                };
                let o = (c.o % 6) as usize;
                let k = o / 2; // which corner
                let s = o % 2; // which incident side
                let corner = corners[k];
                let other = corners[(k + 1 + s) % 3];
                let mid = ((corner.0 + other.0) / 2, (corner.1 + other.1) / 2);
                // order ccw in the plane
                orient_ccw([corner, mid, center])
            }
        }
    }

    /// Vertex class of a chart point, or `None` when it is not a tiling vertex.
    pub fn vertex_class(&self, p: ChartPoint) -> Option<VertexClass> {
        match self {
            TriangleFamily::Right244 => {
                let (x, y) = p;
                Some(if (x + y).rem_euclid(2) == 1 {
                    VertexClass::B
                } else if x.rem_euclid(2) == 0 {
                    VertexClass::A
                } else {
                    VertexClass::C
                })
            }
            TriangleFamily::Half236 => {
                let on_corner_lattice = |a: i64, b: i64| -> bool {
                    b.rem_euclid(6) == 0 && (a - b / 3).rem_euclid(4) == 0
                };
                let (u, v) = p;
                if on_corner_lattice(u, v) {
                    return Some(VertexClass::A);
                }
                for (ox, oy) in [(2, 0), (1, 3), (-1, 3)] {
                    if on_corner_lattice(u - ox, v - oy) {
                        return Some(VertexClass::B);
                    }
                }
                for (ox, oy) in [(2, 2), (2, -2)] {
                    if on_corner_lattice(u - ox, v - oy) {
                        return Some(VertexClass::C);
                    }
                }
                None
            }
        }
    }

    /// All cells having `p` as a vertex.
    pub fn incident_cells(&self, p: ChartPoint) -> Vec<CellId> {
        let mut out = Vec::new();
        match self {
            TriangleFamily::Right244 => {
                for i in (p.0 - 1)..=p.0 {
                    for j in (p.1 - 1)..=p.1 {
                        for o in 0..2 {
                            let c = CellId::new(i, j, o);
                            if self.cell_vertices(c).contains(&p) {
                                out.push(c);
                            }
                        }
                    }
                }
            }
            TriangleFamily::Half236 => {
                let j0 = p.1.div_euclid(6);
                for j in (j0 - 2)..=(j0 + 1) {
                    let i0 = (p.0 - 2 * j).div_euclid(4);
                    for i in (i0 - 2)..=(i0 + 1) {
                        for o in 0..12 {
                            let c = CellId::new(i, j, o);
                            if self.cell_vertices(c).contains(&p) {
                                out.push(c);
                            }
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Plane embedding of a chart point.
    pub fn to_plane(&self, p: ChartPoint) -> Point2<f64> {
        match self {
            TriangleFamily::Right244 => Point2::new(p.0 as f64, p.1 as f64),
            TriangleFamily::Half236 => {
                Point2::new(p.0 as f64 * 3.0_f64.sqrt() / 2.0, p.1 as f64 / 2.0)
            }
        }
    }

    /// Squared plane norm of a chart vector, times 4 (an exact integer).
    pub fn plane_norm2_x4(&self, p: ChartPoint) -> i64 {
        match self {
            TriangleFamily::Right244 => 4 * (p.0 * p.0 + p.1 * p.1),
            TriangleFamily::Half236 => 3 * p.0 * p.0 + p.1 * p.1,
        }
    }
}

fn orient_ccw(mut tri: [ChartPoint; 3]) -> [ChartPoint; 3] {
    let [a, b, c] = tri;
    let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
    if cross < 0 {
        tri.swap(1, 2);
    }
    tri
}

/// The three edges of a cell as normalized (min, max) chart point pairs.
pub fn cell_edges(family: TriangleFamily, c: CellId) -> [(ChartPoint, ChartPoint); 3] {
    let v = family.cell_vertices(c);
    [norm_edge(v[0], v[1]), norm_edge(v[1], v[2]), norm_edge(v[2], v[0])]
}

pub fn norm_edge(a: ChartPoint, b: ChartPoint) -> (ChartPoint, ChartPoint) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn cell_vertex_classes_244() {
        let f = TriangleFamily::Right244;
        for i in -3..3 {
            for j in -3..3 {
                for o in 0..2 {
                    let v = f.cell_vertices(CellId::new(i, j, o));
                    let classes: Vec<_> =
                        v.iter().map(|&p| f.vertex_class(p).unwrap()).collect();
                    // each cell has exactly one vertex of each class
                    assert!(classes.contains(&VertexClass::A));
                    assert!(classes.contains(&VertexClass::B));
                    assert!(classes.contains(&VertexClass::C));
                }
            }
        }
    }

    #[test]
    fn cell_vertex_classes_236() {
        let f = TriangleFamily::Half236;
        for i in -2..2 {
            for j in -2..2 {
                for o in 0..12 {
                    let v = f.cell_vertices(CellId::new(i, j, o));
                    let classes: Vec<_> =
                        v.iter().map(|&p| f.vertex_class(p).unwrap()).collect();
                    assert!(classes.contains(&VertexClass::A), "{v:?} -> {classes:?}");
                    assert!(classes.contains(&VertexClass::B));
                    assert!(classes.contains(&VertexClass::C));
                }
            }
        }
    }

    #[test]
    fn incidence_counts_match_wedges() {
        for f in [TriangleFamily::Right244, TriangleFamily::Half236] {
            // probe a handful of vertices of each class
            let mut seen = HashSet::new();
            for i in -2..2 {
                for j in -2..2 {
                    let omax = if f == TriangleFamily::Right244 { 2 } else { 12 };
                    for o in 0..omax {
                        for p in f.cell_vertices(CellId::new(i, j, o)) {
                            if !seen.insert(p) {
                                continue;
                            }
                            let class = f.vertex_class(p).unwrap();
                            assert_eq!(
                                f.incident_cells(p).len(),
                                f.wedge_count(class),
                                "family {f:?} point {p:?} class {class:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_of_a_matches_class_244() {
        // Brute-force closure of the affine reflection group on the seed
        // triangle's A vertex must equal the (even, even) class within a box.
        // Reflections across x = k, y = k, y = x + 2k, y = -x + 2k generate
        // the tiling symmetries used by the cells; walk images of (0,0) by
        // reflecting in all cell edges reachable within the box.
        let f = TriangleFamily::Right244;
        let bound = 6_i64;
        let mut frontier = vec![(0_i64, 0_i64)];
        let mut seen: HashSet<ChartPoint> = frontier.iter().cloned().collect();
        // Move between A-images by reflecting across the edges of incident
        // cells: the reflection of an A-image across any incident cell edge
        // line is again an A-image (the group takes cells to cells).
        while let Some(p) = frontier.pop() {
            for c in f.incident_cells(p) {
                let vs = f.cell_vertices(c);
                for k in 0..3 {
                    let (a, b) = (vs[k], vs[(k + 1) % 3]);
                    // reflect p across line ab (integer arithmetic: the edge
                    // lines here are axis-parallel or diagonal)
                    let d = (b.0 - a.0, b.1 - a.1);
                    let q = if d.0 == 0 {
                        (2 * a.0 - p.0, p.1)
                    } else if d.1 == 0 {
                        (p.0, 2 * a.1 - p.1)
                    } else if d.0 == d.1 {
                        // line y = x + c, c = a.1 - a.0
                        let c0 = a.1 - a.0;
                        (p.1 - c0, p.0 + c0)
                    } else {
                        // line y = -x + c
                        let c0 = a.1 + a.0;
                        (c0 - p.1, c0 - p.0)
                    };
                    if q.0.abs() <= bound && q.1.abs() <= bound && seen.insert(q) {
                        frontier.push(q);
                    }
                }
            }
        }
        for x in -bound..=bound {
            for y in -bound..=bound {
                let expect = x.rem_euclid(2) == 0 && y.rem_euclid(2) == 0;
                assert_eq!(
                    seen.contains(&(x, y)),
                    expect,
                    "A-orbit mismatch at ({x},{y})"
                );
            }
        }
    }

    #[test]
    fn cells_tile_without_overlap_236() {
        // the 12 cells of one rhombus have disjoint interiors and their
        // chart areas sum to the rhombus area
        let f = TriangleFamily::Half236;
        let mut total = 0_i64;
        for o in 0..12 {
            let v = f.cell_vertices(CellId::new(0, 0, o));
            let area2 =
                (v[1].0 - v[0].0) * (v[2].1 - v[0].1) - (v[1].1 - v[0].1) * (v[2].0 - v[0].0);
            assert!(area2 > 0, "cell {o} not ccw");
            total += area2;
        }
        // rhombus spanned by (4,0) and (2,6): cross = 24, x2 = 48
        assert_eq!(total, 48);
    }
}
