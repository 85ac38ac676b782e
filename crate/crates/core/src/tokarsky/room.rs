//! Composing a finite set of tiling cells into a polygon: boundary
//! extraction, collinear merging, and classification of every tiling vertex
//! the closed region contains.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::tiling::{cell_edges, CellId, ChartPoint, TriangleFamily, VertexClass};
use crate::geom::Point2;
use crate::polygon::{Polygon, PolygonError};

#[derive(Debug, Error, PartialEq)]
pub enum RoomError {
    #[error("empty cell set")]
    Empty,
    #[error("cells do not form a connected interior")]
    DisconnectedInterior,
    #[error("boundary pinches at chart point ({0}, {1})")]
    NonSimpleBoundary(i64, i64),
    #[error("cell union has {0} boundary loops (holes are not allowed)")]
    HoleDetected(usize),
    #[error("boundary fails polygon validation: {0}")]
    Degenerate(PolygonError),
}

/// Where a tiling vertex sits relative to the composed polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointPosition {
    Interior,
    /// A corner of the merged boundary polygon.
    BoundaryVertex,
    /// On the boundary, with the two incident boundary edges collinear
    /// (the point is swallowed by collinear merging).
    BoundaryNonVertex,
}

#[derive(Clone, Debug)]
pub struct TiledVertex {
    pub chart: ChartPoint,
    pub class: VertexClass,
    pub position: PointPosition,
}

/// A polygon realized as a union of tiling cells.
#[derive(Clone, Debug)]
pub struct TiledPolygon {
    pub family: TriangleFamily,
    pub cells: Vec<CellId>,
    /// Every tiling vertex on the boundary, in ccw order (no merging).
    pub boundary_loop: Vec<ChartPoint>,
    /// Merged polygon corners (collinear runs collapsed), ccw.
    pub corners: Vec<ChartPoint>,
    /// The merged boundary as a validated float polygon.
    pub polygon: Polygon<f64>,
    /// Classification of every tiling vertex contained in the closed region.
    pub vertices: Vec<TiledVertex>,
}

impl TiledPolygon {
    pub fn edge_count(&self) -> usize {
        self.corners.len()
    }

    pub fn a_images(&self) -> impl Iterator<Item = &TiledVertex> {
        self.vertices.iter().filter(|v| v.class == VertexClass::A)
    }

    pub fn vertex_at(&self, p: ChartPoint) -> Option<&TiledVertex> {
        self.vertices.iter().find(|v| v.chart == p)
    }

    pub fn to_plane(&self, p: ChartPoint) -> Point2<f64> {
        self.family.to_plane(p)
    }
}

fn chart_cross(a: ChartPoint, b: ChartPoint, c: ChartPoint) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Build the polygon from a cell set.
pub fn compose_polygon(
    family: TriangleFamily,
    cells: &[CellId],
) -> Result<TiledPolygon, RoomError> {
    let mut cells: Vec<CellId> = cells.to_vec();
    cells.sort();
    cells.dedup();
    if cells.is_empty() {
        return Err(RoomError::Empty);
    }

    // Edge census: boundary edges appear once, interior edges twice.
    type Edge = (ChartPoint, ChartPoint);
    let mut census: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (idx, &c) in cells.iter().enumerate() {
        for e in cell_edges(family, c) {
            census.entry(e).or_default().push(idx);
        }
    }

    // Connectivity over shared edges.
    let mut dsu: Vec<usize> = (0..cells.len()).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let r = find(dsu, dsu[x]);
            dsu[x] = r;
        }
        dsu[x]
    }
    for owners in census.values() {
        for w in owners.windows(2) {
            let (a, b) = (find(&mut dsu, w[0]), find(&mut dsu, w[1]));
            if a != b {
                dsu[a] = b;
            }
        }
    }
    let root = find(&mut dsu, 0);
    for i in 1..cells.len() {
        if find(&mut dsu, i) != root {
            return Err(RoomError::DisconnectedInterior);
        }
    }

    // Boundary edges and per-node degree.
    let mut node_edges: HashMap<ChartPoint, Vec<ChartPoint>> = HashMap::new();
    let mut boundary_edges: HashSet<Edge> = HashSet::new();
    for (e, owners) in &census {
        if owners.len() == 1 {
            boundary_edges.insert(*e);
            node_edges.entry(e.0).or_default().push(e.1);
            node_edges.entry(e.1).or_default().push(e.0);
        }
    }
    for (p, nbrs) in &node_edges {
        if nbrs.len() != 2 {
            return Err(RoomError::NonSimpleBoundary(p.0, p.1));
        }
    }

    // Walk the loop(s).
    let start = *node_edges.keys().min().unwrap();
    let mut boundary_loop = vec![start];
    let mut prev = start;
    let mut cur = node_edges[&start][0];
    while cur != start {
        boundary_loop.push(cur);
        let nbrs = &node_edges[&cur];
        let next = if nbrs[0] == prev { nbrs[1] } else { nbrs[0] };
        prev = cur;
        cur = next;
    }
    if boundary_loop.len() != node_edges.len() {
        let loops = 1 + (node_edges.len() - boundary_loop.len()).div_ceil(3);
        return Err(RoomError::HoleDetected(loops));
    }

    // Orient ccw (chart shoelace; the embedding has positive determinant).
    let area2: i64 = boundary_loop
        .iter()
        .zip(boundary_loop.iter().cycle().skip(1))
        .map(|(a, b)| a.0 * b.1 - b.0 * a.1)
        .take(boundary_loop.len())
        .sum();
    if area2 < 0 {
        boundary_loop.reverse();
    }

    // Merge collinear runs.
    let n = boundary_loop.len();
    let mut corners = Vec::new();
    for i in 0..n {
        let a = boundary_loop[(i + n - 1) % n];
        let b = boundary_loop[i];
        let c = boundary_loop[(i + 1) % n];
        if chart_cross(a, b, c) != 0 {
            corners.push(b);
        }
    }

    let polygon = Polygon::validate(
        corners.iter().map(|&p| family.to_plane(p)).collect::<Vec<_>>(),
    )
    .map_err(RoomError::Degenerate)?;

    // Classify every tiling vertex of the closed region.
    let cell_set: HashSet<CellId> = cells.iter().copied().collect();
    let mut all_vertices: Vec<ChartPoint> = cells
        .iter()
        .flat_map(|&c| family.cell_vertices(c))
        .collect();
    all_vertices.sort();
    all_vertices.dedup();
    let corner_set: HashSet<ChartPoint> = corners.iter().copied().collect();
    let boundary_set: HashSet<ChartPoint> = boundary_loop.iter().copied().collect();
    let vertices = all_vertices
        .into_iter()
        .map(|p| {
            let class = family
                .vertex_class(p)
                .expect("cell vertices are tiling vertices");
            let position = if corner_set.contains(&p) {
                PointPosition::BoundaryVertex
            } else if boundary_set.contains(&p) {
                PointPosition::BoundaryNonVertex
            } else {
                debug_assert!(
                    family.incident_cells(p).iter().all(|c| cell_set.contains(c)),
                    "non-boundary cell vertex must be interior"
                );
                PointPosition::Interior
            };
            TiledVertex { chart: p, class, position }
        })
        .collect();

    Ok(TiledPolygon { family, cells, boundary_loop, corners, polygon, vertices })
}

/// Recover the cell set of a polygon already given in chart coordinates
/// (integer vertices for (2,4,4)). Scans the bounding box and keeps the
/// cells whose centroid lies inside; the result is verified by recomposing.
pub fn recognize_cells(
    family: TriangleFamily,
    polygon: &Polygon<f64>,
) -> Option<Vec<CellId>> {
    if family != TriangleFamily::Right244 {
        return None;
    }
    let vs = polygon.vertices();
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
    for v in vs {
        let x = v.x.round();
        let y = v.y.round();
        if (v.x - x).abs() > 1e-9 || (v.y - y).abs() > 1e-9 {
            return None;
        }
        lo_x = lo_x.min(x as i64);
        lo_y = lo_y.min(y as i64);
        hi_x = hi_x.max(x as i64);
        hi_y = hi_y.max(y as i64);
    }
    let mut cells = Vec::new();
    for i in lo_x..hi_x {
        for j in lo_y..hi_y {
            for o in 0..2 {
                let c = CellId::new(i, j, o);
                let tri = family.cell_vertices(c);
                let cx = (tri[0].0 + tri[1].0 + tri[2].0) as f64 / 3.0;
                let cy = (tri[0].1 + tri[1].1 + tri[2].1) as f64 / 3.0;
                if polygon.contains(&Point2::new(cx, cy)) {
                    cells.push(c);
                }
            }
        }
    }
    // verify: recomposed boundary must match the input polygon exactly
    let room = compose_polygon(family, &cells).ok()?;
    if room.polygon.len() != polygon.len() {
        return None;
    }
    let a: Vec<[f64; 2]> = room.polygon.vertices().iter().map(|p| p.to_f64()).collect();
    let b: Vec<[f64; 2]> = polygon.vertices().iter().map(|p| p.to_f64()).collect();
    // match up to cyclic rotation
    let k = a.len();
    'outer: for shift in 0..k {
        for i in 0..k {
            let (p, q) = (a[(i + shift) % k], b[i]);
            if (p[0] - q[0]).abs() > 1e-9 || (p[1] - q[1]).abs() > 1e-9 {
                continue 'outer;
            }
        }
        return Some(cells);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_cells_make_unit_square() {
        let f = TriangleFamily::Right244;
        let room =
            compose_polygon(f, &[CellId::new(0, 0, 0), CellId::new(0, 0, 1)]).unwrap();
        assert_eq!(room.edge_count(), 4);
        // The two opposite corners carry the acute-vertex images (one from
        // each acute orbit), classified as polygon vertices.
        let v00 = room.vertex_at((0, 0)).unwrap();
        assert_eq!(v00.class, VertexClass::A);
        assert_eq!(v00.position, PointPosition::BoundaryVertex);
        let v11 = room.vertex_at((1, 1)).unwrap();
        assert_eq!(v11.class, VertexClass::C);
        assert_eq!(v11.position, PointPosition::BoundaryVertex);
    }

    #[test]
    fn rectangle_with_interior_vertex() {
        // [0,2]x[0,1]: four cells, (1,0)/(1,1) are straight-through boundary
        // points and there are no interior tiling vertices.
        let f = TriangleFamily::Right244;
        let cells = vec![
            CellId::new(0, 0, 0),
            CellId::new(0, 0, 1),
            CellId::new(1, 0, 0),
            CellId::new(1, 0, 1),
        ];
        let room = compose_polygon(f, &cells).unwrap();
        assert_eq!(room.edge_count(), 4);
        let v10 = room.vertex_at((1, 0)).unwrap();
        assert_eq!(v10.position, PointPosition::BoundaryNonVertex);
        assert!(room.vertices.iter().all(|v| v.position != PointPosition::Interior));
    }

    #[test]
    fn disconnected_cells_rejected() {
        let f = TriangleFamily::Right244;
        let e = compose_polygon(f, &[CellId::new(0, 0, 0), CellId::new(5, 5, 0)])
            .unwrap_err();
        assert_eq!(e, RoomError::DisconnectedInterior);
    }

    #[test]
    fn corner_touch_is_a_pinch() {
        let f = TriangleFamily::Right244;
        // two triangles sharing only the vertex (1,1)
        let e = compose_polygon(f, &[CellId::new(0, 0, 0), CellId::new(1, 1, 0)])
            .unwrap_err();
        assert!(matches!(
            e,
            RoomError::NonSimpleBoundary(..) | RoomError::DisconnectedInterior
        ));
    }

    #[test]
    fn ring_of_cells_has_hole() {
        // 3x3 block of squares minus the center square = ring with a hole
        let f = TriangleFamily::Right244;
        let mut cells = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i == 1 && j == 1 {
                    continue;
                }
                cells.push(CellId::new(i, j, 0));
                cells.push(CellId::new(i, j, 1));
            }
        }
        let e = compose_polygon(f, &cells).unwrap_err();
        assert!(matches!(e, RoomError::HoleDetected(_)));
    }

    #[test]
    fn full_block_interior_vertex() {
        // 2x2 block: (1,1) is an interior tiling vertex
        let f = TriangleFamily::Right244;
        let mut cells = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                cells.push(CellId::new(i, j, 0));
                cells.push(CellId::new(i, j, 1));
            }
        }
        let room = compose_polygon(f, &cells).unwrap();
        assert_eq!(room.vertex_at((1, 1)).unwrap().position, PointPosition::Interior);
        assert_eq!(room.edge_count(), 4);
    }

    #[test]
    fn compose_236_hexagon() {
        // all 6 cells of one up-triangle form the triangle itself
        let f = TriangleFamily::Half236;
        let cells: Vec<_> = (0..6).map(|o| CellId::new(0, 0, o)).collect();
        let room = compose_polygon(f, &cells).unwrap();
        assert_eq!(room.edge_count(), 3);
        // center is interior, midpoints are straight-through boundary points
        assert_eq!(room.vertex_at((2, 2)).unwrap().position, PointPosition::Interior);
        assert_eq!(
            room.vertex_at((2, 0)).unwrap().position,
            PointPosition::BoundaryNonVertex
        );
    }

    #[test]
    fn recognize_cells_round_trip() {
        let f = TriangleFamily::Right244;
        let cells = vec![
            CellId::new(0, 0, 0),
            CellId::new(0, 0, 1),
            CellId::new(1, 0, 0),
            CellId::new(1, 0, 1),
        ];
        let room = compose_polygon(f, &cells).unwrap();
        let rec = recognize_cells(f, &room.polygon).unwrap();
        assert_eq!(rec, room.cells);
    }
}
