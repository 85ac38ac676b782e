//! Cross-family room checks: the bundled rooms and a half-equilateral room
//! produced by the search, each validated by both the exact certificate and
//! the sampling referee.

use billiards_core::geom::Point2;
use billiards_core::illumination::{illuminate_search, SearchBudget};
use billiards_core::polygon::DEFAULT_MAX_DEN;
use billiards_core::tokarsky::builtin::{room22, room26};
use billiards_core::tokarsky::{certify, compose_polygon, CellId, TriangleFamily};
use billiards_core::unfolding::{unfold, UnfoldedSurface, DEFAULT_CLOSURE_BOUND};

fn surface(room: &billiards_core::tokarsky::TiledPolygon) -> UnfoldedSurface<f64> {
    let w = room.polygon.rationality(DEFAULT_MAX_DEN).unwrap();
    unfold(room.polygon.clone(), w, DEFAULT_CLOSURE_BOUND).unwrap()
}

fn centroid(f: TriangleFamily, c: CellId) -> Point2<f64> {
    let vs = f.cell_vertices(c);
    let pl: Vec<_> = vs.iter().map(|&v| f.to_plane(v)).collect();
    Point2::new(
        (pl[0].x + pl[1].x + pl[2].x) / 3.0,
        (pl[0].y + pl[1].y + pl[2].y) / 3.0,
    )
}

#[test]
fn room26_pair_is_dark_under_sampling() {
    let (room, (c1, c2)) = room26();
    let m = surface(&room);
    let a = room.to_plane(c1);
    let b = room.to_plane(c2);
    let budget = SearchBudget::new(40.0 * m.base.diameter_f64(), 20_000, 5);
    assert!(!illuminate_search(&m, &a, &b, &budget).connected());
    // control: interior cell centroids see each other
    let p = centroid(room.family, room.cells[0]);
    let q = centroid(room.family, *room.cells.last().unwrap());
    let control = SearchBudget::new(8.0 * m.base.diameter_f64(), 6_000, 6);
    assert!(illuminate_search(&m, &p, &q, &control).connected());
}

#[test]
fn half_equilateral_room_certifies_and_samples_dark() {
    // A 16-edge room in the (pi/6, pi/2, pi/3) tiling found by the repair
    // search; the marked pair folds to the pi/6 vertex class.
    let f = TriangleFamily::Half236;
    let cells: Vec<CellId> = [
        (-1, -1, 6),
        (-1, -1, 7),
        (-1, -1, 8),
        (-1, -1, 9),
        (0, -1, 4),
        (0, -1, 5),
        (0, -1, 6),
        (0, -1, 7),
        (0, -1, 10),
        (0, -1, 11),
        (1, -2, 10),
        (1, -2, 11),
        (1, -1, 0),
        (1, -1, 1),
        (1, -1, 3),
        (1, -1, 4),
    ]
    .iter()
    .map(|&(i, j, o)| CellId::new(i, j, o))
    .collect();
    let room = compose_polygon(f, &cells).unwrap();
    assert_eq!(room.edge_count(), 16);
    let pair = ((0, 0), (2, -6));
    let cert = certify(&room, pair.0, pair.1);
    assert!(cert.valid(), "failed: {:?}", cert.failed_checks());

    let m = surface(&room);
    assert_eq!(m.sheet_count(), 12);
    let a = room.to_plane(pair.0);
    let b = room.to_plane(pair.1);
    let budget = SearchBudget::new(30.0 * m.base.diameter_f64(), 10_000, 17);
    assert!(
        !illuminate_search(&m, &a, &b, &budget).connected(),
        "sampling connected a certified dark pair"
    );
    let c1 = centroid(f, CellId::new(0, -1, 4));
    let c2 = centroid(f, CellId::new(1, -1, 3));
    let control = SearchBudget::new(40.0, 6_000, 18);
    assert!(illuminate_search(&m, &c1, &c2, &control).connected());
}

#[test]
fn room22_exact_polygon_matches_data_file() {
    // the frozen .poly file and the composed cell set describe one polygon
    let (room, _) = room22();
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/room22.poly"
    ))
    .unwrap();
    let parsed: billiards_core::io::PolygonFile<f64> =
        billiards_core::io::parse_polygon_file(&text).unwrap();
    let q = parsed.build().unwrap();
    assert_eq!(q.len(), room.polygon.len());
    let recognized =
        billiards_core::tokarsky::recognize_cells(TriangleFamily::Right244, &q).unwrap();
    assert_eq!(recognized, room.cells);
}
