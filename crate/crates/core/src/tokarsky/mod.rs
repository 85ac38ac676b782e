//! Construction and certification of non-illuminating point pairs in
//! polygons tiled by reflections of a (pi/n, m pi/n) triangle, exact
//! verification of the triangle's no-return property, and a bounded search
//! for minimal-edge examples.

pub mod builtin;
pub mod cert;
pub mod room;
pub mod sampling;
pub mod search;
pub mod tiling;

pub use cert::{
    certify, lemma_hypotheses, snap_chart_point, verify_no_return_exact,
    CertificateChecks, CoxeterTriangle, NoReturnReport, NonIlluminationCertificate,
};
pub use room::{compose_polygon, recognize_cells, PointPosition, RoomError, TiledPolygon};
pub use sampling::{no_return_sampling, NoReturnSamplingReport};
pub use search::{search_min_edges, SearchOutcome};
pub use tiling::{CellId, ChartPoint, TriangleFamily, VertexClass};
