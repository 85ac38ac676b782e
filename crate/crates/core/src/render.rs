//! SVG figure emission: polygons with marked points, traced trajectories,
//! the unfolding star of a lemma triangle, and tiled rooms.

use std::fmt::Write as _;

use crate::flow::Trajectory;
use crate::geom::Point2;
use crate::polygon::Polygon;
use crate::tokarsky::sampling::lemma_triangle;
use crate::tokarsky::TiledPolygon;

#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub stroke_width: f64,
    pub point_radius: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style { stroke_width: 0.02, point_radius: 0.06 }
    }
}

struct Canvas {
    body: String,
    min: [f64; 2],
    max: [f64; 2],
}

impl Canvas {
    fn new() -> Self {
        Canvas {
            body: String::new(),
            min: [f64::INFINITY; 2],
            max: [f64::NEG_INFINITY; 2],
        }
    }

    fn see(&mut self, p: [f64; 2]) {
        for i in 0..2 {
            self.min[i] = self.min[i].min(p[i]);
            self.max[i] = self.max[i].max(p[i]);
        }
    }

    fn polyline(&mut self, pts: &[[f64; 2]], closed: bool, stroke: &str, width: f64, dashed: bool, fill: &str) {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            self.see(*p);
            let _ = write!(d, "{}{:.4},{:.4} ", if i == 0 { "M" } else { "L" }, p[0], -p[1]);
        }
        if closed {
            d.push('Z');
        }
        let dash = if dashed { " stroke-dasharray=\"0.12,0.08\"" } else { "" };
        let _ = writeln!(
            self.body,
            "  <path d=\"{}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{:.4}\"{} stroke-linejoin=\"round\"/>",
            d.trim_end(),
            fill,
            stroke,
            width,
            dash
        );
    }

    fn circle(&mut self, p: [f64; 2], r: f64, fill: &str) {
        self.see([p[0] - r, p[1] - r]);
        self.see([p[0] + r, p[1] + r]);
        let _ = writeln!(
            self.body,
            "  <circle cx=\"{:.4}\" cy=\"{:.4}\" r=\"{:.4}\" fill=\"{}\"/>",
            p[0], -p[1], r, fill
        );
    }

    fn finish(self) -> String {
        let pad = 0.3;
        let (w, h) = (
            (self.max[0] - self.min[0] + 2.0 * pad).max(1e-3),
            (self.max[1] - self.min[1] + 2.0 * pad).max(1e-3),
        );
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.4} {:.4} {:.4} {:.4}\">\n{}</svg>\n",
            self.min[0] - pad,
            -(self.max[1] + pad),
            w,
            h,
            self.body
        )
    }
}

fn marked_points(canvas: &mut Canvas, marked: &[(String, Point2<f64>)], style: &Style) {
    for (_, p) in marked {
        canvas.circle(p.to_f64(), style.point_radius, "#c22");
    }
}

/// Polygon outline plus marked points.
pub fn render_polygon(
    polygon: &Polygon<f64>,
    marked: &[(String, Point2<f64>)],
    style: &Style,
) -> String {
    let mut canvas = Canvas::new();
    let pts: Vec<[f64; 2]> = polygon.vertices().iter().map(|p| p.to_f64()).collect();
    canvas.polyline(&pts, true, "#222", style.stroke_width, false, "#f4f2ec");
    marked_points(&mut canvas, marked, style);
    canvas.finish()
}

/// Polygon with a traced trajectory drawn over it.
pub fn render_trajectory(
    polygon: &Polygon<f64>,
    traj: &Trajectory<f64>,
    marked: &[(String, Point2<f64>)],
    style: &Style,
) -> String {
    let mut canvas = Canvas::new();
    let pts: Vec<[f64; 2]> = polygon.vertices().iter().map(|p| p.to_f64()).collect();
    canvas.polyline(&pts, true, "#222", style.stroke_width, false, "#f4f2ec");
    let mut path: Vec<[f64; 2]> = vec![traj.start.to_f64()];
    path.extend(traj.bounces.iter().map(|b| b.point.to_f64()));
    path.push(traj.end.to_f64());
    canvas.polyline(&path, false, "#36c", style.stroke_width * 0.8, false, "none");
    canvas.circle(traj.start.to_f64(), style.point_radius * 0.8, "#36c");
    marked_points(&mut canvas, marked, style);
    canvas.finish()
}

/// The 2n copies of a (pi/n, m pi/n) triangle unfolded about its acute
/// vertex at the origin, with a short dashed geodesic segment through the
/// removable singularity.
pub fn render_unfolding_star(n: i64, m: i64, style: &Style) -> String {
    let (q, _) = lemma_triangle(n, m);
    let b_len = 1.0_f64;
    let c_len = {
        let c = q.vertices()[2].to_f64();
        c[0].hypot(c[1])
    };
    let mut canvas = Canvas::new();
    let wedge = std::f64::consts::PI / n as f64;
    for k in 0..(2 * n) {
        let a0 = k as f64 * wedge;
        let a1 = (k + 1) as f64 * wedge;
        let (r0, r1) = if k % 2 == 0 { (b_len, c_len) } else { (c_len, b_len) };
        let p0 = [r0 * a0.cos(), r0 * a0.sin()];
        let p1 = [r1 * a1.cos(), r1 * a1.sin()];
        canvas.polyline(
            &[[0.0, 0.0], p0, p1],
            true,
            "#555",
            style.stroke_width * 0.7,
            false,
            "#f8f6f0",
        );
    }
    // dashed geodesic through the origin, interior to the first wedge pair
    let dir = wedge * 0.37;
    let reach = 0.8 * b_len.min(c_len);
    let g = [
        [-reach * dir.cos(), -reach * dir.sin()],
        [reach * dir.cos(), reach * dir.sin()],
    ];
    canvas.polyline(&g, false, "#c22", style.stroke_width, true, "none");
    canvas.circle([0.0, 0.0], style.point_radius * 0.6, "#222");
    canvas.finish()
}

/// A tiled room: cells in light strokes, the merged boundary in heavy
/// strokes, marked pair in red.
pub fn render_tiling(room: &TiledPolygon, pair: &[Point2<f64>], style: &Style) -> String {
    let mut canvas = Canvas::new();
    for &cell in &room.cells {
        let tri = room.family.cell_vertices(cell);
        let pts: Vec<[f64; 2]> =
            tri.iter().map(|&p| room.family.to_plane(p).to_f64()).collect();
        canvas.polyline(&pts, true, "#bbb", style.stroke_width * 0.4, false, "#f8f6f0");
    }
    let pts: Vec<[f64; 2]> = room.polygon.vertices().iter().map(|p| p.to_f64()).collect();
    canvas.polyline(&pts, true, "#222", style.stroke_width, false, "none");
    for p in pair {
        canvas.circle(p.to_f64(), style.point_radius, "#c22");
    }
    canvas.finish()
}

/// Minimal well-formedness check used by tests and the CLI: XML prolog,
/// a single svg root, and every emitted element self-closed.
pub fn looks_well_formed(svg: &str) -> bool {
    let elements = svg.matches("<path").count() + svg.matches("<circle").count();
    svg.starts_with("<?xml")
        && svg.matches("<svg").count() == 1
        && svg.matches("</svg>").count() == 1
        && svg.matches("/>").count() == elements
}
