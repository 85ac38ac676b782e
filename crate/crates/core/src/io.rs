//! Line-oriented text formats: polygon files and tiling cell-set files.
//!
//! Polygon files:
//!   `v <x> <y>`        vertex, in boundary order
//!   `a <i> <p> <q>`    assert vertex i has interior angle p*pi/q
//!   `p <name> <x> <y>` marked point
//!   `#` comment lines and blank lines are ignored
//!
//! Coordinates are decimal literals or exact rationals `p/q`; rational
//! literals are preserved bit-exactly by the writer, which is what lets the
//! exact backend round-trip files.
//!
//! Cell files: `cell <i> <j> <orientation>` per cell, with an optional
//! `family <244|236>` line (default 244) and `#` comments.

use std::fmt::Write as _;

use num_rational::BigRational;
use thiserror::Error;

use crate::geom::{Point2, Scalar};
use crate::polygon::{Polygon, PolygonError, DEFAULT_MAX_DEN};
use crate::tokarsky::{CellId, TriangleFamily};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("line {0}: {1}")]
    Syntax(usize, String),
    #[error("polygon is invalid: {0}")]
    Polygon(#[from] PolygonError),
    #[error("asserted angle at vertex {0} ({1}pi/{2}) does not match the geometry")]
    AngleMismatch(usize, i64, i64),
    #[error("marked point {0:?} is not inside the polygon")]
    MarkedOutside(String),
}

/// Parsed contents of a polygon file, before validation.
#[derive(Clone, Debug)]
pub struct PolygonFile<S: Scalar> {
    pub vertices: Vec<Point2<S>>,
    pub asserted_angles: Vec<(usize, i64, i64)>,
    pub marked: Vec<(String, Point2<S>)>,
}

/// True when every coordinate literal in the text is an integer or `p/q`
/// rational, so the exact backend can represent the file bit-exactly.
pub fn has_exact_literals(text: &str) -> bool {
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        let mut tok = line.split_whitespace();
        let coords: Vec<&str> = match tok.next() {
            Some("v") => tok.collect(),
            Some("p") => tok.skip(1).collect(),
            _ => continue,
        };
        for c in coords {
            if c.contains('.') || c.contains('e') || c.contains('E') {
                return false;
            }
        }
    }
    true
}

fn parse_scalar<S: Scalar>(tok: &str, lineno: usize) -> Result<S, FileError> {
    if let Some((num, den)) = tok.split_once('/') {
        let n: i64 = num
            .parse()
            .map_err(|_| FileError::Syntax(lineno, format!("bad rational '{tok}'")))?;
        let d: i64 = den
            .parse()
            .map_err(|_| FileError::Syntax(lineno, format!("bad rational '{tok}'")))?;
        if d == 0 {
            return Err(FileError::Syntax(lineno, "zero denominator".into()));
        }
        Ok(S::from_ratio(n, d))
    } else if let Ok(i) = tok.parse::<i64>() {
        Ok(S::from_i64(i))
    } else {
        let f: f64 = tok
            .parse()
            .map_err(|_| FileError::Syntax(lineno, format!("bad number '{tok}'")))?;
        Ok(S::from_f64(f))
    }
}

pub fn parse_polygon_file<S: Scalar>(text: &str) -> Result<PolygonFile<S>, FileError> {
    let mut out =
        PolygonFile { vertices: Vec::new(), asserted_angles: Vec::new(), marked: Vec::new() };
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("v") => {
                let x = parse_scalar::<S>(
                    tok.next()
                        .ok_or_else(|| FileError::Syntax(lineno, "v needs x y".into()))?,
                    lineno,
                )?;
                let y = parse_scalar::<S>(
                    tok.next()
                        .ok_or_else(|| FileError::Syntax(lineno, "v needs x y".into()))?,
                    lineno,
                )?;
                out.vertices.push(Point2::new(x, y));
            }
            Some("a") => {
                let vals: Vec<i64> = tok
                    .map(|t| {
                        t.parse().map_err(|_| {
                            FileError::Syntax(lineno, format!("bad integer '{t}'"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if vals.len() != 3 {
                    return Err(FileError::Syntax(lineno, "a needs i p q".into()));
                }
                out.asserted_angles.push((vals[0] as usize, vals[1], vals[2]));
            }
            Some("p") => {
                let name = tok
                    .next()
                    .ok_or_else(|| FileError::Syntax(lineno, "p needs name x y".into()))?
                    .to_string();
                let x = parse_scalar::<S>(
                    tok.next()
                        .ok_or_else(|| FileError::Syntax(lineno, "p needs name x y".into()))?,
                    lineno,
                )?;
                let y = parse_scalar::<S>(
                    tok.next()
                        .ok_or_else(|| FileError::Syntax(lineno, "p needs name x y".into()))?,
                    lineno,
                )?;
                out.marked.push((name, Point2::new(x, y)));
            }
            Some(other) => {
                return Err(FileError::Syntax(lineno, format!("unknown record '{other}'")));
            }
            None => {}
        }
    }
    Ok(out)
}

impl<S: Scalar> PolygonFile<S> {
    /// Validate the polygon and check every asserted angle and marked point.
    pub fn build(&self) -> Result<Polygon<S>, FileError> {
        let polygon = Polygon::validate(self.vertices.clone())?;
        for &(i, p, q) in &self.asserted_angles {
            if i >= polygon.len() || q <= 0 {
                return Err(FileError::AngleMismatch(i, p, q));
            }
            let want = p as f64 * std::f64::consts::PI / q as f64;
            if (polygon.interior_angle(i) - want).abs() > 1e-9 {
                return Err(FileError::AngleMismatch(i, p, q));
            }
        }
        for (name, pt) in &self.marked {
            if !polygon.contains(pt) {
                return Err(FileError::MarkedOutside(name.clone()));
            }
        }
        Ok(polygon)
    }

    pub fn marked_point(&self, name: &str) -> Option<&Point2<S>> {
        self.marked.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }
}

fn write_scalar_f64(buf: &mut String, v: f64) {
    if v == v.trunc() && v.abs() < 1e15 {
        let _ = write!(buf, "{}", v as i64);
    } else {
        let _ = write!(buf, "{v:.17}");
    }
}

/// Serialize a float polygon with marked points.
pub fn write_polygon_file_f64(
    polygon: &Polygon<f64>,
    marked: &[(String, Point2<f64>)],
) -> String {
    let mut buf = String::new();
    for v in polygon.vertices() {
        buf.push('v');
        buf.push(' ');
        write_scalar_f64(&mut buf, v.x);
        buf.push(' ');
        write_scalar_f64(&mut buf, v.y);
        buf.push('\n');
    }
    for (name, p) in marked {
        buf.push_str("p ");
        buf.push_str(name);
        buf.push(' ');
        write_scalar_f64(&mut buf, p.x);
        buf.push(' ');
        write_scalar_f64(&mut buf, p.y);
        buf.push('\n');
    }
    buf
}

/// Serialize an exact polygon bit-exactly (rational literals).
pub fn write_polygon_file_exact(
    polygon: &Polygon<BigRational>,
    marked: &[(String, Point2<BigRational>)],
) -> String {
    fn fmt(r: &BigRational) -> String {
        if r.is_integer() {
            r.numer().to_string()
        } else {
            format!("{}/{}", r.numer(), r.denom())
        }
    }
    let mut buf = String::new();
    for v in polygon.vertices() {
        buf.push_str(&format!("v {} {}\n", fmt(&v.x), fmt(&v.y)));
    }
    for (name, p) in marked {
        buf.push_str(&format!("p {} {} {}\n", name, fmt(&p.x), fmt(&p.y)));
    }
    buf
}

/// Parse a cell-set file.
pub fn parse_cells_file(text: &str) -> Result<(TriangleFamily, Vec<CellId>), FileError> {
    let mut family = TriangleFamily::Right244;
    let mut cells = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("family") => {
                family = match tok.next() {
                    Some("244") => TriangleFamily::Right244,
                    Some("236") => TriangleFamily::Half236,
                    other => {
                        return Err(FileError::Syntax(
                            lineno,
                            format!("unknown family {other:?}"),
                        ))
                    }
                };
            }
            Some("cell") => {
                let vals: Vec<i64> = tok
                    .map(|t| {
                        t.parse().map_err(|_| {
                            FileError::Syntax(lineno, format!("bad integer '{t}'"))
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if vals.len() != 3 {
                    return Err(FileError::Syntax(lineno, "cell needs i j o".into()));
                }
                cells.push(CellId::new(vals[0], vals[1], vals[2] as u8));
            }
            Some(other) => {
                return Err(FileError::Syntax(lineno, format!("unknown record '{other}'")));
            }
            None => {}
        }
    }
    Ok((family, cells))
}

pub fn write_cells_file(family: TriangleFamily, cells: &[CellId]) -> String {
    let mut buf = String::new();
    if family == TriangleFamily::Half236 {
        buf.push_str("family 236\n");
    }
    for c in cells {
        let _ = writeln!(buf, "cell {} {} {}", c.i, c.j, c.o);
    }
    buf
}

/// The 'a' assertion records for a rational polygon.
pub fn angle_assertions<S: Scalar>(polygon: &Polygon<S>) -> Option<Vec<(usize, i64, i64)>> {
    let w = polygon.rationality(DEFAULT_MAX_DEN)?;
    Some(w.angles.iter().enumerate().map(|(i, a)| (i, a.num(), a.den())).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str =
        "# unit square\nv 0 0\nv 1 0\nv 1 1\nv 0 1\na 0 1 2\np A 1/4 1/4\np B 3/4 3/4\n";

    #[test]
    fn parse_and_build_square() {
        let f: PolygonFile<f64> = parse_polygon_file(SQUARE).unwrap();
        let q = f.build().unwrap();
        assert_eq!(q.len(), 4);
        assert_eq!(f.marked.len(), 2);
        assert!((f.marked_point("A").unwrap().x - 0.25).abs() < 1e-15);
    }

    #[test]
    fn angle_assertion_mismatch_fails() {
        let text = "v 0 0\nv 1 0\nv 1 1\nv 0 1\na 0 1 3\n";
        let f: PolygonFile<f64> = parse_polygon_file(text).unwrap();
        assert!(matches!(f.build(), Err(FileError::AngleMismatch(0, 1, 3))));
    }

    #[test]
    fn exact_round_trip_is_bit_exact() {
        let f: PolygonFile<BigRational> = parse_polygon_file(SQUARE).unwrap();
        let q = f.build().unwrap();
        let text = write_polygon_file_exact(&q, &f.marked);
        let f2: PolygonFile<BigRational> = parse_polygon_file(&text).unwrap();
        let q2 = f2.build().unwrap();
        assert_eq!(q.vertices(), q2.vertices());
        assert_eq!(f.marked, f2.marked);
    }

    #[test]
    fn exact_literal_detection() {
        assert!(has_exact_literals(SQUARE));
        assert!(!has_exact_literals("v 0 0\nv 1.5 0\nv 1 1\n"));
    }

    #[test]
    fn cells_round_trip() {
        let cells = vec![CellId::new(0, 0, 0), CellId::new(-1, 2, 1)];
        let text = write_cells_file(TriangleFamily::Right244, &cells);
        let (fam, parsed) = parse_cells_file(&text).unwrap();
        assert_eq!(fam, TriangleFamily::Right244);
        assert_eq!(parsed, cells);
    }

    #[test]
    fn marked_point_outside_fails() {
        let text = "v 0 0\nv 1 0\nv 1 1\nv 0 1\np X 2 2\n";
        let f: PolygonFile<f64> = parse_polygon_file(text).unwrap();
        assert!(matches!(f.build(), Err(FileError::MarkedOutside(_))));
    }
}
