//! Exact symbolic group elements and the planar coordinate kernel.

pub mod angle;
pub mod primitives;
pub mod scalar;

pub use angle::{DihedralElement, RationalAngle};
pub use primitives::{
    orient, point_in_polygon, point_on_segment, reflect_point_across_line,
    segments_properly_cross, Point2, Vec2,
};
pub use scalar::{Backend, Scalar, EPS_ANGLE, EPS_POINT, VERTEX_EPS_FACTOR};

/// Apply a dihedral element to an f64 point.
pub fn apply(g: &DihedralElement, p: &Point2<f64>) -> Point2<f64> {
    let [x, y] = g.apply_f64([p.x, p.y]);
    Point2::new(x, y)
}

/// Apply a dihedral element exactly. Only the quarter-turn family (all
/// matrix entries in {-1,0,1}) is exactly representable; other angles have
/// irrational matrix entries.
pub fn apply_exact<S: Scalar>(g: &DihedralElement, p: &Point2<S>) -> Option<Point2<S>> {
    let m = g.matrix_exact()?;
    Some(Point2::new(
        S::from_i64(m[0][0]) * p.x.clone() + S::from_i64(m[0][1]) * p.y.clone(),
        S::from_i64(m[1][0]) * p.x.clone() + S::from_i64(m[1][1]) * p.y.clone(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        // refl(0): (x, y) -> (x, -y)
        let r = apply(&DihedralElement::refl(0, 1), &Point2::new(0.3, 0.7));
        assert!((r.x - 0.3).abs() < 1e-15 && (r.y + 0.7).abs() < 1e-15);
        // rot(pi/2): (1, 0) -> (0, 1)
        let r = apply(&DihedralElement::rot(1, 2), &Point2::new(1.0, 0.0));
        assert!(r.x.abs() < 1e-15 && (r.y - 1.0).abs() < 1e-15);
        // refl(pi/4): (x, y) -> (y, x)
        let r = apply(&DihedralElement::refl(1, 4), &Point2::new(0.2, -0.9));
        assert!((r.x + 0.9).abs() < 1e-15 && (r.y - 0.2).abs() < 1e-15);
    }

    #[test]
    fn matrix_of_composition_is_product() {
        let a = DihedralElement::refl(3, 8);
        let b = DihedralElement::rot(5, 6);
        let ab = a.compose(&b);
        let ma = a.matrix_f64();
        let mb = b.matrix_f64();
        let mab = ab.matrix_f64();
        for i in 0..2 {
            for j in 0..2 {
                let prod = ma[i][0] * mb[0][j] + ma[i][1] * mb[1][j];
                assert!((prod - mab[i][j]).abs() < 8.0 * EPS_POINT);
            }
        }
    }
}
