//! The Katok-Zemliakov unfolding: close the edge reflections into a finite
//! dihedral group and glue |group| abstract copies of the polygon into a
//! translation surface.
//!
//! Copies carry no translation part (`v_gamma = 0`): the surface is the
//! combinatorial gluing complex, which is all the flat structure needs. A
//! planar layout is computed separately by the render module.

use std::collections::HashMap;

use thiserror::Error;

use crate::geom::{DihedralElement, Point2, RationalAngle, Scalar};
use crate::polygon::{Polygon, RationalityWitness};

#[derive(Debug, Error, PartialEq)]
pub enum UnfoldError {
    #[error("group closure exceeded {0} elements; polygon is not (detectably) rational")]
    NotRational(usize),
    #[error("point lies outside the polygon")]
    PointOutsidePolygon,
    #[error("element is not a member of the reflection group")]
    NotAGroupElement,
}

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

/// The finite group generated by the linear parts of the edge reflections.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    /// All elements, sorted canonically (rotations by angle, then reflections by axis).
    elements: Vec<DihedralElement>,
    generators: Vec<DihedralElement>,
    index: HashMap<DihedralElement, usize>,
}

impl ReflectionGroup {
    pub fn closure(
        generators: Vec<DihedralElement>,
        bound: usize,
    ) -> Result<Self, UnfoldError> {
        let mut elements = vec![DihedralElement::IDENTITY];
        let mut seen: HashMap<DihedralElement, usize> = HashMap::new();
        seen.insert(DihedralElement::IDENTITY, 0);
        let mut frontier = vec![DihedralElement::IDENTITY];
        while let Some(g) = frontier.pop() {
            for gen in &generators {
                let h = gen.compose(&g);
                if !seen.contains_key(&h) {
                    if elements.len() >= bound {
                        return Err(UnfoldError::NotRational(bound));
                    }
                    seen.insert(h, elements.len());
                    elements.push(h);
                    frontier.push(h);
                }
            }
        }
        elements.sort_by(|a, b| a.canonical_cmp(b));
        let index = elements.iter().enumerate().map(|(i, g)| (*g, i)).collect();
        Ok(ReflectionGroup { elements, generators, index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[DihedralElement] {
        &self.elements
    }

    pub fn generators(&self) -> &[DihedralElement] {
        &self.generators
    }

    pub fn contains(&self, g: &DihedralElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &DihedralElement) -> Option<usize> {
        self.index.get(g).copied()
    }
}

/// A point on the unfolded surface: a base point of Q plus the sheet it
/// lives on. Boundary points are stored on the canonical sheet of their
/// glue pair (the lexicographically smaller group element).
#[derive(Clone, Debug)]
pub struct SurfacePoint<S: Scalar> {
    pub base: Point2<S>,
    pub sheet: DihedralElement,
}

impl<S: Scalar> PartialEq for SurfacePoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.sheet == other.sheet && self.base == other.base
    }
}

/// One cone point of the surface: the cyclic orbit of corner wedges glued
/// around a lift of a polygon vertex.
#[derive(Clone, Debug)]
pub struct Singularity {
    /// Base vertex index in Q.
    pub vertex: usize,
    /// Sheets whose wedge at `vertex` belongs to this lift.
    pub wedges: Vec<DihedralElement>,
    /// Cone angle as a multiple of 2pi (exact integer).
    pub cone_multiple: i64,
    /// True iff the cone angle is exactly 2pi.
    pub removable: bool,
}

impl Singularity {
    pub fn cone_angle_radians(&self) -> f64 {
        self.cone_multiple as f64 * std::f64::consts::TAU
    }
}

/// The glued surface. Edge slots are pairs (sheet index, edge index).
#[derive(Clone, Debug)]
pub struct UnfoldedSurface<S: Scalar> {
    pub base: Polygon<S>,
    pub witness: RationalityWitness,
    pub group: ReflectionGroup,
    /// Gluing involution: `gluing[sheet][edge] = (sheet', edge)` (the edge
    /// index never changes; partners are two copies of the same base edge).
    gluing: Vec<Vec<usize>>,
    pub singularities: Vec<Singularity>,
    pub genus: i64,
}

/// Generate the reflection group of a rational polygon.
pub fn generate_group<S: Scalar>(
    polygon: &Polygon<S>,
    witness: &RationalityWitness,
    bound: usize,
) -> Result<ReflectionGroup, UnfoldError> {
    let gens: Vec<_> =
        (0..polygon.len()).map(|e| polygon.edge_reflection(witness, e)).collect();
    let mut dedup = Vec::new();
    for g in gens {
        if !dedup.contains(&g) {
            dedup.push(g);
        }
    }
    ReflectionGroup::closure(dedup, bound)
}

/// The symbolic linear part of the reflection across the image of base edge
/// `e` on sheet `gamma`: the reflection whose axis is `gamma` applied to the
/// edge direction.
pub fn glue_reflection(
    witness_angle: RationalAngle,
    gamma: &DihedralElement,
) -> DihedralElement {
    let axis = match gamma {
        DihedralElement::Rotation(a) => witness_angle.add(*a),
        DihedralElement::Reflection(phi) => phi.scale(2).sub(witness_angle),
    };
    DihedralElement::reflection(axis)
}

pub fn unfold<S: Scalar>(
    polygon: Polygon<S>,
    witness: RationalityWitness,
    bound: usize,
) -> Result<UnfoldedSurface<S>, UnfoldError> {
    let group = generate_group(&polygon, &witness, bound)?;
    let k = polygon.len();
    let n = group.order();

    // Edge direction angles relative to edge 0, reused for all sheets.
    let edge_angles: Vec<RationalAngle> =
        (0..k).map(|e| polygon.edge_reflection(&witness, e).angle()).collect();

    let mut gluing = vec![vec![usize::MAX; k]; n];
    for (si, gamma) in group.elements().iter().enumerate() {
        for e in 0..k {
            let tau = glue_reflection(edge_angles[e], gamma);
            let partner = tau.compose(gamma);
            let pi = group.index_of(&partner).expect("closure is closed");
            gluing[si][e] = pi;
        }
    }
    // involution sanity: fixed-point free pairing
    for (si, row) in gluing.iter().enumerate() {
        for (e, &pi) in row.iter().enumerate() {
            debug_assert_ne!(pi, si, "gluing must be fixed-point free");
            debug_assert_eq!(gluing[pi][e], si, "gluing must be an involution");
        }
    }

    // Vertex lifts: walk wedges around each base vertex. The wedge of sheet g
    // at vertex v is bounded by edges e_{v-1} and e_v; crossing edge e moves
    // to sheet glue(g, e) and stays at the same base vertex. Alternating the
    // two incident edges cycles through the wedges of one cone point.
    let mut singularities = Vec::new();
    for v in 0..k {
        let e_in = (v + k - 1) % k;
        let e_out = v;
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut wedges = Vec::new();
            let mut cur = start;
            let mut cross_out = true;
            loop {
                if !visited[cur] {
                    visited[cur] = true;
                    wedges.push(group.elements()[cur]);
                } else if cur == start && cross_out {
                    // closed the cycle
                }
                let e = if cross_out { e_out } else { e_in };
                cur = gluing[cur][e];
                cross_out = !cross_out;
                if cur == start && cross_out {
                    break;
                }
            }
            // cone angle = (#wedges) * interior angle(v) = 2 pi m
            let a = witness.angles[v];
            let m_num = wedges.len() as i64 * a.num();
            let m_den = 2 * a.den();
            debug_assert_eq!(m_num % m_den, 0, "cone angle must be a multiple of 2pi");
            let cone_multiple = m_num / m_den;
            singularities.push(Singularity {
                vertex: v,
                wedges,
                cone_multiple,
                removable: cone_multiple == 1,
            });
        }
    }

    // Euler characteristic of the glued complex.
    let v_count = singularities.len() as i64;
    let e_count = (n * k) as i64 / 2;
    let f_count = n as i64;
    let chi = v_count - e_count + f_count;
    debug_assert_eq!(chi % 2, 0);
    let genus = (2 - chi) / 2;

    // Gauss-Bonnet: sum (cone - 2pi) = 2pi (2g - 2), as integers:
    debug_assert_eq!(
        singularities.iter().map(|s| s.cone_multiple - 1).sum::<i64>(),
        2 * genus - 2
    );

    Ok(UnfoldedSurface { base: polygon, witness, group, gluing, singularities, genus })
}

impl<S: Scalar> UnfoldedSurface<S> {
    pub fn sheet_count(&self) -> usize {
        self.group.order()
    }

    pub fn glue_partner(&self, sheet: usize, edge: usize) -> usize {
        self.gluing[sheet][edge]
    }

    /// Total flat area: |group| copies of the base polygon.
    pub fn area(&self) -> S {
        let mut acc = S::zero();
        for _ in 0..self.group.order() {
            acc = acc + self.base.area();
        }
        acc
    }

    /// Which edge (if any) the point lies on; vertices report `Vertex`.
    pub fn classify_base_point(&self, p: &Point2<S>) -> BasePointClass {
        let k = self.base.len();
        for v in 0..k {
            if self.base.vertices()[v].dist2(p).is_zero_within_eps() {
                return BasePointClass::Vertex(v);
            }
        }
        for e in 0..k {
            let (a, b) = self.base.edge(e);
            if crate::geom::point_on_segment(p, a, b) {
                return BasePointClass::Edge(e);
            }
        }
        if self.base.contains(p) {
            BasePointClass::Interior
        } else {
            BasePointClass::Outside
        }
    }

    /// Canonical sheet for a base point on `edge`: the glue-pair partner with
    /// the lexicographically smaller canonical group element.
    fn canonical_sheet_on_edge(&self, sheet: usize, edge: usize) -> usize {
        let partner = self.gluing[sheet][edge];
        let a = self.group.elements()[sheet];
        let b = self.group.elements()[partner];
        if a.canonical_cmp(&b).is_le() {
            sheet
        } else {
            partner
        }
    }

    /// Lift a base point to the sheet of `gamma`.
    pub fn lift_point(
        &self,
        p: &Point2<S>,
        gamma: &DihedralElement,
    ) -> Result<SurfacePoint<S>, UnfoldError> {
        let sheet = self.group.index_of(gamma).ok_or(UnfoldError::NotAGroupElement)?;
        match self.classify_base_point(p) {
            BasePointClass::Outside => Err(UnfoldError::PointOutsidePolygon),
            BasePointClass::Edge(e) => {
                let c = self.canonical_sheet_on_edge(sheet, e);
                Ok(SurfacePoint { base: p.clone(), sheet: self.group.elements()[c] })
            }
            _ => Ok(SurfacePoint { base: p.clone(), sheet: *gamma }),
        }
    }

    /// The full fiber over a base point (distinct surface points).
    pub fn fiber(&self, p: &Point2<S>) -> Result<Vec<SurfacePoint<S>>, UnfoldError> {
        let mut out: Vec<SurfacePoint<S>> = Vec::new();
        for g in self.group.elements() {
            let sp = self.lift_point(p, g)?;
            if !out.iter().any(|q| q.sheet == sp.sheet) {
                out.push(sp);
            }
        }
        Ok(out)
    }

    /// The group action `gamma . (A, tau) = (A, gamma tau)`, re-canonicalized
    /// for boundary points.
    pub fn group_action(
        &self,
        gamma: &DihedralElement,
        x: &SurfacePoint<S>,
    ) -> Result<SurfacePoint<S>, UnfoldError> {
        if !self.group.contains(gamma) {
            return Err(UnfoldError::NotAGroupElement);
        }
        let new_sheet = gamma.compose(&x.sheet);
        self.lift_point(&x.base, &new_sheet)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasePointClass {
    Interior,
    Edge(usize),
    Vertex(usize),
    Outside,
}

/// The surface-level twist picked up by a geodesic crossing the removable
/// lift of a pi/n vertex: rotation by pi for even n, the reflection at axis
/// angle pi(n+1)/(2n) for odd n.
pub fn twist_through_removable(n: i64) -> DihedralElement {
    assert!(n >= 2);
    if n % 2 == 0 {
        DihedralElement::rot(1, 1)
    } else {
        DihedralElement::refl(n + 1, 2 * n)
    }
}
