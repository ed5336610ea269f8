//! Convex polyhedra in both representations, stored as homogenized cones.
//!
//! `P` is kept as `K = cl{(s x, s) : x in P, s >= 0}` in dimension `n + 1`, so
//! every operation reduces to [`PolyhedralCone`] calculus.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::rational::Rational;
use crate::{Halfspace, Hyperplane, PolyhedralCone, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    hom: PolyhedralCone,
}

fn lift(v: &Vector, s: Rational) -> Vector {
    v.concat(&[s])
}

fn nonneg_s(dim: usize) -> Vector {
    let mut e = Vector::zeros(dim + 1);
    e[dim] = -Rational::one();
    e
}

impl Polyhedron {
    /// `{x : <a, x> <= b for every halfspace, <c, x> = d for every hyperplane}`.
    pub fn from_constraints(dim: usize, halfspaces: &[Halfspace], hyperplanes: &[Hyperplane]) -> Result<Self> {
        let mut ineqs = vec![nonneg_s(dim)];
        for h in halfspaces {
            check_dim(dim, h.dim())?;
            ineqs.push(lift(&h.normal, -h.offset.clone()));
        }
        let mut eqs = Vec::new();
        for h in hyperplanes {
            check_dim(dim, h.normal.dim())?;
            eqs.push(lift(&h.normal, -h.offset.clone()));
        }
        let hom = PolyhedralCone::from_constraints(dim + 1, &ineqs, &eqs)?;
        Ok(Polyhedron { dim, hom })
    }

    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        Self::from_constraints(dim, halfspaces, &[])
    }

    /// `co(points) + cone(rays) + span(lines)`; `points` must be nonempty.
    pub fn from_generators(dim: usize, points: &[Vector], rays: &[Vector], lines: &[Vector]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("a polyhedron needs at least one point".into()));
        }
        for v in points.iter().chain(rays).chain(lines) {
            check_dim(dim, v.dim())?;
        }
        let hrays: Vec<Vector> = points
            .iter()
            .map(|p| lift(p, Rational::one()))
            .chain(rays.iter().map(|r| lift(r, Rational::zero())))
            .collect();
        let hlines: Vec<Vector> = lines.iter().map(|l| lift(l, Rational::zero())).collect();
        let hom = PolyhedralCone::from_generators(dim + 1, &hrays, &hlines)?;
        Ok(Polyhedron { dim, hom })
    }

    pub fn from_points(points: &[Vector]) -> Result<Self> {
        let dim = points.first().ok_or_else(|| Error::Input("empty point list".into()))?.dim();
        Self::from_generators(dim, points, &[], &[])
    }

    pub fn point(p: &Vector) -> Self {
        Self::from_points(std::slice::from_ref(p)).expect("single point")
    }

    /// `{x : |x|_1 <= r}`.
    pub fn cross_polytope(dim: usize, r: &Rational) -> Self {
        let mut pts = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let e = Vector::unit(dim, i).scale(r);
            pts.push(-&e);
            pts.push(e);
        }
        Self::from_points(&pts).expect("consistent dimensions")
    }

    /// `{x : |x|_inf <= r}`.
    pub fn cube(dim: usize, r: &Rational) -> Self {
        let mut hs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            hs.push(Halfspace::new(Vector::unit(dim, i), r.clone()));
            hs.push(Halfspace::new(-Vector::unit(dim, i), r.clone()));
        }
        Self::from_halfspaces(dim, &hs).expect("consistent dimensions")
    }

    /// Convex cone `c` as a polyhedron.
    pub fn from_cone(c: &PolyhedralCone) -> Self {
        Self::from_generators(c.dim(), &[Vector::zeros(c.dim())], c.rays(), c.lineality()).expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn homogenization(&self) -> &PolyhedralCone {
        &self.hom
    }

    pub fn is_empty(&self) -> bool {
        self.hom.rays().iter().all(|r| r[self.dim].is_zero()) && self.hom.lineality().iter().all(|l| l[self.dim].is_zero())
    }

    pub fn contains(&self, x: &Vector) -> bool {
        self.hom.contains(&lift(x, Rational::one()))
    }

    pub fn contains_in_interior(&self, x: &Vector) -> bool {
        self.equations().is_empty() && self.facets().iter().all(|h| h.normal.dot(x) < h.offset)
    }

    pub fn is_bounded(&self) -> bool {
        self.hom.lineality().is_empty() && self.hom.rays().iter().all(|r| r[self.dim].is_positive())
    }

    /// Vertices (for pointed polyhedra) or minimal-face points otherwise.
    pub fn vertices(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = self
            .hom
            .rays()
            .iter()
            .filter(|r| r[self.dim].is_positive())
            .map(|r| r.truncate(self.dim).scale(&(Rational::one() / &r[self.dim])))
            .collect();
        if out.is_empty() && !self.hom.lineality().is_empty() {
            // Only lines reach s > 0: pick the lineality-space point with s = 1.
            if let Some(l) = self.hom.lineality().iter().find(|l| !l[self.dim].is_zero()) {
                out.push(l.truncate(self.dim).scale(&(Rational::one() / &l[self.dim])));
            }
        }
        out.sort();
        out
    }

    /// Recession rays.
    pub fn rays(&self) -> Vec<Vector> {
        self.hom.rays().iter().filter(|r| r[self.dim].is_zero()).map(|r| r.truncate(self.dim)).collect()
    }

    /// Lineality basis of the recession cone.
    pub fn lines(&self) -> Vec<Vector> {
        let sub = self.hom.lineality().iter().map(|l| l.truncate(self.dim)).filter(|l| !l.is_zero());
        crate::linalg::canonical_span(&sub.collect::<Vec<_>>(), self.dim)
    }

    /// Irredundant facets `<a, x> <= b`, omitting the trivial homogenizing one.
    pub fn facets(&self) -> Vec<Halfspace> {
        let trivial = nonneg_s(self.dim);
        self.hom
            .facets()
            .iter()
            .filter(|f| **f != trivial)
            .map(|f| Halfspace::new(f.truncate(self.dim), -f[self.dim].clone()))
            .collect()
    }

    /// Equations of the affine hull.
    pub fn equations(&self) -> Vec<Hyperplane> {
        self.hom
            .equalities()
            .iter()
            .map(|e| Hyperplane { normal: e.truncate(self.dim), offset: -e[self.dim].clone() })
            .collect()
    }

    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        self.hom.contains_cone(&other.hom)
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim(self.dim, other.dim)?;
        let (va, vb) = (self.vertices(), other.vertices());
        let mut pts = Vec::with_capacity(va.len() * vb.len());
        for a in &va {
            for b in &vb {
                pts.push(a + b);
            }
        }
        let rays: Vec<Vector> = self.rays().into_iter().chain(other.rays()).collect();
        let lines: Vec<Vector> = self.lines().into_iter().chain(other.lines()).collect();
        Polyhedron::from_generators(self.dim, &pts, &rays, &lines)
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        check_dim(self.dim, other.dim)?;
        Ok(Polyhedron { dim: self.dim, hom: self.hom.intersect(&other.hom)? })
    }

    /// `c * P` for `c >= 0`.
    pub fn scale(&self, c: &Rational) -> Polyhedron {
        assert!(!c.is_negative(), "scale factor must be nonnegative");
        let pts: Vec<Vector> = self.vertices().iter().map(|v| v.scale(c)).collect();
        let (rays, lines) = if c.is_zero() { (vec![], vec![]) } else { (self.rays(), self.lines()) };
        Polyhedron::from_generators(self.dim, &pts, &rays, &lines).expect("nonempty")
    }

    pub fn negated(&self) -> Polyhedron {
        let neg = |vs: Vec<Vector>| -> Vec<Vector> { vs.iter().map(|v| -v).collect() };
        Polyhedron::from_generators(self.dim, &neg(self.vertices()), &neg(self.rays()), &self.lines()).expect("nonempty")
    }

    /// `{y : <y, x> <= 1 for all x in P}`.
    pub fn polar(&self) -> Polyhedron {
        let n = self.dim;
        let mut ineqs = vec![nonneg_s(n)];
        ineqs.extend(self.vertices().iter().map(|v| lift(v, -Rational::one())));
        ineqs.extend(self.rays().iter().map(|r| lift(r, Rational::zero())));
        let eqs: Vec<Vector> = self.lines().iter().map(|l| lift(l, Rational::zero())).collect();
        let hom = PolyhedralCone::from_constraints(n + 1, &ineqs, &eqs).expect("consistent dimensions");
        Polyhedron { dim: n, hom }
    }

    /// `max <u, x>` over the polyhedron, `None` when unbounded.
    pub fn support(&self, u: &Vector) -> Option<Rational> {
        if self.rays().iter().any(|r| u.dot(r).is_positive()) || self.lines().iter().any(|l| !u.dot(l).is_zero()) {
            return None;
        }
        self.vertices().iter().map(|v| u.dot(v)).max()
    }

    /// Smallest squared Euclidean distance from the origin to a facet
    /// hyperplane, provided the origin is interior and some facet exists.
    pub fn inradius_squared_at_origin(&self) -> Option<Rational> {
        if !self.contains_in_interior(&Vector::zeros(self.dim)) {
            return None;
        }
        self.facets()
            .iter()
            .map(|h| &h.offset * &h.offset / h.normal.norm_squared())
            .min()
    }
}

/// Facets and affine-hull equations of `co(points)`.
pub fn convex_hull(points: &[Vector]) -> Result<(Vec<Halfspace>, Vec<Hyperplane>)> {
    let p = Polyhedron::from_points(points)?;
    Ok((p.facets(), p.equations()))
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_rep: Option<Vec<Halfspace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    equations: Option<Vec<Hyperplane>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vector>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rays: Option<Vec<Vector>>,
}

impl Serialize for Polyhedron {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let eqs = self.equations();
        let rays = self.rays();
        PolyDoc {
            dim: self.dim,
            h_rep: Some(self.facets()),
            equations: (!eqs.is_empty()).then_some(eqs),
            vertices: Some(self.vertices()),
            rays: (!rays.is_empty()).then_some(rays),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polyhedron {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = PolyDoc::deserialize(d)?;
        let p = if doc.h_rep.is_some() || doc.equations.is_some() {
            Polyhedron::from_constraints(
                doc.dim,
                doc.h_rep.as_deref().unwrap_or(&[]),
                doc.equations.as_deref().unwrap_or(&[]),
            )
        } else if let Some(v) = &doc.vertices {
            Polyhedron::from_generators(doc.dim, v, doc.rays.as_deref().unwrap_or(&[]), &[])
        } else {
            Err(Error::Input("polyhedron needs h_rep or vertices".into()))
        };
        p.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::vector;

    #[test]
    fn square_facets() {
        let (f, e) = convex_hull(&[vector![1, 1], vector![1, -1], vector![-1, 1], vector![-1, -1]]).unwrap();
        assert!(e.is_empty());
        let mut got: Vec<(Vector, Rational)> = f.into_iter().map(|h| (h.normal, h.offset)).collect();
        got.sort();
        assert_eq!(
            got,
            vec![
                (vector![-1, 0], int(1)),
                (vector![0, -1], int(1)),
                (vector![0, 1], int(1)),
                (vector![1, 0], int(1)),
            ]
        );
    }

    #[test]
    fn single_point_has_equations() {
        let (f, e) = convex_hull(&[vector![0, 0]]).unwrap();
        assert!(f.is_empty());
        assert_eq!(e.len(), 2);
        assert!(e.iter().all(|h| h.offset.is_zero()));
    }

    #[test]
    fn polar_of_square_is_cross_polytope() {
        let sq = Polyhedron::cube(2, &int(1));
        assert_eq!(sq.polar(), Polyhedron::cross_polytope(2, &int(1)));
        assert_eq!(sq.polar().polar(), sq);
    }

    #[test]
    fn polar_of_origin_is_everything() {
        let p = Polyhedron::point(&vector![0, 0]).polar();
        assert!(p.facets().is_empty() && p.equations().is_empty());
        assert!(p.contains(&vector![100, -7]));
    }

    #[test]
    fn sum_scale_intersect() {
        let sq = Polyhedron::cube(2, &int(1));
        assert_eq!(sq.minkowski_sum(&sq).unwrap(), sq.scale(&int(2)));
        let half = Polyhedron::from_halfspaces(2, &[Halfspace::new(vector![0, -1], int(0))]).unwrap();
        let cut = sq.intersect(&half).unwrap();
        assert_eq!(cut.vertices(), vec![vector![-1, 0], vector![-1, 1], vector![1, 0], vector![1, 1]]);
        assert_eq!(sq.inradius_squared_at_origin(), Some(int(1)));
        assert_eq!(Polyhedron::cross_polytope(2, &int(1)).inradius_squared_at_origin(), Some(ratio(1, 2)));
        assert!(!half.is_bounded());
        assert_eq!(half.support(&vector![1, 0]), None);
        assert_eq!(sq.support(&vector![1, 2]), Some(int(3)));
    }

    #[test]
    fn empty_polyhedron() {
        let p = Polyhedron::from_halfspaces(1, &[Halfspace::new(vector![1], int(-1)), Halfspace::new(vector![-1], int(0))]).unwrap();
        assert!(p.is_empty());
        assert!(p.vertices().is_empty());
    }
}
