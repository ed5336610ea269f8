//! Polar sandwich checks and transversality radii of cone pairs.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::rational::{self, int, Rational};
use crate::{Halfspace, PolyhedralCone, Polyhedron, Vector};

/// `{y : <y, x> <= 0 for x in c}`.
pub fn polar(c: &PolyhedralCone) -> PolyhedralCone {
    c.polar()
}

pub fn minkowski_sum(c1: &PolyhedralCone, c2: &PolyhedralCone) -> Result<PolyhedralCone> {
    c1.minkowski_sum(c2)
}

pub fn intersect(c1: &PolyhedralCone, c2: &PolyhedralCone) -> Result<PolyhedralCone> {
    c1.intersect(c2)
}

/// One inclusion `lhs ⊆ rhs` between polyhedra, with a violating generator on failure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionVerdict {
    pub holds: bool,
    /// Vertex or recession direction of `lhs` outside `rhs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Vector>,
}

impl InclusionVerdict {
    fn check(lhs: &Polyhedron, rhs: &Polyhedron) -> Self {
        let points = lhs.vertices().into_iter().find(|v| !rhs.contains(v));
        let violation = points.or_else(|| {
            let rc = recession(rhs);
            lhs.rays()
                .into_iter()
                .chain(lhs.lines())
                .chain(lhs.lines().iter().map(|l| -l))
                .find(|r| !rc.contains(r))
        });
        debug_assert_eq!(violation.is_none(), rhs.contains_polyhedron(lhs));
        InclusionVerdict { holds: violation.is_none(), violation }
    }
}

fn recession(p: &Polyhedron) -> PolyhedralCone {
    PolyhedralCone::from_generators(p.dim(), &p.rays(), &p.lines()).expect("consistent dimensions")
}

/// The four inclusions
/// `(A+B)° ⊆ A°∩B° ⊆ 2(A+B)°` and `(A∩B)° ⊆ A°+B° ⊆ 2(A∩B)°`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub sum_polar_in_polar_intersection: InclusionVerdict,
    pub polar_intersection_in_twice_sum_polar: InclusionVerdict,
    pub intersection_polar_in_polar_sum: InclusionVerdict,
    pub polar_sum_in_twice_intersection_polar: InclusionVerdict,
}

impl SandwichReport {
    pub fn all_hold(&self) -> bool {
        self.sum_polar_in_polar_intersection.holds
            && self.polar_intersection_in_twice_sum_polar.holds
            && self.intersection_polar_in_polar_sum.holds
            && self.polar_sum_in_twice_intersection_polar.holds
    }
}

/// Checks both polar sandwiches for convex polyhedra containing the origin.
///
/// `A° + B°` is polyhedral and therefore already closed.
pub fn verify_polar_sandwich(a: &Polyhedron, b: &Polyhedron) -> Result<SandwichReport> {
    check_dim(a.dim(), b.dim())?;
    let origin = Vector::zeros(a.dim());
    if !a.contains(&origin) {
        return Err(Error::OriginMissing { which: "first" });
    }
    if !b.contains(&origin) {
        return Err(Error::OriginMissing { which: "second" });
    }
    let two = int(2);
    let (pa, pb) = (a.polar(), b.polar());
    let sum_polar = a.minkowski_sum(b)?.polar();
    let inter_polar = a.intersect(b)?.polar();
    let polar_inter = pa.intersect(&pb)?;
    let polar_sum = pa.minkowski_sum(&pb)?;
    Ok(SandwichReport {
        sum_polar_in_polar_intersection: InclusionVerdict::check(&sum_polar, &polar_inter),
        polar_intersection_in_twice_sum_polar: InclusionVerdict::check(&polar_inter, &sum_polar.scale(&two)),
        intersection_polar_in_polar_sum: InclusionVerdict::check(&inter_polar, &polar_sum),
        polar_sum_in_twice_intersection_polar: InclusionVerdict::check(&polar_sum, &inter_polar.scale(&two)),
    })
}

/// Certified bracket `rho_squared <= rho^2 <= rho_squared_outer`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusBracket {
    #[serde(with = "rational::serde_rational")]
    pub rho_squared: Rational,
    #[serde(with = "rational::serde_rational")]
    pub rho_squared_outer: Rational,
    pub rho_approx: f64,
    /// Facets of the inner difference polytope.
    pub difference_hull: Vec<Halfspace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RadiusOutcome {
    Radius(RadiusBracket),
    NotTransversal { witness: Halfspace },
}

impl RadiusOutcome {
    pub fn is_transversal(&self) -> bool {
        matches!(self, RadiusOutcome::Radius(_))
    }

    pub fn rho_squared(&self) -> Option<&Rational> {
        match self {
            RadiusOutcome::Radius(b) => Some(&b.rho_squared),
            RadiusOutcome::NotTransversal { .. } => None,
        }
    }
}

/// Largest `rho^2` with `rho B ⊆ d`, or a halfspace `{<a, x> <= 0}` containing `d`
/// when the origin is not interior. Ties among witnesses go to the
/// lexicographically smallest primitive normal.
pub fn origin_inradius(d: &Polyhedron) -> std::result::Result<Rational, Halfspace> {
    if let Some(r) = d.inradius_squared_at_origin() {
        return Ok(r);
    }
    if d.contains_in_interior(&Vector::zeros(d.dim())) {
        // No facets at all: the whole space; callers only pass polytopes.
        unreachable!("unbounded difference polytope");
    }
    let mut candidates: Vec<Vector> = Vec::new();
    for h in d.facets() {
        if !h.offset.is_positive() {
            candidates.push(h.normal.primitive());
        }
    }
    for e in d.equations() {
        if e.offset.is_zero() {
            candidates.push(e.normal.primitive());
            candidates.push((-&e.normal).primitive());
        } else if e.offset.is_positive() {
            candidates.push((-&e.normal).primitive());
        } else {
            candidates.push(e.normal.primitive());
        }
    }
    let best = candidates.into_iter().min().expect("origin outside the interior has a witness");
    Err(Halfspace::through_origin(best))
}

fn truncated_difference(c1: &PolyhedralCone, c2: &PolyhedralCone, ball: &Polyhedron, plus: bool) -> Result<Polyhedron> {
    let p1 = Polyhedron::from_cone(c1).intersect(ball)?;
    let p2 = Polyhedron::from_cone(c2).intersect(ball)?;
    let p2 = if plus { p2 } else { p2.negated() };
    p1.minkowski_sum(&p2)
}

fn radius_impl(c1: &PolyhedralCone, c2: &PolyhedralCone, plus: bool) -> Result<RadiusOutcome> {
    check_dim(c1.dim(), c2.dim())?;
    let n = c1.dim();
    let one = Rational::one();
    let inner = truncated_difference(c1, c2, &Polyhedron::cross_polytope(n, &one), plus)?;
    match origin_inradius(&inner) {
        Ok(rho_squared) => {
            let outer = truncated_difference(c1, c2, &Polyhedron::cube(n, &one), plus)?;
            let rho_squared_outer = origin_inradius(&outer).expect("outer polytope contains the inner one");
            Ok(RadiusOutcome::Radius(RadiusBracket {
                rho_approx: rational::to_f64(&rho_squared).sqrt(),
                rho_squared,
                rho_squared_outer,
                difference_hull: inner.facets(),
            }))
        }
        Err(witness) => Ok(RadiusOutcome::NotTransversal { witness }),
    }
}

/// Transversality radius of `c1, c2`: `rho B ⊆ co((c1 ∩ B) − (c2 ∩ B))`.
///
/// The Euclidean ball truncation is bracketed between the cross-polytope
/// (inner) and the cube (outer); the YES/NO verdict is exact.
pub fn transversality_radius(c1: &PolyhedralCone, c2: &PolyhedralCone) -> Result<RadiusOutcome> {
    radius_impl(c1, c2, false)
}

/// Same as [`transversality_radius`] with `+` in place of `−`.
pub fn transversality_radius_plus(c1: &PolyhedralCone, c2: &PolyhedralCone) -> Result<RadiusOutcome> {
    radius_impl(c1, c2, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::vector;

    fn halfplane(normal: Vector) -> PolyhedralCone {
        PolyhedralCone::from_constraints(2, &[normal], &[]).unwrap()
    }

    #[test]
    fn sandwich_square() {
        let sq = Polyhedron::cube(2, &int(1));
        let r = verify_polar_sandwich(&sq, &sq).unwrap();
        assert!(r.all_hold());
        let sum_polar = sq.minkowski_sum(&sq).unwrap().polar();
        assert_eq!(sum_polar, Polyhedron::cross_polytope(2, &ratio(1, 2)));
        // The right inclusion is tight: A° ∩ B° = 2 (A+B)°.
        assert_eq!(sq.polar(), sum_polar.scale(&int(2)));
    }

    #[test]
    fn sandwich_degenerate_and_origin_missing() {
        let sq = Polyhedron::cube(2, &int(1));
        let origin = Polyhedron::point(&vector![0, 0]);
        assert!(verify_polar_sandwich(&origin, &sq).unwrap().all_hold());
        let shifted = Polyhedron::point(&vector![1, 0]);
        assert_eq!(verify_polar_sandwich(&shifted, &sq), Err(Error::OriginMissing { which: "first" }));
        assert_eq!(verify_polar_sandwich(&sq, &shifted), Err(Error::OriginMissing { which: "second" }));
    }

    #[test]
    fn opposite_halfplanes_not_transversal() {
        let up = halfplane(vector![0, -1]);
        let down = halfplane(vector![0, 1]);
        match transversality_radius(&up, &down).unwrap() {
            RadiusOutcome::NotTransversal { witness } => {
                assert_eq!(witness, Halfspace::through_origin(vector![0, -1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn full_and_zero() {
        let out = transversality_radius(&PolyhedralCone::full(2), &PolyhedralCone::zero(2)).unwrap();
        let RadiusOutcome::Radius(b) = out else { panic!() };
        assert_eq!(b.rho_squared, ratio(1, 2));
        assert_eq!(b.rho_squared_outer, int(1));
    }

    #[test]
    fn jameson_variant_differs() {
        // C1 = C2 = {y >= 0}: the difference covers everything, the sum does not.
        let up = halfplane(vector![0, -1]);
        assert!(transversality_radius(&up, &up).unwrap().is_transversal());
        assert!(!transversality_radius_plus(&up, &up).unwrap().is_transversal());
    }
}
