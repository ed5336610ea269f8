//! Exact Clarke tangent and normal cones of union sets, and the tangential
//! and normal intersection properties.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::transversality_radius;
use crate::cells::{Cell, CellDecomposition};
use crate::error::{Error, Result};
use crate::lp::conic_combination;
use crate::par::ExecMode;
use crate::{PolyhedralCone, UnionSet, Vector};

/// Is `v` in the Bouligand cone of `u` at the cell's representative?
fn in_bouligand(u: &UnionSet, cell: &Cell, v: &Vector) -> bool {
    cell.active.iter().any(|&i| {
        let k = &u.pieces()[i];
        k.equalities().iter().all(|e| e.dot(v).is_zero())
            && k.facets().iter().all(|f| !f.dot(&cell.representative).is_zero() || !f.dot(v).is_positive())
    })
}

/// `T̂_S(x0)`: the intersection of the Bouligand cones over every cell of the
/// arrangement that meets the set.
///
/// Each Bouligand cone is a union of closed cells, so the intersection is too;
/// it is assembled from the cell representatives it contains and then checked
/// for convexity.
pub fn clarke_tangent_cone(u: &UnionSet) -> Result<PolyhedralCone> {
    clarke_tangent_cone_with(u, ExecMode::Sequential)
}

pub fn clarke_tangent_cone_with(u: &UnionSet, mode: ExecMode) -> Result<PolyhedralCone> {
    if u.is_convex_piece() {
        return Ok(u.pieces()[0].clone());
    }
    let dec = CellDecomposition::new(u, mode);
    let in_set: Vec<&Cell> = dec.cells_in_set().collect();
    let included: Vec<bool> = mode.map(&in_set, |cand| in_set.iter().all(|c| in_bouligand(u, c, &cand.representative)));
    let rays: Vec<Vector> = in_set
        .iter()
        .zip(&included)
        .filter(|(_, &inc)| inc)
        .map(|(c, _)| c.representative.clone())
        .collect();
    let cone = PolyhedralCone::from_generators(u.dim(), &rays, &dec.lineality)?;
    let outside = dec
        .cells
        .iter()
        .filter(|c| c.active.is_empty())
        .chain(in_set.iter().zip(&included).filter(|(_, &inc)| !inc).map(|(c, _)| *c))
        .find(|c| cone.contains(&c.representative));
    if let Some(c) = outside {
        return Err(Error::NonConvexClarkeCone(format!(
            "cell with representative {} lies in the hull of included cells but not in the cone",
            c.representative
        )));
    }
    Ok(cone)
}

/// `N_S(x0)`, the polar of the Clarke tangent cone.
pub fn clarke_normal_cone(u: &UnionSet) -> Result<PolyhedralCone> {
    Ok(clarke_tangent_cone(u)?.polar())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub holds: bool,
    pub lhs: PolyhedralCone,
    pub rhs: PolyhedralCone,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<Vector>,
}

impl InclusionReport {
    pub fn new(lhs: PolyhedralCone, rhs: PolyhedralCone) -> Self {
        let violation = rhs.uncovered_generator(&lhs);
        InclusionReport { holds: violation.is_none(), lhs, rhs, violation }
    }
}

/// Checks `T̂_A ∩ T̂_B ⊆ T̂_{A∩B}`.
pub fn verify_tangential_intersection(a: &UnionSet, b: &UnionSet) -> Result<InclusionReport> {
    let ab = a.intersect(b)?;
    let lhs = clarke_tangent_cone(a)?.intersect(&clarke_tangent_cone(b)?)?;
    Ok(InclusionReport::new(lhs, clarke_tangent_cone(&ab)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorDecomposition {
    pub generator: Vector,
    /// `(n_a, n_b)` with `generator = n_a + n_b`, when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<(Vector, Vector)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub normal_a: PolyhedralCone,
    pub normal_b: PolyhedralCone,
    pub normal_intersection: PolyhedralCone,
    pub generators: Vec<GeneratorDecomposition>,
    /// Whether the Clarke tangent cones are transversal, which guarantees
    /// every generator decomposes.
    pub hypothesis_holds: bool,
}

impl DecompositionReport {
    pub fn all_decompose(&self) -> bool {
        self.generators.iter().all(|g| g.decomposition.is_some())
    }
}

/// Splits `g = n_a + n_b` with `n_a ∈ na`, `n_b ∈ nb`, by LP.
pub fn decompose(g: &Vector, na: &PolyhedralCone, nb: &PolyhedralCone) -> Option<(Vector, Vector)> {
    let rays: Vec<Vector> = na.rays().iter().chain(nb.rays()).cloned().collect();
    let lines: Vec<Vector> = na.lineality().iter().chain(nb.lineality()).cloned().collect();
    let (lam, mu) = conic_combination(&rays, &lines, g)?;
    let ra = na.rays().len();
    let la = na.lineality().len();
    let mut n_a = Vector::zeros(g.dim());
    for (c, r) in lam[..ra].iter().zip(na.rays()) {
        n_a = n_a.add_scaled(c, r);
    }
    for (c, l) in mu[..la].iter().zip(na.lineality()) {
        n_a = n_a.add_scaled(c, l);
    }
    let n_b = g - &n_a;
    debug_assert!(na.contains(&n_a) && nb.contains(&n_b));
    Some((n_a, n_b))
}

/// Decomposes every generator of `N_{A∩B}` over `N_A + N_B`.
pub fn verify_normal_intersection(a: &UnionSet, b: &UnionSet) -> Result<DecompositionReport> {
    let ab = a.intersect(b)?;
    let (ta, tb) = (clarke_tangent_cone(a)?, clarke_tangent_cone(b)?);
    let (na, nb) = (ta.polar(), tb.polar());
    let nab = clarke_tangent_cone(&ab)?.polar();
    let generators = nab
        .generators()
        .into_iter()
        .map(|g| GeneratorDecomposition { decomposition: decompose(&g, &na, &nb), generator: g })
        .collect();
    let hypothesis_holds = transversality_radius(&ta, &tb)?.is_transversal();
    Ok(DecompositionReport { normal_a: na, normal_b: nb, normal_intersection: nab, generators, hypothesis_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    fn cone(ineqs: &[Vector]) -> PolyhedralCone {
        PolyhedralCone::from_constraints(2, ineqs, &[]).unwrap()
    }

    fn upper() -> UnionSet {
        UnionSet::cone(cone(&[vector![0, -1]]))
    }

    fn below_diagonal() -> UnionSet {
        UnionSet::cone(cone(&[vector![-1, 1]]))
    }

    #[test]
    fn quadrant_union_collapses() {
        let q1 = cone(&[vector![-1, 0], vector![0, -1]]);
        let u = UnionSet::cones(vec![q1.clone(), q1.negated()]).unwrap();
        assert_eq!(clarke_tangent_cone(&u).unwrap(), PolyhedralCone::zero(2));
        assert_eq!(clarke_normal_cone(&u).unwrap(), PolyhedralCone::full(2));
        assert_eq!(clarke_tangent_cone_with(&u, ExecMode::Parallel).unwrap(), PolyhedralCone::zero(2));
    }

    #[test]
    fn halfplane_normal() {
        let n = clarke_normal_cone(&upper()).unwrap();
        assert_eq!(n, PolyhedralCone::ray(&vector![0, -1]));
    }

    #[test]
    fn wedge_normal() {
        let wedge = UnionSet::cone(cone(&[vector![0, -1], vector![-1, -1]]));
        let n = clarke_normal_cone(&wedge).unwrap();
        assert_eq!(n.rays(), &[vector![-1, -1], vector![0, -1]]);
        assert_eq!(n.polar(), wedge.pieces()[0]);
    }

    #[test]
    fn halfplane_union_clarke_cone() {
        // {y >= 0} ∪ {y <= x}: the complement is the open wedge {x < y < 0}.
        let u = UnionSet::cones(vec![cone(&[vector![0, -1]]), cone(&[vector![-1, 1]])]).unwrap();
        let t = clarke_tangent_cone(&u).unwrap();
        assert_eq!(t, cone(&[vector![0, -1], vector![-1, 1]]));
    }

    #[test]
    fn tangential_intersection_examples() {
        let r = verify_tangential_intersection(&upper(), &below_diagonal()).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, r.rhs);
        let lower = UnionSet::cone(cone(&[vector![0, 1]]));
        let r = verify_tangential_intersection(&upper(), &lower).unwrap();
        assert!(r.holds);
        assert_eq!(r.rhs.lineality(), &[vector![1, 0]]);
        assert!(verify_tangential_intersection(&upper(), &upper()).unwrap().holds);
    }

    #[test]
    fn normal_intersection_examples() {
        let r = verify_normal_intersection(&upper(), &below_diagonal()).unwrap();
        assert!(r.hypothesis_holds && r.all_decompose());
        assert_eq!(r.normal_intersection.rays(), &[vector![-1, 1], vector![0, -1]]);
        let r = verify_normal_intersection(&upper(), &upper()).unwrap();
        assert!(r.all_decompose());
        let lower = UnionSet::cone(cone(&[vector![0, 1]]));
        let r = verify_normal_intersection(&upper(), &lower).unwrap();
        assert!(!r.hypothesis_holds);
        assert!(r.all_decompose());
    }
}
