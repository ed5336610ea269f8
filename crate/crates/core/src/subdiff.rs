//! Clarke and singular subdifferentials of piecewise-affine functions, the
//! two-function epigraph lift and the sum rule.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::calculus::transversality_radius;
use crate::clarke::{clarke_tangent_cone, InclusionReport};
use crate::error::{check_dim, Error, Result, MAX_DIM};
use crate::lp::{Problem, Relation};
use crate::pwa::PWAFunction;
use crate::rational::Rational;
use crate::transversality::{difference_is_full_space, strong_transversality, UniformTangentSetCandidate};
use crate::{PolyhedralCone, Polyhedron, UnionSet, Vector};

/// `co(polytope) + singular_cone`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdifferentialSet {
    /// Vertices of the Clarke subdifferential (minimal-face points when it
    /// contains a line); empty if the subdifferential is empty.
    pub polytope: Vec<Vector>,
    /// The singular subdifferential, which is also the recession cone.
    pub singular_cone: PolyhedralCone,
    pub bounded: bool,
}

impl SubdifferentialSet {
    pub fn is_empty(&self) -> bool {
        self.polytope.is_empty()
    }

    pub fn as_polyhedron(&self) -> Result<Polyhedron> {
        let rays = self.singular_cone.rays();
        let lines = self.singular_cone.lineality();
        Polyhedron::from_generators(self.singular_cone.dim(), &self.polytope, rays, lines)
    }

    pub fn contains(&self, x: &Vector) -> bool {
        !self.is_empty() && self.as_polyhedron().is_ok_and(|p| p.contains(x))
    }

    /// Scales the vertex set; the singular cone is unchanged.
    pub fn scaled(&self, c: &Rational) -> SubdifferentialSet {
        let mut polytope: Vec<Vector> = self.polytope.iter().map(|v| v.scale(c)).collect();
        polytope.sort();
        SubdifferentialSet { polytope, singular_cone: self.singular_cone.clone(), bounded: self.bounded }
    }
}

fn slices(n_epi: &PolyhedralCone, n: usize) -> Result<(Polyhedron, PolyhedralCone)> {
    // (x*, s) with <a_x, x*> + a_s s <= 0, at s = -1 and s = 0.
    let halfspaces: Vec<_> = n_epi
        .facets()
        .iter()
        .map(|a| crate::Halfspace::new(a.truncate(n), a[n].clone()))
        .collect();
    let hyperplanes: Vec<_> = n_epi
        .equalities()
        .iter()
        .map(|e| crate::Hyperplane { normal: e.truncate(n), offset: e[n].clone() })
        .collect();
    let slice = Polyhedron::from_constraints(n, &halfspaces, &hyperplanes)?;
    let ineqs: Vec<Vector> = n_epi.facets().iter().map(|a| a.truncate(n)).collect();
    let eqs: Vec<Vector> = n_epi.equalities().iter().map(|e| e.truncate(n)).collect();
    Ok((slice, PolyhedralCone::from_constraints(n, &ineqs, &eqs)?))
}

/// `∂f(x0) = {x* : (x*, −1) ∈ N_epi f}` and `∂∞f(x0) = {x* : (x*, 0) ∈ N_epi f}`.
pub fn clarke_subdifferential(f: &PWAFunction, x0: &Vector) -> Result<SubdifferentialSet> {
    let n_epi = clarke_tangent_cone(&f.epigraph(x0)?)?.polar();
    let (slice, singular_cone) = slices(&n_epi, f.dim())?;
    let polytope = if slice.is_empty() { Vec::new() } else { slice.vertices() };
    let bounded = singular_cone.is_zero();
    Ok(SubdifferentialSet { polytope, singular_cone, bounded })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualificationReport {
    pub singular_1: PolyhedralCone,
    pub singular_2: PolyhedralCone,
    /// `∂∞f1 ∩ −∂∞f2`.
    pub intersection: PolyhedralCone,
    pub holds: bool,
}

/// `∂∞f1(x0) ∩ −∂∞f2(x0) = {0}`.
pub fn singular_qualification(f1: &PWAFunction, f2: &PWAFunction, x0: &Vector) -> Result<QualificationReport> {
    let singular_1 = clarke_subdifferential(f1, x0)?.singular_cone;
    let singular_2 = clarke_subdifferential(f2, x0)?.singular_cone;
    let intersection = singular_1.intersect(&singular_2.negated())?;
    let holds = intersection.is_zero();
    Ok(QualificationReport { singular_1, singular_2, intersection, holds })
}

/// `C1 = {r1 >= f1(x)}` and `C2 = {r2 >= f2(x)}` in `X × R × R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EpigraphLift {
    pub c1: UnionSet,
    pub c2: UnionSet,
    pub basepoint: Vector,
}

/// Re-embeds a cone in `(d, r)` coordinates into `(d, r1, r2)` by mapping
/// every constraint `(a, b)` to `(a, w1 b, w2 b)`.
fn embed(c: &PolyhedralCone, n: usize, w: (i64, i64)) -> Result<PolyhedralCone> {
    let map = |v: &Vector| {
        let b = &v[n];
        v.truncate(n).concat(&[b * Rational::from_integer(w.0.into()), b * Rational::from_integer(w.1.into())])
    };
    let ineqs: Vec<Vector> = c.facets().iter().map(map).collect();
    let eqs: Vec<Vector> = c.equalities().iter().map(map).collect();
    PolyhedralCone::from_constraints(n + 2, &ineqs, &eqs)
}

fn lifted_union(f: &PWAFunction, x0: &Vector, basepoint: &Vector, w: (i64, i64)) -> Result<UnionSet> {
    let pieces = f
        .epigraph_cones(x0)?
        .iter()
        .map(|c| embed(c, f.dim(), w))
        .collect::<Result<Vec<_>>>()?;
    UnionSet::with_cap(basepoint.clone(), pieces, MAX_DIM)
}

pub fn epigraph_lift(f1: &PWAFunction, f2: &PWAFunction, x0: &Vector) -> Result<EpigraphLift> {
    check_dim(f1.dim(), f2.dim())?;
    let v1 = f1.value(x0).ok_or_else(|| Error::PointOutsideDomain(x0.clone()))?;
    let v2 = f2.value(x0).ok_or_else(|| Error::PointOutsideDomain(x0.clone()))?;
    let basepoint = x0.concat(&[v1, v2]);
    Ok(EpigraphLift {
        c1: lifted_union(f1, x0, &basepoint, (1, 0))?,
        c2: lifted_union(f2, x0, &basepoint, (0, 1))?,
        basepoint,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// `T̂_Ci ∩ B_1` are strongly transversal uniform tangent sets.
    pub strong_transversality: bool,
    /// The Clarke tangent cones of the lifts are transversal.
    pub cones_transversal: bool,
    /// `T̂_C1 − T̂_C2` is the whole space.
    pub difference_full_space: bool,
    pub qualification: QualificationReport,
}

impl HypothesisReport {
    pub fn certified(&self) -> bool {
        self.strong_transversality && self.cones_transversal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDecomposition {
    pub vertex: Vector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<(Vector, Vector)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumRuleReport {
    pub hypotheses: HypothesisReport,
    pub sum: SubdifferentialSet,
    pub first: SubdifferentialSet,
    pub second: SubdifferentialSet,
    pub vertices: Vec<VertexDecomposition>,
}

impl SumRuleReport {
    pub fn all_decompose(&self) -> bool {
        self.vertices.iter().all(|v| v.decomposition.is_some())
    }

    /// Certified hypotheses force every vertex to decompose.
    pub fn consistent(&self) -> bool {
        !self.hypotheses.certified() || self.all_decompose()
    }
}

/// Splits `v = s1 + s2` with `si ∈ Pi`, by LP over `s1`.
pub fn decompose_in_sum(v: &Vector, p1: &Polyhedron, p2: &Polyhedron) -> Option<(Vector, Vector)> {
    let n = v.dim();
    let mut lp = Problem::new(n);
    lp.free = vec![true; n];
    for h in p1.facets() {
        lp.push(h.normal.coords().to_vec(), Relation::Le, h.offset.clone());
    }
    for e in p1.equations() {
        lp.push(e.normal.coords().to_vec(), Relation::Eq, e.offset.clone());
    }
    // v − s1 ∈ P2.
    for h in p2.facets() {
        let rhs = h.normal.dot(v) - &h.offset;
        lp.push((-&h.normal).into_coords(), Relation::Le, -rhs);
    }
    for e in p2.equations() {
        let rhs = e.normal.dot(v) - &e.offset;
        lp.push((-&e.normal).into_coords(), Relation::Eq, -rhs);
    }
    let s1 = Vector::new(lp.feasible_point()?);
    let s2 = v - &s1;
    debug_assert!(p1.contains(&s1) && p2.contains(&s2));
    Some((s1, s2))
}

pub fn sum_rule_check(f1: &PWAFunction, f2: &PWAFunction, x0: &Vector) -> Result<SumRuleReport> {
    let lift = epigraph_lift(f1, f2, x0)?;
    let one = Rational::one();
    let d1 = UniformTangentSetCandidate::clarke_truncation(lift.c1.clone(), &one)?;
    let d2 = UniformTangentSetCandidate::clarke_truncation(lift.c2.clone(), &one)?;
    let strong = strong_transversality(&d1, &d2)?.certificate().is_some();
    let (t1, t2) = (clarke_tangent_cone(&lift.c1)?, clarke_tangent_cone(&lift.c2)?);
    let hypotheses = HypothesisReport {
        strong_transversality: strong,
        cones_transversal: transversality_radius(&t1, &t2)?.is_transversal(),
        difference_full_space: difference_is_full_space(&t1, &t2)?,
        qualification: singular_qualification(f1, f2, x0)?,
    };

    let sum = clarke_subdifferential(&f1.sum(f2)?, x0)?;
    let first = clarke_subdifferential(f1, x0)?;
    let second = clarke_subdifferential(f2, x0)?;
    let vertices = if first.is_empty() || second.is_empty() {
        sum.polytope.iter().map(|v| VertexDecomposition { vertex: v.clone(), decomposition: None }).collect()
    } else {
        let (p1, p2) = (first.as_polyhedron()?, second.as_polyhedron()?);
        sum.polytope
            .iter()
            .map(|v| VertexDecomposition { vertex: v.clone(), decomposition: decompose_in_sum(v, &p1, &p2) })
            .collect()
    };
    Ok(SumRuleReport { hypotheses, sum, first, second, vertices })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalGenerator {
    pub generator: Vector,
    /// The two epigraph coordinates agree.
    pub symmetric: bool,
    /// `(x*, s) ∈ N_epi(f1+f2)`.
    pub in_sum_normal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateReport {
    /// `T̂_{C1∩C2} ⊆ T̂_C`.
    pub tangent_inclusion: InclusionReport,
    pub normal_generators: Vec<NormalGenerator>,
    /// `N_C` equals the image of `N_epi(f1+f2)` under `(x*, s) -> (x*, s, s)`.
    pub normal_cone_matches: bool,
}

impl IntermediateReport {
    pub fn holds(&self) -> bool {
        self.tangent_inclusion.holds
            && self.normal_cone_matches
            && self.normal_generators.iter().all(|g| g.symmetric && g.in_sum_normal)
    }
}

/// Checks the two structural facts about `C = {r1 + r2 >= f1(x) + f2(x)}`:
/// `T̂_{C1∩C2} ⊆ T̂_C`, and `N_C = {(x*, s, s) : (x*, s) ∈ N_epi(f1+f2)}`.
pub fn intermediate_inclusion_check(f1: &PWAFunction, f2: &PWAFunction, x0: &Vector) -> Result<IntermediateReport> {
    let n = f1.dim();
    let lift = epigraph_lift(f1, f2, x0)?;
    let sum = f1.sum(f2)?;
    let c = lifted_union(&sum, x0, &lift.basepoint, (1, 1))?;
    let tc = clarke_tangent_cone(&c)?;
    let t12 = clarke_tangent_cone(&lift.c1.intersect(&lift.c2)?)?;
    let tangent_inclusion = InclusionReport::new(t12, tc.clone());

    let n_c = tc.polar();
    let n_sum = clarke_tangent_cone(&sum.epigraph(x0)?)?.polar();
    let normal_generators = n_c
        .generators()
        .into_iter()
        .map(|g| {
            let symmetric = g[n] == g[n + 1];
            let in_sum_normal = n_sum.contains(&g.truncate(n + 1));
            NormalGenerator { generator: g, symmetric, in_sum_normal }
        })
        .collect();
    let duplicate = |v: &Vector| v.concat(&[v[n].clone()]);
    let image = PolyhedralCone::from_generators(
        n + 2,
        &n_sum.rays().iter().map(duplicate).collect::<Vec<_>>(),
        &n_sum.lineality().iter().map(duplicate).collect::<Vec<_>>(),
    )?;
    Ok(IntermediateReport { tangent_inclusion, normal_generators, normal_cone_matches: image == n_c })
}

/// `∂f(x0)` as the hull of active gradients, for a convex max-affine `f`
/// without a domain.
pub fn active_gradient_hull(f: &PWAFunction, x0: &Vector) -> Result<Vec<Vector>> {
    if !f.is_convex() || f.domain().is_some() {
        return Err(Error::Input("needs a convex max-affine function without a domain".into()));
    }
    let f0 = f.value(x0).ok_or_else(|| Error::PointOutsideDomain(x0.clone()))?;
    let active: Vec<Vector> = f.groups()[0].iter().filter(|a| a.eval(x0) == f0).map(|a| a.gradient.clone()).collect();
    Ok(Polyhedron::from_points(&active)?.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwa::Affine;
    use crate::rational::int;
    use crate::{vector, Halfspace};

    fn lin(g: i64) -> Affine {
        Affine::new(vector![g], int(0))
    }

    fn abs() -> PWAFunction {
        PWAFunction::max(vec![lin(1), lin(-1)], None).unwrap()
    }

    fn neg_abs() -> PWAFunction {
        PWAFunction::negmax(vec![lin(1), lin(-1)], None).unwrap()
    }

    fn ray_indicator(sign: i64) -> PWAFunction {
        PWAFunction::indicator(Polyhedron::from_halfspaces(1, &[Halfspace::new(vector![-sign], int(0))]).unwrap()).unwrap()
    }

    #[test]
    fn one_dimensional_subdifferentials() {
        let o = vector![0];
        let d = clarke_subdifferential(&abs(), &o).unwrap();
        assert_eq!(d.polytope, vec![vector![-1], vector![1]]);
        assert!(d.bounded);
        let d = clarke_subdifferential(&PWAFunction::max(vec![lin(1), lin(2)], None).unwrap(), &o).unwrap();
        assert_eq!(d.polytope, vec![vector![1], vector![2]]);
        let d = clarke_subdifferential(&neg_abs(), &o).unwrap();
        assert_eq!(d.polytope, vec![vector![-1], vector![1]]);
        assert!(d.singular_cone.is_zero());
        let d = clarke_subdifferential(&ray_indicator(1), &o).unwrap();
        assert_eq!(d.polytope, vec![vector![0]]);
        assert_eq!(d.singular_cone, PolyhedralCone::ray(&vector![-1]));
        assert!(matches!(clarke_subdifferential(&ray_indicator(1), &vector![-1]), Err(Error::PointOutsideDomain(_))));
    }

    #[test]
    fn qualification() {
        let o = vector![0];
        assert!(!singular_qualification(&ray_indicator(1), &ray_indicator(-1), &o).unwrap().holds);
        assert!(singular_qualification(&ray_indicator(1), &abs(), &o).unwrap().holds);
        assert!(singular_qualification(&abs(), &neg_abs(), &o).unwrap().holds);
    }

    #[test]
    fn lift_of_zero_functions() {
        let z = PWAFunction::zero(1).unwrap();
        let lift = epigraph_lift(&z, &z, &vector![0]).unwrap();
        assert_eq!(lift.c1.pieces().len(), 1);
        let c1 = &lift.c1.pieces()[0];
        assert_eq!(c1.facets(), &[vector![0, -1, 0]]);
        assert_eq!(c1.lineality().len(), 2);
        assert_eq!(lift.c2.pieces()[0].facets(), &[vector![0, 0, -1]]);
    }

    #[test]
    fn abs_sum_rules() {
        let o = vector![0];
        let r = sum_rule_check(&abs(), &abs(), &o).unwrap();
        assert!(r.hypotheses.certified() && r.all_decompose());
        assert_eq!(r.sum.polytope, vec![vector![-2], vector![2]]);
        let r = sum_rule_check(&abs(), &neg_abs(), &o).unwrap();
        assert!(r.hypotheses.certified() && r.all_decompose());
        assert_eq!(r.sum.polytope, vec![vector![0]]);
        let r = sum_rule_check(&ray_indicator(1), &ray_indicator(-1), &o).unwrap();
        assert!(!r.hypotheses.certified() && !r.hypotheses.qualification.holds);
    }

    #[test]
    fn intermediate_facts() {
        let o = vector![0];
        let z = PWAFunction::zero(1).unwrap();
        let r = intermediate_inclusion_check(&z, &z, &o).unwrap();
        assert!(r.holds());
        assert_eq!(r.normal_generators.iter().map(|g| g.generator.clone()).collect::<Vec<_>>(), vec![vector![0, -1, -1]]);
        assert!(intermediate_inclusion_check(&abs(), &z, &o).unwrap().holds());
        assert!(intermediate_inclusion_check(&abs(), &neg_abs(), &o).unwrap().holds());
    }

    #[test]
    fn convex_matches_active_gradients_and_scales() {
        let f = PWAFunction::max(
            vec![
                Affine::new(vector![1, 0], int(0)),
                Affine::new(vector![0, 1], int(0)),
                Affine::new(vector![-1, -1], int(0)),
                Affine::new(vector![3, 3], int(-1)),
            ],
            None,
        )
        .unwrap();
        let o = vector![0, 0];
        let d = clarke_subdifferential(&f, &o).unwrap();
        assert_eq!(d.polytope, active_gradient_hull(&f, &o).unwrap());
        assert_eq!(d.polytope.len(), 3);
        let c = crate::rational::ratio(5, 2);
        assert_eq!(clarke_subdifferential(&f.scale(&c).unwrap(), &o).unwrap(), d.scaled(&c));
    }
}
