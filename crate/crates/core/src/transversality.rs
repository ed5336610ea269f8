//! Uniform tangent sets, strong transversality certificates, the two-point
//! decrease witness, and hypertangent radii.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::calculus::origin_inradius;
use crate::clarke::clarke_tangent_cone;
use crate::error::{check_dim, Error, Result};
use crate::lp::{convex_conic_combination, Problem, Relation};
use crate::oracle::{check_uts, SamplingParams, Status};
use crate::par::ExecMode;
use crate::rational::{self, int, ratio, serde_rational, serde_rational_opt, Rational};
use crate::{Halfspace, PolyhedralCone, Polyhedron, UnionSet, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRow {
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    pub trials: usize,
    pub seed: u64,
    pub status: Status,
}

impl CertificateRow {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }
}

/// A polytope `D` of directions proposed as a uniform tangent set of `host`
/// at its basepoint.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformTangentSetCandidate {
    pub host: UnionSet,
    /// Generating points of `D` (its convex hull is meant).
    pub polytope: Vec<Vector>,
    pub certificate_table: Vec<CertificateRow>,
    /// `D ⊆ T̂_host`, which for a locally conical host makes `D` a uniform
    /// tangent set for every `(eps, delta, lambda)`.
    pub exact: bool,
}

impl UniformTangentSetCandidate {
    pub fn new(host: UnionSet, polytope: Vec<Vector>) -> Result<Self> {
        for v in &polytope {
            check_dim(host.dim(), v.dim())?;
        }
        Ok(UniformTangentSetCandidate { host, polytope, certificate_table: Vec::new(), exact: false })
    }

    /// `T̂_host ∩ r B_1`, an exact uniform tangent set.
    pub fn clarke_truncation(host: UnionSet, r: &Rational) -> Result<Self> {
        let t = clarke_tangent_cone(&host)?;
        let d = Polyhedron::from_cone(&t).intersect(&Polyhedron::cross_polytope(host.dim(), r))?;
        let mut c = Self::new(host, d.vertices())?;
        c.certify_exact()?;
        Ok(c)
    }

    /// `(S − x0) ∩ M B_1` for a single convex piece.
    pub fn convex_truncation(host: UnionSet, m: &Rational) -> Result<Self> {
        if !host.is_convex_piece() {
            return Err(Error::Input("convex truncation needs a single convex piece".into()));
        }
        Self::clarke_truncation(host, m)
    }

    /// Marks the candidate exact when every generating point lies in the
    /// Clarke tangent cone of the host. Returns the flag.
    pub fn certify_exact(&mut self) -> Result<bool> {
        let t = clarke_tangent_cone(&self.host)?;
        self.exact = self.polytope.iter().all(|v| t.contains(v));
        Ok(self.exact)
    }

    /// Appends one sampled row per parameter set.
    pub fn certify_sampled(&mut self, rows: &[SamplingParams], mode: ExecMode) -> Result<()> {
        for p in rows {
            let v = check_uts(&self.host, self.host.basepoint(), &self.polytope, p, mode)?;
            self.certificate_table.push(CertificateRow {
                eps: p.eps.clone(),
                delta: p.delta.clone(),
                lambda: p.lambda.clone(),
                trials: p.trials,
                seed: p.seed,
                status: v.status,
            });
        }
        Ok(())
    }

    /// Exact, or every sampled row passed (and at least one exists).
    pub fn is_certified(&self) -> bool {
        self.exact || (!self.certificate_table.is_empty() && self.certificate_table.iter().all(CertificateRow::passed))
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        UniformTangentSetCandidate {
            host: self.host.clone(),
            polytope: self.polytope.iter().map(|v| v.scale(c)).collect(),
            certificate_table: Vec::new(),
            exact: false,
        }
    }

    fn hull(&self) -> Result<Polyhedron> {
        Polyhedron::from_points(&self.polytope)
    }

    fn certified_delta(&self) -> Option<Rational> {
        if self.exact {
            return None;
        }
        self.certificate_table.iter().filter(|r| r.passed()).map(|r| r.delta.clone()).max()
    }

    fn certified_lambda(&self) -> Rational {
        if self.exact {
            return Rational::one();
        }
        self.certificate_table
            .iter()
            .filter(|r| r.passed())
            .map(|r| r.lambda.clone())
            .min()
            .unwrap_or_else(Rational::one)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyEntry {
    pub construction: String,
    pub exact: bool,
    pub sampled: Vec<Status>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub entries: Vec<PropertyEntry>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

fn recertify(name: &str, mut cand: UniformTangentSetCandidate, rows: &[SamplingParams], mode: ExecMode) -> Result<PropertyEntry> {
    if cand.polytope.is_empty() {
        return Ok(PropertyEntry { construction: name.into(), exact: true, sampled: Vec::new(), passed: true });
    }
    cand.certify_exact()?;
    cand.certify_sampled(rows, mode)?;
    let sampled: Vec<Status> = cand.certificate_table.iter().map(|r| r.status).collect();
    let passed = cand.exact && sampled.iter().all(|s| *s == Status::Passed);
    Ok(PropertyEntry { construction: name.into(), exact: cand.exact, sampled, passed })
}

/// Re-certifies the standard constructions on uniform tangent sets: scaling,
/// a subset, the union, the closed convex hull, and for convex hosts the
/// truncated set itself.
pub fn uts_calculus_check(
    d: &UniformTangentSetCandidate,
    d_prime: &UniformTangentSetCandidate,
    c: &Rational,
    rows: &[SamplingParams],
    mode: ExecMode,
) -> Result<PropertyReport> {
    if d.host != d_prime.host {
        return Err(Error::Input("candidates must share the host set".into()));
    }
    if !c.is_positive() {
        return Err(Error::Input("scale factor must be positive".into()));
    }
    let host = d.host.clone();
    let mut entries = Vec::new();
    entries.push(recertify("scaled", d.scaled(c), rows, mode)?);
    let subset = d.hull()?.intersect(&d_prime.hull()?)?;
    entries.push(recertify("subset", UniformTangentSetCandidate::new(host.clone(), subset.vertices())?, rows, mode)?);
    let union: Vec<Vector> = d.polytope.iter().chain(&d_prime.polytope).cloned().collect();
    entries.push(recertify("union", UniformTangentSetCandidate::new(host.clone(), union.clone())?, rows, mode)?);
    let closure = d.hull()?.vertices();
    entries.push(recertify("closure", UniformTangentSetCandidate::new(host.clone(), closure)?, rows, mode)?);
    let hull = Polyhedron::from_points(&union)?.vertices();
    entries.push(recertify("convex_hull", UniformTangentSetCandidate::new(host.clone(), hull)?, rows, mode)?);
    if host.is_convex_piece() {
        let trunc = UniformTangentSetCandidate::convex_truncation(host, &Rational::one())?;
        entries.push(recertify("convex_truncation", trunc, rows, mode)?);
    }
    Ok(PropertyReport { entries })
}

/// `rho B ⊆ co(D_A − D_B)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityCertificate {
    pub d_a: UniformTangentSetCandidate,
    pub d_b: UniformTangentSetCandidate,
    #[serde(with = "serde_rational")]
    pub rho_squared: Rational,
    pub difference_hull: Vec<Halfspace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StrongOutcome {
    Certified(Box<TransversalityCertificate>),
    NotCertified {
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Halfspace>,
    },
}

impl StrongOutcome {
    pub fn certificate(&self) -> Option<&TransversalityCertificate> {
        match self {
            StrongOutcome::Certified(c) => Some(c),
            StrongOutcome::NotCertified { .. } => None,
        }
    }
}

/// Certifies strong tangential transversality from two candidates.
pub fn strong_transversality(d_a: &UniformTangentSetCandidate, d_b: &UniformTangentSetCandidate) -> Result<StrongOutcome> {
    check_dim(d_a.host.dim(), d_b.host.dim())?;
    if d_a.host.basepoint() != d_b.host.basepoint() {
        return Err(Error::Input("hosts must share the basepoint".into()));
    }
    if !d_a.is_certified() || !d_b.is_certified() {
        return Ok(StrongOutcome::NotCertified { reason: "a candidate is not a certified uniform tangent set".into(), witness: None });
    }
    if d_a.polytope.is_empty() || d_b.polytope.is_empty() {
        return Ok(StrongOutcome::NotCertified { reason: "empty candidate".into(), witness: None });
    }
    let mut diffs = Vec::with_capacity(d_a.polytope.len() * d_b.polytope.len());
    for a in &d_a.polytope {
        for b in &d_b.polytope {
            diffs.push(a - b);
        }
    }
    let hull = Polyhedron::from_points(&diffs)?;
    Ok(match origin_inradius(&hull) {
        Ok(rho_squared) => StrongOutcome::Certified(Box::new(TransversalityCertificate {
            d_a: d_a.clone(),
            d_b: d_b.clone(),
            rho_squared,
            difference_hull: hull.facets(),
        })),
        Err(witness) => StrongOutcome::NotCertified {
            reason: "the origin is not interior to co(D_A − D_B)".into(),
            witness: Some(witness),
        },
    })
}

/// One step of the two-point decrease property.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub x_a: Vector,
    pub x_b: Vector,
    #[serde(with = "serde_rational")]
    pub t: Rational,
    pub w_a: Vector,
    pub w_b: Vector,
    /// `|x_a − x_b|^2 − |x_a − x_b + t(w_a − w_b)|^2`.
    #[serde(with = "serde_rational")]
    pub decrease: Rational,
    #[serde(rename = "M", with = "serde_rational")]
    pub m: Rational,
    #[serde(with = "serde_rational")]
    pub eta: Rational,
}

impl WitnessRecord {
    /// `|d + t(w_a − w_b)| <= |d| − t eta` in squared form, and `|w| <= M`.
    pub fn verify(&self) -> bool {
        let d = &self.x_a - &self.x_b;
        let d_new = d.add_scaled(&self.t, &(&self.w_a - &self.w_b));
        let nd = d.norm_squared();
        let te = &self.t * &self.eta;
        let r = &nd + &te * &te - d_new.norm_squared();
        let m2 = &self.m * &self.m;
        te.clone() * te.clone() <= nd
            && !r.is_negative()
            && int(4) * &te * &te * &nd <= &r * &r
            && self.w_a.norm_squared() <= m2
            && self.w_b.norm_squared() <= m2
    }
}

fn convex_weights(points: &[Vector], target: &Vector) -> Option<Vec<Rational>> {
    convex_conic_combination(points, &[], &[], target)
}

/// Writes `q = v_a − v_b` with `v_a ∈ co(pa)`, `v_b ∈ co(pb)`.
fn split_difference(pa: &[Vector], pb: &[Vector], q: &Vector) -> Option<(Vector, Vector)> {
    let (na, nb) = (pa.len(), pb.len());
    let mut p = Problem::new(na + nb);
    for i in 0..q.dim() {
        let coefs: Vec<Rational> = pa.iter().map(|v| v[i].clone()).chain(pb.iter().map(|v| -v[i].clone())).collect();
        p.push(coefs, Relation::Eq, q[i].clone());
    }
    let mut ones_a = vec![Rational::zero(); na + nb];
    let mut ones_b = vec![Rational::zero(); na + nb];
    for c in ones_a.iter_mut().take(na) {
        *c = Rational::one();
    }
    for c in ones_b.iter_mut().skip(na) {
        *c = Rational::one();
    }
    p.push(ones_a, Relation::Eq, Rational::one());
    p.push(ones_b, Relation::Eq, Rational::one());
    let x = p.feasible_point()?;
    let comb = |pts: &[Vector], w: &[Rational]| {
        pts.iter().zip(w).fold(Vector::zeros(q.dim()), |acc, (v, c)| acc.add_scaled(c, v))
    };
    Some((comb(pa, &x[..na]), comb(pb, &x[na..])))
}

/// The explicit construction behind "strong implies tangential" transversality.
///
/// With both `D`s scaled by `c >= 1/rho`, the unit ball lies in
/// `co(cD_A) − co(cD_B)`, so `q ≈ −(x_a − x_b)/|x_a − x_b|` splits as
/// `v_a − v_b`; for exact candidates `x + t v` stays in each host.
pub fn witness_search(cert: &TransversalityCertificate, x_a: &Vector, x_b: &Vector, eps: &Rational) -> Result<WitnessRecord> {
    let host_a = &cert.d_a.host;
    let host_b = &cert.d_b.host;
    check_dim(host_a.dim(), x_a.dim())?;
    check_dim(host_a.dim(), x_b.dim())?;
    if !eps.is_positive() || *eps >= ratio(1, 3) {
        return Err(Error::Input("eps must lie in (0, 1/3)".into()));
    }
    if x_a == x_b {
        return Err(Error::Input("x_a and x_b must differ".into()));
    }
    if !host_a.contains(x_a) {
        return Err(Error::PointNotInSet(x_a.clone()));
    }
    if !host_b.contains(x_b) {
        return Err(Error::PointNotInSet(x_b.clone()));
    }
    let x0 = host_a.basepoint();
    for (cand, x) in [(&cert.d_a, x_a), (&cert.d_b, x_b)] {
        if let Some(delta) = cand.certified_delta() {
            if (x - x0).norm_squared() > &delta * &delta {
                return Err(Error::Input(format!("{x} is farther than delta = {} from the basepoint", rational::format(&delta))));
            }
        }
    }

    let c = rational::sqrt_upper(&(Rational::one() / &cert.rho_squared), 24);
    let pa: Vec<Vector> = cert.d_a.polytope.iter().map(|v| v.scale(&c)).collect();
    let pb: Vec<Vector> = cert.d_b.polytope.iter().map(|v| v.scale(&c)).collect();

    let d = x_a - x_b;
    let nd = d.norm_squared();
    // s |d| in [1 − eps/2, 1]: s is a lower bound for 1/|d| with enough bits.
    let mut bits = 8;
    let s = loop {
        let s = rational::sqrt_lower(&(Rational::one() / &nd), bits);
        let target = Rational::one() - eps / int(2);
        if &s * &s * &nd >= &target * &target {
            break s;
        }
        bits += 8;
    };
    let q = d.scale(&-s);
    let (v_a, v_b) = split_difference(&pa, &pb, &q)
        .ok_or_else(|| Error::NoWitness("the unit direction is not covered by the scaled difference hull".into()))?;

    let eta = Rational::one() - int(3) * eps;
    let max_norm2 = pa.iter().chain(&pb).map(Vector::norm_squared).max().unwrap_or_else(Rational::zero);
    let m = rational::sqrt_upper(&max_norm2, 24) + eps;

    let mut t = cert.d_a.certified_lambda().min(cert.d_b.certified_lambda()).min(d.norm_inf());
    for _ in 0..32 {
        let ya = x_a.add_scaled(&t, &v_a);
        let yb = x_b.add_scaled(&t, &v_b);
        if host_a.contains(&ya) && host_b.contains(&yb) {
            let d_new = &ya - &yb;
            let record = WitnessRecord {
                x_a: x_a.clone(),
                x_b: x_b.clone(),
                t: t.clone(),
                w_a: v_a.clone(),
                w_b: v_b.clone(),
                decrease: &nd - d_new.norm_squared(),
                m: m.clone(),
                eta: eta.clone(),
            };
            if record.verify() {
                return Ok(record);
            }
        }
        t /= int(2);
    }
    Err(Error::NoWitness(format!("no step keeps {x_a} and {x_b} in their sets with the required decrease")))
}

/// Certifies `d_common ⊆ co(D_A) ∩ co(D_B)` as a uniform tangent set of `A ∩ B`.
pub fn uts_intersection_check(
    cert: &TransversalityCertificate,
    d_common: &[Vector],
    rows: &[SamplingParams],
    mode: ExecMode,
) -> Result<PropertyReport> {
    for v in d_common {
        let inside = convex_weights(&cert.d_a.polytope, v).is_some() && convex_weights(&cert.d_b.polytope, v).is_some();
        if !inside {
            return Err(Error::Input(format!("{v} is not in both uniform tangent sets")));
        }
    }
    let ab = cert.d_a.host.intersect(&cert.d_b.host)?;
    let cand = UniformTangentSetCandidate::new(ab, d_common.to_vec())?;
    Ok(PropertyReport { entries: vec![recertify("intersection", cand, rows, mode)?] })
}

/// Exact lower estimate of `eps(v) = sup{eta < 1 : S + t(v + eta B) ⊆ S}` on
/// the grid `{j/N}`.
///
/// For a locally conical host the tube condition holds exactly when
/// `v + eta B ⊆ T̂`, so `eps(v) = min(1, dist(v, ∂T̂))`.
pub fn hypertangent_epsilon(u: &UnionSet, v: &Vector, grid: u32) -> Result<Rational> {
    check_dim(u.dim(), v.dim())?;
    if grid == 0 {
        return Err(Error::Input("grid resolution must be positive".into()));
    }
    let t = clarke_tangent_cone(u)?;
    hypertangent_epsilon_in(&t, v, grid)
}

/// Same as [`hypertangent_epsilon`] with a precomputed tangent cone.
pub fn hypertangent_epsilon_in(t: &PolyhedralCone, v: &Vector, grid: u32) -> Result<Rational> {
    if !t.contains_in_interior(v) {
        return Err(Error::NotHypertangent(v.clone()));
    }
    // eta <= dist(v, {<f, x> = 0}) for every facet f, compared in squared form.
    let fits = |eta: &Rational| t.facets().iter().all(|f| eta * eta * f.norm_squared() <= f.dot(v) * f.dot(v));
    let n = grid as i64;
    let (mut lo, mut hi) = (0i64, n);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if fits(&ratio(mid, n)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    if lo == 0 {
        return Err(Error::NotHypertangent(v.clone()));
    }
    Ok(ratio(lo, n))
}

/// The discrete open uniform tangent set `{eps(v) v}`.
pub fn open_uts_from_hypertangents(u: &UnionSet, directions: &[Vector], grid: u32) -> Result<UniformTangentSetCandidate> {
    let t = clarke_tangent_cone(u)?;
    let mut pts = Vec::with_capacity(directions.len());
    for v in directions {
        check_dim(u.dim(), v.dim())?;
        let e = hypertangent_epsilon_in(&t, v, grid)?;
        pts.push(v.scale(&e));
    }
    let mut cand = UniformTangentSetCandidate::new(u.clone(), pts)?;
    cand.certify_exact()?;
    Ok(cand)
}

/// Every nonempty convex set in finite dimension is quasisolid.
pub fn is_quasisolid(_c: &PolyhedralCone) -> bool {
    true
}

/// `T̂_A − T̂_B` is dense, i.e. (being a convex cone) the whole space.
pub fn difference_is_full_space(ta: &PolyhedralCone, tb: &PolyhedralCone) -> Result<bool> {
    Ok(ta.minkowski_sum(&tb.negated())?.is_whole_space())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypertangentEstimate {
    pub direction: Vector,
    #[serde(default, with = "serde_rational_opt")]
    pub epsilon: Option<Rational>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    fn halfplane_cone(normal: Vector) -> PolyhedralCone {
        PolyhedralCone::from_constraints(2, &[normal], &[]).unwrap()
    }

    fn upper() -> UnionSet {
        UnionSet::cone(halfplane_cone(vector![0, -1]))
    }

    fn below_diagonal() -> UnionSet {
        UnionSet::cone(halfplane_cone(vector![-1, 1]))
    }

    fn exact(host: UnionSet, pts: Vec<Vector>) -> UniformTangentSetCandidate {
        let mut c = UniformTangentSetCandidate::new(host, pts).unwrap();
        assert!(c.certify_exact().unwrap());
        c
    }

    #[test]
    fn transversal_halfplanes_certify() {
        let da = exact(upper(), vec![vector![1, 0], vector![-1, 0], vector![0, 1]]);
        let db = exact(below_diagonal(), vec![vector![1, 1], vector![-1, -1], vector![1, 0]]);
        let out = strong_transversality(&da, &db).unwrap();
        let cert = out.certificate().expect("certified");
        assert!(cert.rho_squared.is_positive());

        let x_a = Vector::from_ratios(&[(0, 1), (1, 10)]);
        let x_b = Vector::from_ratios(&[(1, 10), (0, 1)]);
        let rec = witness_search(cert, &x_a, &x_b, &ratio(1, 10)).unwrap();
        assert_eq!(rec.eta, ratio(7, 10));
        assert!(rec.verify());
    }

    #[test]
    fn opposite_halfplanes_do_not_certify() {
        let da = exact(upper(), vec![vector![1, 0], vector![-1, 0], vector![0, 1]]);
        let lower = UnionSet::cone(halfplane_cone(vector![0, 1]));
        let db = exact(lower, vec![vector![1, 0], vector![-1, 0], vector![0, -1]]);
        match strong_transversality(&da, &db).unwrap() {
            StrongOutcome::NotCertified { witness, .. } => {
                assert_eq!(witness, Some(Halfspace::through_origin(vector![0, -1])));
            }
            other => panic!("{other:?}"),
        }
        let seg = exact(upper(), vec![vector![0, 0], vector![0, 1]]);
        assert!(strong_transversality(&seg, &seg).unwrap().certificate().is_none());
    }

    #[test]
    fn witness_rejects_equal_points() {
        let da = exact(upper(), vec![vector![1, 0], vector![-1, 0], vector![0, 1]]);
        let db = exact(below_diagonal(), vec![vector![1, 1], vector![-1, -1], vector![1, 0]]);
        let out = strong_transversality(&da, &db).unwrap();
        let p = vector![0, 0];
        assert!(witness_search(out.certificate().unwrap(), &p, &p, &ratio(1, 10)).is_err());
    }

    #[test]
    fn hypertangent_halfplane() {
        assert_eq!(hypertangent_epsilon(&upper(), &vector![0, 1], 4).unwrap(), int(1));
        assert!(hypertangent_epsilon(&upper(), &vector![0, 1], 2).unwrap() >= ratio(1, 2));
        assert!(matches!(hypertangent_epsilon(&upper(), &vector![0, -1], 8), Err(Error::NotHypertangent(_))));
        // (3/5, 4/5) is at distance 4/5 from the boundary.
        assert_eq!(hypertangent_epsilon(&upper(), &Vector::from_ratios(&[(3, 5), (4, 5)]), 10).unwrap(), ratio(4, 5));
        assert_eq!(hypertangent_epsilon(&upper(), &Vector::from_ratios(&[(3, 5), (4, 5)]), 3).unwrap(), ratio(2, 3));
    }

    #[test]
    fn open_uts_for_quadrants_fails() {
        let q1 = halfplane_cone(vector![-1, 0]).intersect(&halfplane_cone(vector![0, -1])).unwrap();
        let u = UnionSet::cones(vec![q1.clone(), q1.negated()]).unwrap();
        assert!(matches!(open_uts_from_hypertangents(&u, &[vector![1, 1]], 8), Err(Error::NotHypertangent(_))));
        let c = open_uts_from_hypertangents(&upper(), &[vector![0, 1]], 8).unwrap();
        assert!(c.exact);
        assert_eq!(c.polytope, vec![vector![0, 1]]);
    }

    #[test]
    fn calculus_constructions_recertify() {
        let host = upper();
        let d = exact(host.clone(), vec![vector![0, 0], vector![0, 1]]);
        let dp = exact(host, vec![vector![0, 0], vector![1, 1]]);
        let rows = [SamplingParams::new(ratio(1, 4), int(1), int(1), 40, 1)];
        let r = uts_calculus_check(&d, &dp, &int(2), &rows, ExecMode::Sequential).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.entries.len(), 6);
    }

    #[test]
    fn density_test() {
        let up = halfplane_cone(vector![0, -1]);
        let down = halfplane_cone(vector![0, 1]);
        assert!(!difference_is_full_space(&up, &down).unwrap());
        assert!(difference_is_full_space(&up, &halfplane_cone(vector![-1, 1])).unwrap());
        assert!(is_quasisolid(&up));
    }
}
