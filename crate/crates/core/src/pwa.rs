//! Piecewise-affine functions with optional polyhedral domains.

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_cap, check_dim, Error, Result, MAX_DIM};
use crate::rational::{serde_rational, Rational};
use crate::{PolyhedralCone, Polyhedron, UnionSet, Vector};

/// Largest domain dimension: epigraph lifts add two coordinates.
pub const MAX_PWA_DIM: usize = MAX_DIM - 2;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Affine {
    pub gradient: Vector,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
}

impl Affine {
    pub fn new(gradient: Vector, offset: Rational) -> Self {
        Affine { gradient, offset }
    }

    pub fn eval(&self, x: &Vector) -> Rational {
        self.gradient.dot(x) + &self.offset
    }

    fn neg(&self) -> Affine {
        Affine { gradient: -&self.gradient, offset: -self.offset.clone() }
    }

    fn add(&self, other: &Affine) -> Affine {
        Affine { gradient: &self.gradient + &other.gradient, offset: &self.offset + &other.offset }
    }

    fn scale(&self, c: &Rational) -> Affine {
        Affine { gradient: self.gradient.scale(c), offset: &self.offset * c }
    }
}

/// `f(x) = min_j max_{a in groups[j]} a(x)`, plus the indicator of `domain`.
///
/// A max-affine function is a single group; its negation has one singleton
/// group per piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PWAFunction {
    dim: usize,
    groups: Vec<Vec<Affine>>,
    domain: Option<Polyhedron>,
}

impl PWAFunction {
    fn build(dim: usize, groups: Vec<Vec<Affine>>, domain: Option<Polyhedron>) -> Result<Self> {
        check_cap(dim, MAX_PWA_DIM)?;
        if groups.is_empty() || groups.iter().any(Vec::is_empty) {
            return Err(Error::Input("a piecewise-affine function needs at least one piece".into()));
        }
        for a in groups.iter().flatten() {
            check_dim(dim, a.gradient.dim())?;
        }
        if let Some(d) = &domain {
            check_dim(dim, d.dim())?;
            if d.is_empty() {
                return Err(Error::Input("the domain is empty".into()));
            }
        }
        let mut groups: Vec<Vec<Affine>> = groups
            .into_iter()
            .map(|mut g| {
                g.sort();
                g.dedup();
                g
            })
            .collect();
        groups.sort();
        groups.dedup();
        Ok(PWAFunction { dim, groups, domain })
    }

    /// `max_i (<g_i, x> + b_i)`.
    pub fn max(pieces: Vec<Affine>, domain: Option<Polyhedron>) -> Result<Self> {
        let dim = pieces.first().ok_or_else(|| Error::Input("no pieces".into()))?.gradient.dim();
        Self::build(dim, vec![pieces], domain)
    }

    /// `−max_i (<g_i, x> + b_i)`.
    pub fn negmax(pieces: Vec<Affine>, domain: Option<Polyhedron>) -> Result<Self> {
        let dim = pieces.first().ok_or_else(|| Error::Input("no pieces".into()))?.gradient.dim();
        Self::build(dim, pieces.iter().map(|a| vec![a.neg()]).collect(), domain)
    }

    /// The indicator of a nonempty polyhedron.
    pub fn indicator(domain: Polyhedron) -> Result<Self> {
        let dim = domain.dim();
        Self::build(dim, vec![vec![Affine::new(Vector::zeros(dim), Rational::zero())]], Some(domain))
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::build(dim, vec![vec![Affine::new(Vector::zeros(dim), Rational::zero())]], None)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[Vec<Affine>] {
        &self.groups
    }

    pub fn domain(&self) -> Option<&Polyhedron> {
        self.domain.as_ref()
    }

    pub fn in_domain(&self, x: &Vector) -> bool {
        self.domain.as_ref().is_none_or(|d| d.contains(x))
    }

    /// `None` outside the domain.
    pub fn value(&self, x: &Vector) -> Option<Rational> {
        if x.dim() != self.dim || !self.in_domain(x) {
            return None;
        }
        self.groups.iter().map(|g| g.iter().map(|a| a.eval(x)).max().expect("nonempty group")).min()
    }

    /// A single max-affine group, hence convex.
    pub fn is_convex(&self) -> bool {
        self.groups.len() == 1
    }

    /// Pointwise sum, re-expanded as a min of maxes over the common domain.
    pub fn sum(&self, other: &PWAFunction) -> Result<PWAFunction> {
        check_dim(self.dim, other.dim)?;
        let mut groups = Vec::with_capacity(self.groups.len() * other.groups.len());
        for g in &self.groups {
            for h in &other.groups {
                groups.push(g.iter().flat_map(|a| h.iter().map(move |b| a.add(b))).collect());
            }
        }
        let domain = match (&self.domain, &other.domain) {
            (Some(a), Some(b)) => Some(a.intersect(b)?),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        Self::build(self.dim, groups, domain)
    }

    /// `c f` for `c > 0`.
    pub fn scale(&self, c: &Rational) -> Result<PWAFunction> {
        if *c <= Rational::zero() {
            return Err(Error::Input("scale factor must be positive".into()));
        }
        let groups = self.groups.iter().map(|g| g.iter().map(|a| a.scale(c)).collect()).collect();
        Self::build(self.dim, groups, self.domain.clone())
    }

    /// Local cones of `epi f` at `(x0, f(x0))`, one per active group, in
    /// coordinates `(d, r)` relative to the basepoint.
    pub fn epigraph_cones(&self, x0: &Vector) -> Result<Vec<PolyhedralCone>> {
        check_dim(self.dim, x0.dim())?;
        let f0 = self.value(x0).ok_or_else(|| Error::PointOutsideDomain(x0.clone()))?;
        let n = self.dim;
        let mut dom_ineqs = Vec::new();
        let mut dom_eqs = Vec::new();
        if let Some(d) = &self.domain {
            for h in d.facets() {
                if h.normal.dot(x0) == h.offset {
                    dom_ineqs.push(h.normal.concat(&[Rational::zero()]));
                }
            }
            for e in d.equations() {
                dom_eqs.push(e.normal.concat(&[Rational::zero()]));
            }
        }
        let mut out = Vec::new();
        for g in &self.groups {
            let gv = g.iter().map(|a| a.eval(x0)).max().expect("nonempty group");
            if gv != f0 {
                continue;
            }
            // r >= <a, d> for every active piece.
            let mut ineqs: Vec<Vector> = g
                .iter()
                .filter(|a| a.eval(x0) == gv)
                .map(|a| a.gradient.concat(&[-Rational::from_integer(1.into())]))
                .collect();
            ineqs.extend(dom_ineqs.iter().cloned());
            out.push(PolyhedralCone::from_constraints(n + 1, &ineqs, &dom_eqs)?);
        }
        Ok(out)
    }

    /// `epi f` near `(x0, f(x0))` as a union set.
    pub fn epigraph(&self, x0: &Vector) -> Result<UnionSet> {
        let f0 = self.value(x0).ok_or_else(|| Error::PointOutsideDomain(x0.clone()))?;
        UnionSet::with_cap(x0.concat(&[f0]), self.epigraph_cones(x0)?, MAX_DIM)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PwaKind {
    Max,
    Negmax,
    MinOfMax,
}

#[derive(Serialize, Deserialize)]
struct PwaDoc {
    #[serde(rename = "type")]
    kind: PwaKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pieces: Option<Vec<Affine>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    groups: Option<Vec<Vec<Affine>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    domain: Option<Polyhedron>,
}

impl Serialize for PWAFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let doc = if self.groups.len() == 1 {
            PwaDoc { kind: PwaKind::Max, pieces: Some(self.groups[0].clone()), groups: None, domain: self.domain.clone() }
        } else if self.groups.iter().all(|g| g.len() == 1) {
            let pieces = self.groups.iter().map(|g| g[0].neg()).collect();
            PwaDoc { kind: PwaKind::Negmax, pieces: Some(pieces), groups: None, domain: self.domain.clone() }
        } else {
            PwaDoc { kind: PwaKind::MinOfMax, pieces: None, groups: Some(self.groups.clone()), domain: self.domain.clone() }
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PWAFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = PwaDoc::deserialize(d)?;
        let f = match doc.kind {
            PwaKind::Max => PWAFunction::max(doc.pieces.ok_or_else(|| D::Error::missing_field("pieces"))?, doc.domain),
            PwaKind::Negmax => PWAFunction::negmax(doc.pieces.ok_or_else(|| D::Error::missing_field("pieces"))?, doc.domain),
            PwaKind::MinOfMax => {
                let groups = doc.groups.ok_or_else(|| D::Error::missing_field("groups"))?;
                let dim = groups.first().and_then(|g| g.first()).map(|a| a.gradient.dim()).unwrap_or(0);
                PWAFunction::build(dim, groups, doc.domain)
            }
        };
        f.map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::{vector, Halfspace};

    pub(crate) fn abs() -> PWAFunction {
        PWAFunction::max(vec![Affine::new(vector![1], int(0)), Affine::new(vector![-1], int(0))], None).unwrap()
    }

    #[test]
    fn values() {
        let f = abs();
        assert_eq!(f.value(&vector![-3]), Some(int(3)));
        let g = PWAFunction::negmax(vec![Affine::new(vector![1], int(0)), Affine::new(vector![-1], int(0))], None).unwrap();
        assert_eq!(g.value(&vector![-3]), Some(int(-3)));
        let s = f.sum(&g).unwrap();
        for x in -3..=3 {
            assert_eq!(s.value(&vector![x]), Some(int(0)));
        }
        let dom = Polyhedron::from_halfspaces(1, &[Halfspace::new(vector![-1], int(0))]).unwrap();
        let ind = PWAFunction::indicator(dom).unwrap();
        assert_eq!(ind.value(&vector![-1]), None);
        assert_eq!(ind.value(&vector![2]), Some(int(0)));
    }

    #[test]
    fn epigraph_of_abs() {
        let cones = abs().epigraph_cones(&vector![0]).unwrap();
        assert_eq!(cones.len(), 1);
        assert_eq!(cones[0].rays(), &[vector![-1, 1], vector![1, 1]]);
        assert!(matches!(
            PWAFunction::indicator(Polyhedron::point(&vector![1])).unwrap().epigraph(&vector![0]),
            Err(Error::PointOutsideDomain(_))
        ));
    }

    #[test]
    fn serde_forms() {
        let f: PWAFunction = serde_json::from_str(
            r#"{"type":"negmax","pieces":[{"gradient":["1"],"offset":"0"},{"gradient":["-1"],"offset":"0"}]}"#,
        )
        .unwrap();
        assert_eq!(f.value(&vector![2]), Some(int(-2)));
        let back: PWAFunction = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        let s = abs().sum(&f).unwrap();
        let back: PWAFunction = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn dimension_cap() {
        let g = Affine::new(Vector::zeros(5), int(0));
        assert!(matches!(PWAFunction::max(vec![g], None), Err(Error::DimensionTooLarge { .. })));
    }
}
