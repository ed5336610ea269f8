//! Closed convex polyhedral cones kept in both representations.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dd::{self, Generators};
use crate::error::{check_dim, Error, Result};
use crate::rational::Rational;
use crate::{linalg, Halfspace, Vector};

/// `{x : <f, x> <= 0 for f in facets, <e, x> = 0 for e in equalities}`
/// `= cone(rays) + span(lineality)`.
///
/// Both sides are canonical (primitive integer vectors, irredundant, sorted),
/// so structural equality coincides with set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyhedralCone {
    dim: usize,
    facets: Vec<Vector>,
    equalities: Vec<Vector>,
    rays: Vec<Vector>,
    lineality: Vec<Vector>,
}

impl PolyhedralCone {
    /// Cone cut out by homogeneous inequalities `<a, x> <= 0` and equalities `<e, x> = 0`.
    pub fn from_constraints(dim: usize, ineqs: &[Vector], eqs: &[Vector]) -> Result<Self> {
        for v in ineqs.iter().chain(eqs) {
            check_dim(dim, v.dim())?;
        }
        let v = dd::generators_of(dim, ineqs, eqs);
        let h = dd::generators_of(dim, &v.rays, &v.lines);
        Ok(Self::assemble(dim, h, v))
    }

    pub fn from_halfspaces(dim: usize, halfspaces: &[Halfspace]) -> Result<Self> {
        if let Some(h) = halfspaces.iter().find(|h| !h.is_homogeneous()) {
            return Err(Error::Input(format!(
                "cone halfspace {} <= {} does not pass through the origin",
                h.normal, h.offset
            )));
        }
        let normals: Vec<Vector> = halfspaces.iter().map(|h| h.normal.clone()).collect();
        Self::from_constraints(dim, &normals, &[])
    }

    /// `cone(rays) + span(lines)`.
    pub fn from_generators(dim: usize, rays: &[Vector], lines: &[Vector]) -> Result<Self> {
        for v in rays.iter().chain(lines) {
            check_dim(dim, v.dim())?;
        }
        let h = dd::generators_of(dim, rays, lines);
        let v = dd::generators_of(dim, &h.rays, &h.lines);
        Ok(Self::assemble(dim, h, v))
    }

    fn assemble(dim: usize, h: Generators, v: Generators) -> Self {
        PolyhedralCone {
            dim,
            facets: h.rays,
            equalities: h.lines,
            rays: v.rays,
            lineality: v.lines,
        }
    }

    pub fn full(dim: usize) -> Self {
        Self::from_constraints(dim, &[], &[]).expect("consistent dimensions")
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_generators(dim, &[], &[]).expect("consistent dimensions")
    }

    pub fn ray(v: &Vector) -> Self {
        Self::from_generators(v.dim(), std::slice::from_ref(v), &[]).expect("consistent dimensions")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    pub fn equalities(&self) -> &[Vector] {
        &self.equalities
    }

    pub fn rays(&self) -> &[Vector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[Vector] {
        &self.lineality
    }

    /// Rays plus both orientations of every lineality basis vector.
    pub fn generators(&self) -> Vec<Vector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(-l);
        }
        g
    }

    /// Facets plus both orientations of every equality, as homogeneous halfspaces.
    pub fn h_rep(&self) -> Vec<Halfspace> {
        let mut out: Vec<Halfspace> = self.facets.iter().cloned().map(Halfspace::through_origin).collect();
        for e in &self.equalities {
            out.push(Halfspace::through_origin(e.clone()));
            out.push(Halfspace::through_origin(-e));
        }
        out
    }

    /// Linear dimension of the cone.
    pub fn cone_dimension(&self) -> usize {
        self.dim - self.equalities.len()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equalities.is_empty()
    }

    pub fn is_whole_space(&self) -> bool {
        self.facets.is_empty() && self.equalities.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn contains(&self, x: &Vector) -> bool {
        debug_assert_eq!(x.dim(), self.dim);
        self.equalities.iter().all(|e| e.dot(x).is_zero())
            && self.facets.iter().all(|f| !f.dot(x).is_positive())
    }

    /// First violated constraint as a halfspace `<a, x> <= 0`, if any.
    pub fn violated_by(&self, x: &Vector) -> Option<Halfspace> {
        if let Some(f) = self.facets.iter().find(|f| f.dot(x).is_positive()) {
            return Some(Halfspace::through_origin(f.clone()));
        }
        self.equalities.iter().find_map(|e| {
            let v = e.dot(x);
            if v.is_positive() {
                Some(Halfspace::through_origin(e.clone()))
            } else if v.is_negative() {
                Some(Halfspace::through_origin(-e))
            } else {
                None
            }
        })
    }

    /// Is `x` in the interior (relative to the whole space)?
    pub fn contains_in_interior(&self, x: &Vector) -> bool {
        self.equalities.is_empty() && self.facets.iter().all(|f| f.dot(x).is_negative())
    }

    pub fn contains_cone(&self, other: &PolyhedralCone) -> bool {
        other.rays.iter().all(|r| self.contains(r))
            && other.lineality.iter().all(|l| self.contains(l) && self.contains(&-l))
    }

    /// A generator of `other` lying outside `self`, if any.
    pub fn uncovered_generator(&self, other: &PolyhedralCone) -> Option<Vector> {
        other.generators().into_iter().find(|g| !self.contains(g))
    }

    /// A point in the relative interior.
    pub fn relative_interior_point(&self) -> Vector {
        self.rays.iter().fold(Vector::zeros(self.dim), |acc, r| &acc + r)
    }

    /// `{y : <y, x> <= 0 for all x in self}`: the two representations swap.
    pub fn polar(&self) -> PolyhedralCone {
        PolyhedralCone {
            dim: self.dim,
            facets: self.rays.clone(),
            equalities: self.lineality.clone(),
            rays: self.facets.clone(),
            lineality: self.equalities.clone(),
        }
    }

    pub fn negated(&self) -> PolyhedralCone {
        let flip = |vs: &[Vector]| -> Vec<Vector> {
            let mut out: Vec<Vector> = vs.iter().map(|v| -v).collect();
            out.sort();
            out
        };
        PolyhedralCone {
            dim: self.dim,
            facets: flip(&self.facets),
            equalities: self.equalities.clone(),
            rays: flip(&self.rays),
            lineality: self.lineality.clone(),
        }
    }

    pub fn minkowski_sum(&self, other: &PolyhedralCone) -> Result<PolyhedralCone> {
        check_dim(self.dim, other.dim)?;
        let rays: Vec<Vector> = self.rays.iter().chain(&other.rays).cloned().collect();
        let lines: Vec<Vector> = self.lineality.iter().chain(&other.lineality).cloned().collect();
        PolyhedralCone::from_generators(self.dim, &rays, &lines)
    }

    pub fn intersect(&self, other: &PolyhedralCone) -> Result<PolyhedralCone> {
        check_dim(self.dim, other.dim)?;
        let ineqs: Vec<Vector> = self.facets.iter().chain(&other.facets).cloned().collect();
        let eqs: Vec<Vector> = self.equalities.iter().chain(&other.equalities).cloned().collect();
        PolyhedralCone::from_constraints(self.dim, &ineqs, &eqs)
    }

    /// Image under the coordinate embedding `x -> (x, free...)` into a larger
    /// space where the appended coordinates are unconstrained lines.
    pub fn with_free_coordinates(&self, extra: usize) -> PolyhedralCone {
        let dim = self.dim + extra;
        let pad = |v: &Vector| v.concat(&vec![Rational::zero(); extra]);
        let ineqs: Vec<Vector> = self.facets.iter().map(pad).collect();
        let eqs: Vec<Vector> = self.equalities.iter().map(pad).collect();
        PolyhedralCone::from_constraints(dim, &ineqs, &eqs).expect("consistent dimensions")
    }

    /// Tangent cone at a point `y` of the cone: the constraints active at `y`.
    pub fn tangent_at(&self, y: &Vector) -> PolyhedralCone {
        debug_assert!(self.contains(y));
        let active: Vec<Vector> = self.facets.iter().filter(|f| f.dot(y).is_zero()).cloned().collect();
        PolyhedralCone::from_constraints(self.dim, &active, &self.equalities).expect("consistent dimensions")
    }

    /// Exact squared Euclidean distance from `p` to the cone.
    ///
    /// The projection lies in the relative interior of some face, hence is the
    /// projection onto the span of linearly independent rays of that face (plus
    /// the lineality space) with nonnegative coefficients; enumerate those.
    pub fn distance_squared(&self, p: &Vector) -> Rational {
        if self.contains(p) {
            return Rational::zero();
        }
        let lin = linalg::orthogonal_basis(&self.lineality);
        let q = linalg::reject_from(p, &lin);
        let mut best = q.norm_squared();
        let k = self.rays.len();
        let max_size = self.cone_dimension() - self.lineality.len();
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
        while let Some((start, chosen)) = stack.pop() {
            for next in start..k {
                let mut subset = chosen.clone();
                subset.push(next);
                let cols: Vec<Vector> = subset.iter().map(|&i| self.rays[i].clone()).collect();
                if linalg::rank(&cols, self.dim) < cols.len() {
                    continue;
                }
                if let Some(d) = projection_distance(&cols, &q) {
                    if d < best {
                        best = d;
                    }
                }
                if subset.len() < max_size {
                    stack.push((next + 1, subset));
                }
            }
        }
        best
    }
}

/// Squared distance from `q` to its projection onto `span(cols)`, provided
/// that projection has nonnegative coefficients.
fn projection_distance(cols: &[Vector], q: &Vector) -> Option<Rational> {
    let k = cols.len();
    let gram: Vec<Vector> = cols
        .iter()
        .map(|a| {
            let mut row: Vec<Rational> = cols.iter().map(|b| a.dot(b)).collect();
            row.push(a.dot(q));
            Vector::new(row)
        })
        .collect();
    let (r, pivots) = linalg::rref(&gram, k + 1);
    if pivots.len() < k {
        return None;
    }
    let coeffs: Vec<Rational> = r.iter().map(|row| row[k].clone()).collect();
    if coeffs.iter().any(|c| c.is_negative()) {
        return None;
    }
    let proj = cols
        .iter()
        .zip(&coeffs)
        .fold(Vector::zeros(q.dim()), |acc, (c, w)| acc.add_scaled(w, c));
    Some((q - &proj).norm_squared())
}

impl fmt::Debug for PolyhedralCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolyhedralCone")
            .field("dim", &self.dim)
            .field("facets", &self.facets)
            .field("equalities", &self.equalities)
            .field("rays", &self.rays)
            .field("lineality", &self.lineality)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ConeDoc {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_rep: Option<Vec<Halfspace>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    v_rep: Option<Vec<Vector>>,
}

impl Serialize for PolyhedralCone {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ConeDoc { dim: self.dim, h_rep: Some(self.h_rep()), v_rep: Some(self.generators()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyhedralCone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ConeDoc::deserialize(d)?;
        let cone = match (&doc.h_rep, &doc.v_rep) {
            (Some(h), _) => PolyhedralCone::from_halfspaces(doc.dim, h),
            (None, Some(v)) => PolyhedralCone::from_generators(doc.dim, v, &[]),
            (None, None) => Err(Error::Input("cone needs h_rep or v_rep".into())),
        }
        .map_err(D::Error::custom)?;
        if let (Some(_), Some(v)) = (&doc.h_rep, &doc.v_rep) {
            let other = PolyhedralCone::from_generators(doc.dim, v, &[]).map_err(D::Error::custom)?;
            if other != cone {
                return Err(D::Error::custom("h_rep and v_rep describe different cones"));
            }
        }
        Ok(cone)
    }
}
