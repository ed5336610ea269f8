//! Locally conical sets: finite unions of polyhedral cones apexed at a basepoint.

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, check_dim, Error, Result, MAX_DIM};
use crate::{PolyhedralCone, Vector};

/// `x0 + (K_1 ∪ ... ∪ K_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionSet {
    basepoint: Vector,
    pieces: Vec<PolyhedralCone>,
}

impl UnionSet {
    pub fn new(basepoint: Vector, pieces: Vec<PolyhedralCone>) -> Result<Self> {
        Self::with_cap(basepoint, pieces, MAX_DIM)
    }

    /// Like [`UnionSet::new`] with an explicit dimension cap.
    pub fn with_cap(basepoint: Vector, pieces: Vec<PolyhedralCone>, max_dim: usize) -> Result<Self> {
        check_cap(basepoint.dim(), max_dim)?;
        if pieces.is_empty() {
            return Err(Error::Input("a union set needs at least one piece".into()));
        }
        for p in &pieces {
            check_dim(basepoint.dim(), p.dim())?;
        }
        let mut pieces = pieces;
        pieces.sort_by(|a, b| (a.facets(), a.equalities()).cmp(&(b.facets(), b.equalities())));
        pieces.dedup();
        Ok(UnionSet { basepoint, pieces })
    }

    /// A single convex cone at the origin.
    pub fn cone(c: PolyhedralCone) -> Self {
        let x0 = Vector::zeros(c.dim());
        UnionSet { basepoint: x0, pieces: vec![c] }
    }

    /// A union of cones at the origin.
    pub fn cones(pieces: Vec<PolyhedralCone>) -> Result<Self> {
        let dim = pieces.first().ok_or_else(|| Error::Input("a union set needs at least one piece".into()))?.dim();
        Self::new(Vector::zeros(dim), pieces)
    }

    pub fn dim(&self) -> usize {
        self.basepoint.dim()
    }

    pub fn basepoint(&self) -> &Vector {
        &self.basepoint
    }

    pub fn pieces(&self) -> &[PolyhedralCone] {
        &self.pieces
    }

    pub fn is_convex_piece(&self) -> bool {
        self.pieces.len() == 1
    }

    pub fn contains(&self, p: &Vector) -> bool {
        let local = p - &self.basepoint;
        self.contains_local(&local)
    }

    /// Membership of `x0 + d`.
    pub fn contains_local(&self, d: &Vector) -> bool {
        self.pieces.iter().any(|k| k.contains(d))
    }

    /// Tangent cones, at `y`, of the pieces containing `y`.
    pub fn bouligand_cone_at(&self, y: &Vector) -> Result<Vec<PolyhedralCone>> {
        check_dim(self.dim(), y.dim())?;
        let local = y - &self.basepoint;
        let mut out: Vec<PolyhedralCone> =
            self.pieces.iter().filter(|k| k.contains(&local)).map(|k| k.tangent_at(&local)).collect();
        if out.is_empty() {
            return Err(Error::PointNotInSet(y.clone()));
        }
        out.dedup();
        Ok(out)
    }

    /// Pairwise piece intersections; both sets must share the basepoint.
    pub fn intersect(&self, other: &UnionSet) -> Result<UnionSet> {
        check_dim(self.dim(), other.dim())?;
        if self.basepoint != other.basepoint {
            return Err(Error::Input(format!(
                "basepoints differ: {} vs {}",
                self.basepoint, other.basepoint
            )));
        }
        let mut pieces = Vec::new();
        for a in &self.pieces {
            for b in &other.pieces {
                pieces.push(a.intersect(b)?);
            }
        }
        UnionSet::with_cap(self.basepoint.clone(), pieces, usize::MAX)
    }

    /// Same pieces, translated to a new basepoint.
    pub fn at(&self, basepoint: Vector) -> Result<UnionSet> {
        check_dim(self.dim(), basepoint.dim())?;
        Ok(UnionSet { basepoint, pieces: self.pieces.clone() })
    }
}

#[derive(Deserialize)]
struct UnionDoc {
    #[serde(default)]
    basepoint: Option<Vector>,
    pieces: Vec<PolyhedralCone>,
}

impl<'de> Deserialize<'de> for UnionSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = UnionDoc::deserialize(d)?;
        let dim = doc.pieces.first().map(PolyhedralCone::dim).ok_or_else(|| D::Error::custom("no pieces"))?;
        let x0 = doc.basepoint.unwrap_or_else(|| Vector::zeros(dim));
        UnionSet::with_cap(x0, doc.pieces, usize::MAX).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    fn orthant() -> PolyhedralCone {
        PolyhedralCone::from_constraints(2, &[vector![-1, 0], vector![0, -1]], &[]).unwrap()
    }

    #[test]
    fn bouligand_examples() {
        let u = UnionSet::cone(orthant());
        assert_eq!(u.bouligand_cone_at(&vector![0, 0]).unwrap(), vec![orthant()]);
        let at = u.bouligand_cone_at(&vector![1, 0]).unwrap();
        assert_eq!(at, vec![PolyhedralCone::from_constraints(2, &[vector![0, -1]], &[]).unwrap()]);
        assert!(matches!(u.bouligand_cone_at(&vector![-1, 0]), Err(Error::PointNotInSet(_))));

        let q3 = orthant().negated();
        let u = UnionSet::cones(vec![orthant(), q3]).unwrap();
        assert_eq!(u.bouligand_cone_at(&vector![1, 1]).unwrap(), vec![PolyhedralCone::full(2)]);
    }

    #[test]
    fn cap_and_validation() {
        let big = PolyhedralCone::full(7);
        assert!(matches!(UnionSet::new(Vector::zeros(7), vec![big]), Err(Error::DimensionTooLarge { .. })));
        assert!(UnionSet::new(Vector::zeros(2), vec![]).is_err());
        assert!(UnionSet::new(Vector::zeros(2), vec![PolyhedralCone::full(3)]).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let u = UnionSet::new(vector![1, 2], vec![orthant()]).unwrap();
        let back: UnionSet = serde_json::from_str(&serde_json::to_string(&u).unwrap()).unwrap();
        assert_eq!(back, u);
        assert!(back.contains(&vector![1, 5]));
        assert!(!back.contains(&vector![0, 5]));
    }
}
