//! Sign-vector cells of the central hyperplane arrangement of a union set.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{Problem, Relation};
use crate::par::ExecMode;
use crate::rational::Rational;
use crate::{linalg, UnionSet, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    /// Sign of `<h, x>` on the cell for every arrangement hyperplane `h`.
    pub signs: Vec<i8>,
    pub representative: Vector,
    /// Pieces containing the cell (as offsets from the basepoint).
    pub active: Vec<usize>,
}

/// All nonempty relatively open cells of the arrangement formed by every
/// facet and equality hyperplane of every piece.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDecomposition {
    pub hyperplanes: Vec<Vector>,
    /// Basis of the common lineality space of the arrangement.
    pub lineality: Vec<Vector>,
    pub cells: Vec<Cell>,
}

impl CellDecomposition {
    pub fn new(u: &UnionSet, mode: ExecMode) -> Self {
        let dim = u.dim();
        let mut hyperplanes: Vec<Vector> = u
            .pieces()
            .iter()
            .flat_map(|k| k.facets().iter().chain(k.equalities()))
            .map(orient)
            .collect();
        hyperplanes.sort();
        hyperplanes.dedup();
        let lineality = linalg::nullspace(&hyperplanes, dim);

        let root = Node { signs: Vec::new(), rep: Vector::zeros(dim) };
        let first = expand(&hyperplanes, dim, &root);
        let nested = mode.map(&first, |n| enumerate(&hyperplanes, dim, n.clone()));
        let cells = nested
            .into_iter()
            .flatten()
            .map(|n| {
                let active = (0..u.pieces().len()).filter(|&i| u.pieces()[i].contains(&n.rep)).collect();
                Cell { signs: n.signs, representative: n.rep, active }
            })
            .collect();
        CellDecomposition { hyperplanes, lineality, cells }
    }

    /// Cells lying inside the union.
    pub fn cells_in_set(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.active.is_empty())
    }
}

/// Sign-normalise so the first nonzero coordinate is positive.
fn orient(v: &Vector) -> Vector {
    let p = v.primitive();
    match p.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => -p,
        _ => p,
    }
}

#[derive(Clone)]
struct Node {
    signs: Vec<i8>,
    rep: Vector,
}

fn enumerate(hs: &[Vector], dim: usize, node: Node) -> Vec<Node> {
    if node.signs.len() == hs.len() {
        return vec![node];
    }
    expand(hs, dim, &node).into_iter().flat_map(|n| enumerate(hs, dim, n)).collect()
}

/// Feasible extensions of `node` by one more sign.
fn expand(hs: &[Vector], dim: usize, node: &Node) -> Vec<Node> {
    if node.signs.len() == hs.len() {
        return vec![node.clone()];
    }
    let h = &hs[node.signs.len()];
    let current = sign(&h.dot(&node.rep));
    let mut out = Vec::with_capacity(3);
    for s in [-1i8, 0, 1] {
        let mut signs = node.signs.clone();
        signs.push(s);
        let rep = if s == current { Some(node.rep.clone()) } else { realize(hs, dim, &signs) };
        if let Some(rep) = rep {
            out.push(Node { signs, rep });
        }
    }
    out
}

fn sign(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// A point with the prescribed signs; strict signs become `<= -1` / `>= 1`
/// (the cells are cones, so scaling is free).
fn realize(hs: &[Vector], dim: usize, signs: &[i8]) -> Option<Vector> {
    let mut p = Problem::new(dim);
    p.free = vec![true; dim];
    for (h, &s) in hs.iter().zip(signs) {
        let coefs = h.coords().to_vec();
        match s {
            -1 => p.push(coefs, Relation::Le, -Rational::one()),
            0 => p.push(coefs, Relation::Eq, Rational::zero()),
            _ => p.push(coefs, Relation::Ge, Rational::one()),
        }
    }
    p.feasible_point().map(Vector::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;
    use crate::PolyhedralCone;

    #[test]
    fn two_lines_give_nine_cells() {
        let q1 = PolyhedralCone::from_constraints(2, &[vector![-1, 0], vector![0, -1]], &[]).unwrap();
        let u = UnionSet::cones(vec![q1.clone(), q1.negated()]).unwrap();
        let d = CellDecomposition::new(&u, ExecMode::Sequential);
        assert_eq!(d.hyperplanes.len(), 2);
        assert_eq!(d.cells.len(), 9);
        // Q1 ∪ Q3 contains the origin, four half-axes and two open quadrants.
        assert_eq!(d.cells_in_set().count(), 7);
        for c in &d.cells {
            for (h, &s) in d.hyperplanes.iter().zip(&c.signs) {
                assert_eq!(sign(&h.dot(&c.representative)), s);
            }
        }
        assert_eq!(d, CellDecomposition::new(&u, ExecMode::Parallel));
    }

    #[test]
    fn lineality_is_tracked() {
        let up = PolyhedralCone::from_constraints(3, &[vector![0, -1, 0]], &[]).unwrap();
        let d = CellDecomposition::new(&UnionSet::cone(up), ExecMode::Sequential);
        assert_eq!(d.lineality.len(), 2);
        assert_eq!(d.cells.len(), 3);
    }
}
