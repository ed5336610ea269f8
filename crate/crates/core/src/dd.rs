//! Double description: generators of `{x : A x <= 0, E x = 0}`.
//!
//! Incremental Motzkin scheme with the combinatorial adjacency test. The
//! lineality space is tracked explicitly and shrunk pivot-by-pivot, so inputs
//! need not describe pointed cones.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::linalg;
use crate::Vector;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct Generators {
    pub rays: Vec<Vector>,
    pub lines: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn with_capacity(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    v: Vector,
    tight: Bits,
}

pub(crate) fn generators_of(dim: usize, ineqs: &[Vector], eqs: &[Vector]) -> Generators {
    let mut lines = linalg::nullspace(eqs, dim);
    let base_dim = lines.len();
    let mut rays: Vec<Ray> = Vec::new();
    let m = ineqs.len();
    let mut processed = Bits::with_capacity(m);

    for (k, a) in ineqs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        if let Some(idx) = lines.iter().position(|l| !a.dot(l).is_zero()) {
            let l = lines.remove(idx);
            let al = a.dot(&l);
            for other in lines.iter_mut() {
                let c = other.dot(a) / &al;
                if !c.is_zero() {
                    *other = other.add_scaled(&-c, &l);
                }
            }
            for r in rays.iter_mut() {
                let c = r.v.dot(a) / &al;
                if !c.is_zero() {
                    r.v = r.v.add_scaled(&-c, &l).primitive();
                }
                r.tight.set(k);
            }
            let v = if al.is_negative() { l } else { -l };
            rays.push(Ray { v: v.primitive(), tight: processed.clone() });
            processed.set(k);
            continue;
        }

        let values: Vec<_> = rays.iter().map(|r| a.dot(&r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        if pos.is_empty() {
            for (r, val) in rays.iter_mut().zip(&values) {
                if val.is_zero() {
                    r.tight.set(k);
                }
            }
            processed.set(k);
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].tight.and(&rays[n].tight);
                if common.count() + 2 + lines.len() < base_dim {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(i, r)| {
                    i != p && i != n && common.is_subset_of(&r.tight)
                });
                if blocked {
                    continue;
                }
                let v = rays[n].v.scale(&values[p]).add_scaled(&-values[n].clone(), &rays[p].v);
                let mut tight = common;
                tight.set(k);
                fresh.push(Ray { v: v.primitive(), tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, val) in rays.into_iter().zip(values) {
            match val.partial_cmp(&Zero::zero()) {
                Some(Ordering::Less) => kept.push(r),
                Some(Ordering::Equal) => {
                    r.tight.set(k);
                    kept.push(r);
                }
                _ => {}
            }
        }
        kept.extend(fresh);
        rays = kept;
        processed.set(k);
    }

    canonical(dim, rays.into_iter().map(|r| r.v).collect(), lines)
}

/// Unique representation: lines in primitive RREF; rays orthogonal to the
/// lines, primitive, sorted, deduplicated.
pub(crate) fn canonical(dim: usize, rays: Vec<Vector>, lines: Vec<Vector>) -> Generators {
    let lines = linalg::canonical_span(&lines, dim);
    let ortho = linalg::orthogonal_basis(&lines);
    let mut rays: Vec<Vector> = rays
        .iter()
        .map(|r| linalg::reject_from(r, &ortho).primitive())
        .filter(|r| !r.is_zero())
        .collect();
    rays.sort();
    rays.dedup();
    Generators { rays, lines }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn orthant() {
        let g = generators_of(2, &[vector![-1, 0], vector![0, -1]], &[]);
        assert_eq!(g.rays, vec![vector![0, 1], vector![1, 0]]);
        assert!(g.lines.is_empty());
    }

    #[test]
    fn line_from_opposite_halfspaces() {
        let g = generators_of(2, &[vector![1, 0], vector![-1, 0]], &[]);
        assert!(g.rays.is_empty());
        assert_eq!(g.lines, vec![vector![0, 1]]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // x <= z, -x <= z, y <= z, -y <= z
        let ineqs = [vector![1, 0, -1], vector![-1, 0, -1], vector![0, 1, -1], vector![0, -1, -1]];
        let g = generators_of(3, &ineqs, &[]);
        assert_eq!(g.rays.len(), 4);
        for r in &g.rays {
            assert_eq!(r[0].abs(), r[2]);
            assert_eq!(r[1].abs(), r[2]);
        }
    }

    #[test]
    fn redundant_and_zero_rows() {
        let g = generators_of(2, &[vector![0, 0], vector![-1, 0], vector![-2, -1], vector![0, -1]], &[]);
        assert_eq!(g.rays, vec![vector![0, 1], vector![1, 0]]);
    }

    #[test]
    fn equalities_restrict() {
        let g = generators_of(3, &[vector![0, 0, -1]], &[vector![1, 0, 0]]);
        assert_eq!(g.rays, vec![vector![0, 0, 1]]);
        assert_eq!(g.lines, vec![vector![0, 1, 0]]);
    }
}
