//! Named example sets, functions and cone pairs.

use crate::pwa::{Affine, PWAFunction};
use crate::rational::{int, ratio};
use crate::zoo::ZooCone;
use crate::{Halfspace, PolyhedralCone, Polyhedron, UnionSet, Vector};

fn cone2(ineqs: &[[i64; 2]]) -> PolyhedralCone {
    let ineqs: Vec<Vector> = ineqs.iter().map(|a| Vector::from_ints(a)).collect();
    PolyhedralCone::from_constraints(2, &ineqs, &[]).expect("planar cone")
}

/// `{y >= 0}`.
pub fn upper_halfplane() -> UnionSet {
    UnionSet::cone(cone2(&[[0, -1]]))
}

/// `{y <= x}`.
pub fn below_diagonal() -> UnionSet {
    UnionSet::cone(cone2(&[[-1, 1]]))
}

/// `{y >= 0, x + y >= 0}`.
pub fn wedge() -> UnionSet {
    UnionSet::cone(cone2(&[[0, -1], [-1, -1]]))
}

/// First and third closed quadrants.
pub fn quadrant_union() -> UnionSet {
    let q1 = cone2(&[[-1, 0], [0, -1]]);
    UnionSet::cones(vec![q1.clone(), q1.negated()]).expect("planar union")
}

/// `{y >= 0} ∪ {y <= x}`.
pub fn halfplane_union() -> UnionSet {
    UnionSet::cones(vec![cone2(&[[0, -1]]), cone2(&[[-1, 1]])]).expect("planar union")
}

/// The x-axis.
pub fn x_axis() -> UnionSet {
    UnionSet::cone(PolyhedralCone::from_constraints(2, &[], &[Vector::from_ints(&[0, 1])]).expect("planar line"))
}

/// The six planar sets at the origin.
pub fn sets() -> Vec<(&'static str, UnionSet)> {
    vec![
        ("upper-halfplane", upper_halfplane()),
        ("wedge", wedge()),
        ("quadrant-union", quadrant_union()),
        ("halfplane-union", halfplane_union()),
        ("below-diagonal", below_diagonal()),
        ("x-axis", x_axis()),
    ]
}

pub fn set(name: &str) -> Option<UnionSet> {
    sets().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s)
}

/// `per_side * 4` directions on the boundary of `[−1, 1]²`, evenly spaced.
pub fn square_grid(per_side: i64) -> Vec<Vector> {
    let step = |k: i64| -int(1) + ratio(2 * k, per_side);
    let mut out = Vec::with_capacity(4 * per_side as usize);
    for k in 0..per_side {
        let s = step(k);
        out.push(Vector::new(vec![s.clone(), int(-1)]));
        out.push(Vector::new(vec![int(1), s.clone()]));
        out.push(Vector::new(vec![-s.clone(), int(1)]));
        out.push(Vector::new(vec![int(-1), -s]));
    }
    out
}

/// The second-order cone in `R³` with the halfspace `{z <= x}`, whose polar
/// is a ray tangent to the cone, and the target `w` missed by the polar sum.
pub fn soc_tangent_pair() -> (ZooCone, ZooCone, Vector) {
    let soc = ZooCone::second_order(3).expect("dimension three");
    let half = PolyhedralCone::from_constraints(3, &[Vector::from_ints(&[-1, 0, 1])], &[]).expect("halfspace");
    (soc, ZooCone::Polyhedral { cone: half }, Vector::from_ints(&[0, 1, 0]))
}

pub fn abs() -> PWAFunction {
    let pieces = vec![Affine::new(Vector::from_ints(&[1]), int(0)), Affine::new(Vector::from_ints(&[-1]), int(0))];
    PWAFunction::max(pieces, None).expect("one-dimensional")
}

pub fn neg_abs() -> PWAFunction {
    let pieces = vec![Affine::new(Vector::from_ints(&[1]), int(0)), Affine::new(Vector::from_ints(&[-1]), int(0))];
    PWAFunction::negmax(pieces, None).expect("one-dimensional")
}

/// Indicator of `{x >= 0}` (`sign = 1`) or `{x <= 0}` (`sign = −1`).
pub fn half_line_indicator(sign: i64) -> PWAFunction {
    let dom = Polyhedron::from_halfspaces(1, &[Halfspace::new(Vector::from_ints(&[-sign]), int(0))]).expect("half-line");
    PWAFunction::indicator(dom).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clarke::clarke_tangent_cone;

    #[test]
    fn grid_has_distinct_boundary_points() {
        let g = square_grid(16);
        assert_eq!(g.len(), 64);
        let mut d = g.clone();
        d.sort();
        d.dedup();
        assert_eq!(d.len(), 64);
        assert!(g.iter().all(|v| v.norm_inf() == int(1)));
    }

    #[test]
    fn clarke_cones_of_the_sets() {
        let zero = PolyhedralCone::zero(2);
        for (name, s) in sets() {
            let t = clarke_tangent_cone(&s).unwrap();
            assert_eq!(t == zero, name == "quadrant-union", "{name}");
        }
        assert!(set("wedge").is_some() && set("nope").is_none());
    }
}
