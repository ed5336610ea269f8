use num_traits::Zero;
use proptest::prelude::*;
use varcone::clarke::{clarke_tangent_cone, clarke_tangent_cone_with};
use varcone::rational::{int, ratio};
use varcone::{lp_solve, ExecMode, Halfspace, LinearProgram, LpOutcome, PolyhedralCone, Rational, Sense, UnionSet, Vector};

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|c| Vector::from_ints(&c))
}

fn nonzero(dim: usize) -> impl Strategy<Value = Vector> {
    vector(dim).prop_filter("nonzero", |v| !v.is_zero())
}

fn cone(dim: usize) -> impl Strategy<Value = PolyhedralCone> {
    (prop::collection::vec(nonzero(dim), 1..=dim + 2), prop::collection::vec(nonzero(dim), 0..=1))
        .prop_map(move |(rays, lines)| PolyhedralCone::from_generators(dim, &rays, &lines).unwrap())
}

fn cone_pair() -> impl Strategy<Value = (PolyhedralCone, PolyhedralCone)> {
    (2usize..=4).prop_flat_map(|d| (cone(d), cone(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polar_is_an_involution(c in (2usize..=4).prop_flat_map(cone)) {
        prop_assert_eq!(c.polar().polar(), c.clone());
        for y in c.polar().generators() {
            for g in c.generators() {
                prop_assert!(y.dot(&g) <= Rational::zero());
            }
        }
    }

    #[test]
    fn h_and_v_representations_agree(c in (2usize..=4).prop_flat_map(cone)) {
        let again = PolyhedralCone::from_halfspaces(c.dim(), &c.h_rep()).unwrap();
        prop_assert_eq!(&again, &c);
        for g in c.generators() {
            prop_assert!(c.contains(&g));
        }
    }

    #[test]
    fn sum_and_intersection_are_dual((a, b) in cone_pair()) {
        prop_assert_eq!(a.minkowski_sum(&b).unwrap().polar(), a.polar().intersect(&b.polar()).unwrap());
        prop_assert_eq!(a.intersect(&b).unwrap().polar(), a.polar().minkowski_sum(&b.polar()).unwrap());
    }

    #[test]
    fn clarke_cone_is_a_convex_subset_of_the_union(
        pieces in (2usize..=3).prop_flat_map(|d| prop::collection::vec(cone(d), 1..=3))
    ) {
        let u = UnionSet::cones(pieces).unwrap();
        let seq = clarke_tangent_cone_with(&u, ExecMode::Sequential).unwrap();
        prop_assert_eq!(&seq, &clarke_tangent_cone_with(&u, ExecMode::Parallel).unwrap());
        for g in seq.generators() {
            prop_assert!(u.contains_local(&g));
        }
    }

    #[test]
    fn lp_matches_vertex_enumeration(
        rows in prop::collection::vec((nonzero(2), -4i64..=4), 0..5),
        objective in nonzero(2),
    ) {
        let mut constraints: Vec<Halfspace> = rows.iter().map(|(a, b)| Halfspace::new(a.clone(), int(*b))).collect();
        for i in 0..2 {
            constraints.push(Halfspace::new(Vector::unit(2, i), int(5)));
            constraints.push(Halfspace::new(-Vector::unit(2, i), int(5)));
        }
        let lp = LinearProgram { objective: objective.clone(), constraints: constraints.clone(), sense: Sense::Max };
        // Brute force: the optimum of a bounded 2-D LP sits on a pairwise line intersection.
        let mut best: Option<Rational> = None;
        for (i, h) in constraints.iter().enumerate() {
            for k in constraints.iter().skip(i + 1) {
                let (a, b) = (&h.normal, &k.normal);
                let det = &a[0] * &b[1] - &a[1] * &b[0];
                if det.is_zero() {
                    continue;
                }
                let x = (&h.offset * &b[1] - &k.offset * &a[1]) / &det;
                let y = (&a[0] * &k.offset - &b[0] * &h.offset) / &det;
                let p = Vector::new(vec![x, y]);
                if constraints.iter().all(|c| c.contains(&p)) {
                    let v = objective.dot(&p);
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
        }
        match (lp_solve(&lp).unwrap(), best) {
            (LpOutcome::Optimum { value, point }, Some(b)) => {
                prop_assert_eq!(value, b);
                prop_assert!(constraints.iter().all(|c| c.contains(&point)));
            }
            (LpOutcome::Infeasible, None) => {}
            (got, want) => prop_assert!(false, "lp {:?} vs brute force {:?}", got, want),
        }
    }
}

#[test]
fn clarke_cone_of_a_convex_cone_is_itself() {
    let c = PolyhedralCone::from_generators(2, &[Vector::from_ints(&[1, 0]), Vector::from_ints(&[1, 2])], &[]).unwrap();
    assert_eq!(clarke_tangent_cone(&UnionSet::cone(c.clone())).unwrap(), c);
    let t = c.tangent_at(&Vector::from_ratios(&[(1, 1), (0, 1)]));
    assert!(t.contains(&Vector::from_ints(&[-1, 0])));
    assert!(!t.contains(&Vector::from_ints(&[0, -1])));
    assert_eq!(c.distance_squared(&Vector::from_ints(&[0, -2])), int(4));
    assert_eq!(c.distance_squared(&Vector::from_ints(&[-1, 0])), int(1));
    assert_eq!(c.distance_squared(&Vector::from_ints(&[1, 1])), ratio(0, 1));
}
