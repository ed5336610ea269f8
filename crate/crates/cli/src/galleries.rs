//! Built-in scenarios.

use std::collections::BTreeMap;

use varcone::gallery;
use varcone::oracle::SamplingParams;
use varcone::rational::{int, ratio};
use varcone::zoo::ZooCone;
use varcone::{PolyhedralCone, Vector};

use crate::scenario::{Expect, Op, Scenario, Task, SUPPORTED_VERSION};

pub const NAMES: [(&str, &str); 6] = [
    ("quadrant-union-clarke-collapse", "Q1 ∪ Q3 at the origin: the Clarke tangent cone is {0}"),
    ("transversal-halfplanes", "{y >= 0} and {y <= x}: transversality, intersection properties, a decrease witness"),
    ("nontransversal-complements", "{y >= 0} and {y <= 0}: transversality fails, intersection properties survive"),
    ("soc-nonclosed-sum", "second-order cone plus a tangent halfspace: the polar sum is not closed"),
    ("abs-sum-rule", "|x| + (−|x|) and |x| + |x|: the Clarke sum rule via epigraph lifting"),
    ("indicator-qualification-failure", "opposing half-line indicators break the singular qualification"),
];

pub const SEED: u64 = 20240601;

fn task(label: &str, op: Op, expect: Expect) -> Task {
    Task { label: Some(label.into()), op, expect }
}

fn holds(label: &str, op: Op) -> Task {
    task(label, op, Expect::Holds)
}

fn fails(label: &str, op: Op) -> Task {
    task(label, op, Expect::Fails)
}

fn info(label: &str, op: Op) -> Task {
    holds(label, op)
}

fn base(name: &str) -> Scenario {
    let description = NAMES.iter().find(|(n, _)| *n == name).map(|(_, d)| d.to_string());
    Scenario {
        version: SUPPORTED_VERSION,
        name: Some(name.into()),
        description,
        sets: BTreeMap::new(),
        functions: BTreeMap::new(),
        polytopes: BTreeMap::new(),
        cones: BTreeMap::new(),
        tasks: Vec::new(),
    }
}

/// The finest oracle row: eps = 1/16, delta = 1/8, lambda = 1/16.
pub fn finest_params(trials: usize) -> SamplingParams {
    SamplingParams::new(ratio(1, 16), ratio(1, 8), ratio(1, 16), trials, SEED)
}

pub fn build(name: &str) -> Option<Scenario> {
    let mut s = base(name);
    let v = |x: &[i64]| Vector::from_ints(x);
    let s_str = |x: &str| x.to_string();
    match name {
        "quadrant-union-clarke-collapse" => {
            s.sets.insert(s_str("Q"), gallery::quadrant_union());
            s.tasks = vec![
                holds("exact cone", Op::ClarkeTangentCone { set: s_str("Q"), expect_cone: Some(PolyhedralCone::zero(2)) }),
                info("normal cone", Op::ClarkeNormalCone { set: s_str("Q") }),
                holds(
                    "oracle refutes the grid",
                    Op::ClarkeMembership { set: s_str("Q"), directions: gallery::square_grid(4), params: finest_params(500) },
                ),
            ];
        }
        "transversal-halfplanes" | "nontransversal-complements" => {
            let transversal = name == "transversal-halfplanes";
            s.sets.insert(s_str("A"), gallery::upper_halfplane());
            let b = if transversal {
                gallery::below_diagonal()
            } else {
                varcone::UnionSet::cone(PolyhedralCone::from_constraints(2, &[v(&[0, 1])], &[]).expect("halfplane"))
            };
            s.sets.insert(s_str("B"), b);
            let pair = || (s_str("A"), s_str("B"));
            let expect = if transversal { holds } else { fails };
            s.tasks = vec![
                expect("cone transversality", Op::TransversalityRadius { a: pair().0, b: pair().1, plus: false }),
                expect("strong transversality", Op::StrongTransversality { a: pair().0, b: pair().1, radius: int(1) }),
                holds("tangential intersection", Op::TangentialIntersection { a: pair().0, b: pair().1 }),
                holds("normal intersection", Op::NormalIntersection { a: pair().0, b: pair().1 }),
            ];
            if transversal {
                s.tasks.push(holds(
                    "decrease witness",
                    Op::WitnessSearch {
                        a: pair().0,
                        b: pair().1,
                        x_a: Vector::from_ratios(&[(0, 1), (1, 10)]),
                        x_b: Vector::from_ratios(&[(1, 10), (0, 1)]),
                        eps: ratio(1, 10),
                        radius: int(1),
                    },
                ));
            }
        }
        "soc-nonclosed-sum" => {
            let (soc, half, w) = gallery::soc_tangent_pair();
            s.cones.insert(s_str("K"), soc);
            s.cones.insert(s_str("H"), half);
            s.cones.insert(s_str("L"), ZooCone::Ray { direction: v(&[1, 0, 0]) });
            s.tasks = vec![
                info("non-closed polar sum", Op::ClosednessProbe { z1: s_str("K"), z2: s_str("H"), w: w.clone(), k_max: 10 }),
                info("closed control pair", Op::ClosednessProbe { z1: s_str("K"), z2: s_str("L"), w, k_max: 10 }),
            ];
        }
        "abs-sum-rule" => {
            s.functions.insert(s_str("abs"), gallery::abs());
            s.functions.insert(s_str("neg_abs"), gallery::neg_abs());
            let x0 = v(&[0]);
            let call = |f1: &str, f2: &str| (s_str(f1), s_str(f2), x0.clone());
            let (a, b, x) = call("abs", "neg_abs");
            let (c, d, y) = call("abs", "abs");
            s.tasks = vec![
                info("subdifferential of |x|", Op::Subdifferential { f: s_str("abs"), x0: x0.clone() }),
                info("subdifferential of −|x|", Op::Subdifferential { f: s_str("neg_abs"), x0: x0.clone() }),
                holds("sum rule |x| − |x|", Op::SumRule { f1: a.clone(), f2: b.clone(), x0: x.clone() }),
                holds("lifted structure |x| − |x|", Op::IntermediateInclusion { f1: a, f2: b, x0: x }),
                holds("sum rule |x| + |x|", Op::SumRule { f1: c.clone(), f2: d.clone(), x0: y.clone() }),
                holds("lifted structure |x| + |x|", Op::IntermediateInclusion { f1: c, f2: d, x0: y }),
            ];
        }
        "indicator-qualification-failure" => {
            s.functions.insert(s_str("ind_nonneg"), gallery::half_line_indicator(1));
            s.functions.insert(s_str("ind_nonpos"), gallery::half_line_indicator(-1));
            s.functions.insert(s_str("abs"), gallery::abs());
            s.functions.insert(s_str("neg_abs"), gallery::neg_abs());
            let x0 = v(&[0]);
            let q = |f1: &str, f2: &str| Op::Qualification { f1: s_str(f1), f2: s_str(f2), x0: x0.clone() };
            s.tasks = vec![
                fails("opposing indicators", q("ind_nonneg", "ind_nonpos")),
                holds("indicator and |x|", q("ind_nonneg", "abs")),
                holds("|x| and −|x|", q("abs", "neg_abs")),
                holds("|x| and |x|", q("abs", "abs")),
                holds("−|x| and −|x|", q("neg_abs", "neg_abs")),
            ];
        }
        _ => return None,
    }
    Some(s)
}

pub fn unknown_message(name: &str) -> String {
    let names: Vec<&str> = NAMES.iter().map(|(n, _)| *n).collect();
    format!("unknown gallery `{name}`; available: {}", names.join(", "))
}
