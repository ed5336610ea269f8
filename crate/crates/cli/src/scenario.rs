//! Scenario documents: named inputs plus an ordered task list.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use varcone::oracle::SamplingParams;
use varcone::rational::{serde_rational, Rational};
use varcone::zoo::ZooCone;
use varcone::{PWAFunction, PolyhedralCone, Polyhedron, UnionSet, Vector};

pub const SUPPORTED_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, UnionSet>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, PWAFunction>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub polytopes: BTreeMap<String, Polyhedron>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cones: BTreeMap<String, ZooCone>,
    pub tasks: Vec<Task>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Holds,
    Fails,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Task {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub op: Op,
    #[serde(default)]
    pub expect: Expect,
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn default_k_max() -> usize {
    10
}

fn default_grid() -> u32 {
    64
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "snake_case", deny_unknown_fields)]
pub enum Op {
    /// Exact Clarke tangent cone, optionally compared with an expected cone.
    ClarkeTangentCone {
        set: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect_cone: Option<PolyhedralCone>,
    },
    ClarkeNormalCone {
        set: String,
    },
    /// Sampled Clarke tangency of each direction against the exact cone.
    ClarkeMembership {
        set: String,
        directions: Vec<Vector>,
        params: SamplingParams,
    },
    /// Sampled uniform-tangent-set test of a direction set.
    CheckUts {
        set: String,
        directions: Vec<Vector>,
        params: SamplingParams,
        #[serde(default)]
        sequential: bool,
    },
    TangentialIntersection {
        a: String,
        b: String,
    },
    NormalIntersection {
        a: String,
        b: String,
    },
    TransversalityRadius {
        a: String,
        b: String,
        #[serde(default)]
        plus: bool,
    },
    StrongTransversality {
        a: String,
        b: String,
        #[serde(default = "one", with = "serde_rational")]
        radius: Rational,
    },
    WitnessSearch {
        a: String,
        b: String,
        x_a: Vector,
        x_b: Vector,
        #[serde(with = "serde_rational")]
        eps: Rational,
        #[serde(default = "one", with = "serde_rational")]
        radius: Rational,
    },
    Hypertangent {
        set: String,
        direction: Vector,
        #[serde(default = "default_grid")]
        grid: u32,
    },
    PolarSandwich {
        a: String,
        b: String,
    },
    ClosednessProbe {
        z1: String,
        z2: String,
        w: Vector,
        #[serde(default = "default_k_max")]
        k_max: usize,
    },
    Subdifferential {
        f: String,
        x0: Vector,
    },
    Qualification {
        f1: String,
        f2: String,
        x0: Vector,
    },
    SumRule {
        f1: String,
        f2: String,
        x0: Vector,
    },
    IntermediateInclusion {
        f1: String,
        f2: String,
        x0: Vector,
    },
}

impl Op {
    pub fn name(&self) -> &'static str {
        match self {
            Op::ClarkeTangentCone { .. } => "clarke_tangent_cone",
            Op::ClarkeNormalCone { .. } => "clarke_normal_cone",
            Op::ClarkeMembership { .. } => "clarke_membership",
            Op::CheckUts { .. } => "check_uts",
            Op::TangentialIntersection { .. } => "tangential_intersection",
            Op::NormalIntersection { .. } => "normal_intersection",
            Op::TransversalityRadius { .. } => "transversality_radius",
            Op::StrongTransversality { .. } => "strong_transversality",
            Op::WitnessSearch { .. } => "witness_search",
            Op::Hypertangent { .. } => "hypertangent",
            Op::PolarSandwich { .. } => "polar_sandwich",
            Op::ClosednessProbe { .. } => "closedness_probe",
            Op::Subdifferential { .. } => "subdifferential",
            Op::Qualification { .. } => "qualification",
            Op::SumRule { .. } => "sum_rule",
            Op::IntermediateInclusion { .. } => "intermediate_inclusion",
        }
    }

    /// Demonstrations report data but certify nothing.
    pub fn is_demonstration(&self) -> bool {
        matches!(
            self,
            Op::ClarkeNormalCone { .. }
                | Op::Hypertangent { .. }
                | Op::ClosednessProbe { .. }
                | Op::Subdifferential { .. }
                | Op::ClarkeTangentCone { expect_cone: None, .. }
        )
    }

    fn references(&self) -> Vec<(Kind, &str)> {
        use Kind::*;
        match self {
            Op::ClarkeTangentCone { set, .. }
            | Op::ClarkeNormalCone { set }
            | Op::ClarkeMembership { set, .. }
            | Op::CheckUts { set, .. }
            | Op::Hypertangent { set, .. } => vec![(Set, set)],
            Op::TangentialIntersection { a, b }
            | Op::NormalIntersection { a, b }
            | Op::TransversalityRadius { a, b, .. }
            | Op::StrongTransversality { a, b, .. }
            | Op::WitnessSearch { a, b, .. } => vec![(Set, a), (Set, b)],
            Op::PolarSandwich { a, b } => vec![(Polytope, a), (Polytope, b)],
            Op::ClosednessProbe { z1, z2, .. } => vec![(Cone, z1), (Cone, z2)],
            Op::Subdifferential { f, .. } => vec![(Function, f)],
            Op::Qualification { f1, f2, .. } | Op::SumRule { f1, f2, .. } | Op::IntermediateInclusion { f1, f2, .. } => {
                vec![(Function, f1), (Function, f2)]
            }
        }
    }

    pub fn seed_mut(&mut self) -> Option<&mut u64> {
        match self {
            Op::ClarkeMembership { params, .. } | Op::CheckUts { params, .. } => Some(&mut params.seed),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Set,
    Function,
    Polytope,
    Cone,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Set => "set",
            Kind::Function => "function",
            Kind::Polytope => "polytope",
            Kind::Cone => "cone",
        }
    }
}

impl Scenario {
    /// Checks the version, every reference and every dimension.
    pub fn validate(&self, max_dim: usize) -> Result<(), String> {
        if self.version != SUPPORTED_VERSION {
            return Err(format!("unsupported scenario version {} (expected {SUPPORTED_VERSION})", self.version));
        }
        let dims = self
            .sets
            .iter()
            .map(|(n, s)| ("set", n, s.dim()))
            .chain(self.functions.iter().map(|(n, f)| ("function", n, f.dim())))
            .chain(self.polytopes.iter().map(|(n, p)| ("polytope", n, p.dim())))
            .chain(self.cones.iter().map(|(n, c)| ("cone", n, c.dim())));
        for (kind, name, dim) in dims {
            if dim > max_dim {
                return Err(format!("{kind} `{name}` has dimension {dim}, above --max-dim {max_dim}"));
            }
        }
        for (i, task) in self.tasks.iter().enumerate() {
            for (kind, name) in task.op.references() {
                let found = match kind {
                    Kind::Set => self.sets.contains_key(name),
                    Kind::Function => self.functions.contains_key(name),
                    Kind::Polytope => self.polytopes.contains_key(name),
                    Kind::Cone => self.cones.contains_key(name),
                };
                if !found {
                    return Err(format!("tasks[{i}] ({}): unknown {} `{name}`", task.op.name(), kind.label()));
                }
            }
        }
        Ok(())
    }
}

/// Parses a scenario, reporting the failing field path and position.
pub fn parse(text: &str) -> Result<Scenario, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        format!("line {} column {}: at `{path}`: {inner}", inner.line(), inner.column())
    })
}
