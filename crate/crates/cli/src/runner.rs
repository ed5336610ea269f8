//! Executes scenario tasks and assembles reports.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use varcone::calculus::{transversality_radius, transversality_radius_plus, verify_polar_sandwich};
use varcone::clarke::{clarke_normal_cone, clarke_tangent_cone_with, verify_normal_intersection, verify_tangential_intersection};
use varcone::oracle::{check_clarke_membership, check_uts, check_uts_sequential, Status};
use varcone::rational::format as fmt_q;
use varcone::subdiff::{clarke_subdifferential, intermediate_inclusion_check, singular_qualification, sum_rule_check};
use varcone::transversality::{hypertangent_epsilon, strong_transversality, witness_search, StrongOutcome, UniformTangentSetCandidate};
use varcone::zoo::{sum_closedness_probe, ClosednessReport};
use varcone::{Error, ExecMode, PolyhedralCone};

use crate::scenario::{Expect, Op, Scenario, Task};

/// Largest share of inconclusive membership rows tolerated before a
/// membership sweep is itself inconclusive.
pub const MAX_INCONCLUSIVE_SHARE: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Holds,
    Fails,
    Inconclusive,
    Info,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    InputError,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub op: String,
    pub task: Value,
    pub outcome: Outcome,
    pub expect: Expect,
    pub verdict: Verdict,
    /// Decided by exact arithmetic rather than sampling.
    pub exact: bool,
    pub summary: String,
    pub result: Value,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub input_errors: usize,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub parallel: bool,
    pub tasks: Vec<TaskReport>,
    pub summary: Summary,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub parallel: bool,
}

struct Done {
    outcome: Outcome,
    exact: bool,
    summary: String,
    result: Value,
}

impl Done {
    fn new(holds: bool, exact: bool, summary: String, result: Value) -> Self {
        let outcome = if holds { Outcome::Holds } else { Outcome::Fails };
        Done { outcome, exact, summary, result }
    }

    fn info(summary: String, result: Value) -> Self {
        Done { outcome: Outcome::Info, exact: true, summary, result }
    }
}

fn show(q: &varcone::Rational) -> String {
    q.to_string()
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn describe_cone(c: &PolyhedralCone) -> String {
    if c.is_zero() {
        return "{0}".into();
    }
    if c.is_whole_space() {
        return format!("R^{}", c.dim());
    }
    let rays: Vec<String> = c.rays().iter().map(ToString::to_string).collect();
    let lines: Vec<String> = c.lineality().iter().map(ToString::to_string).collect();
    match (rays.is_empty(), lines.is_empty()) {
        (false, true) => format!("cone{{{}}}", rays.join(", ")),
        (true, false) => format!("span{{{}}}", lines.join(", ")),
        _ => format!("cone{{{}}} + span{{{}}}", rays.join(", "), lines.join(", ")),
    }
}

fn execute(s: &Scenario, op: &Op, mode: ExecMode) -> Result<Done, Error> {
    let set = |n: &str| &s.sets[n];
    let fun = |n: &str| &s.functions[n];
    Ok(match op {
        Op::ClarkeTangentCone { set: name, expect_cone } => {
            let t = clarke_tangent_cone_with(set(name), mode)?;
            let summary = format!("T = {}", describe_cone(&t));
            match expect_cone {
                Some(e) => Done::new(&t == e, true, summary, json!({ "cone": t, "expected": e })),
                None => Done::info(summary, json!({ "cone": t })),
            }
        }
        Op::ClarkeNormalCone { set: name } => {
            let n = clarke_normal_cone(set(name))?;
            Done::info(format!("N = {}", describe_cone(&n)), json!({ "cone": n }))
        }
        Op::ClarkeMembership { set: name, directions, params } => {
            let u = set(name);
            let t = clarke_tangent_cone_with(u, mode)?;
            let mut rows = Vec::with_capacity(directions.len());
            let (mut disagreements, mut inconclusive) = (0usize, 0usize);
            for v in directions {
                let exact = t.contains(v);
                let verdict = check_clarke_membership(u, u.basepoint(), v, params, mode)?;
                let agrees = match verdict.status {
                    Status::Passed => exact,
                    Status::Failed => !exact,
                    Status::Inconclusive => {
                        inconclusive += 1;
                        true
                    }
                };
                if !agrees {
                    disagreements += 1;
                }
                rows.push(json!({ "direction": v, "exact_member": exact, "agrees": agrees, "oracle": verdict }));
            }
            let share = if directions.is_empty() { 0.0 } else { inconclusive as f64 / directions.len() as f64 };
            let summary = format!(
                "{} directions, {disagreements} disagreements, {inconclusive} inconclusive",
                directions.len()
            );
            let result = json!({ "cone": t, "disagreements": disagreements, "inconclusive": inconclusive, "rows": rows });
            if disagreements == 0 && share > MAX_INCONCLUSIVE_SHARE {
                Done { outcome: Outcome::Inconclusive, exact: false, summary, result }
            } else {
                Done::new(disagreements == 0, false, summary, result)
            }
        }
        Op::CheckUts { set: name, directions, params, sequential } => {
            let u = set(name);
            let v = if *sequential {
                check_uts_sequential(u, u.basepoint(), directions, params, mode)?
            } else {
                check_uts(u, u.basepoint(), directions, params, mode)?
            };
            let outcome = match v.status {
                Status::Passed => Outcome::Holds,
                Status::Failed => Outcome::Fails,
                Status::Inconclusive => Outcome::Inconclusive,
            };
            let summary = format!("{:?} after {} sampled points", v.status, v.coverage.sampled_points);
            Done { outcome, exact: false, summary, result: to_value(&v) }
        }
        Op::TangentialIntersection { a, b } => {
            let r = verify_tangential_intersection(set(a), set(b))?;
            let summary = match &r.violation {
                None => "T_A ∩ T_B ⊆ T_(A∩B)".into(),
                Some(v) => format!("{v} is in T_A ∩ T_B but not in T_(A∩B)"),
            };
            Done::new(r.holds, true, summary, to_value(&r))
        }
        Op::NormalIntersection { a, b } => {
            let r = verify_normal_intersection(set(a), set(b))?;
            let ok = r.generators.iter().filter(|g| g.decomposition.is_some()).count();
            let summary = format!(
                "{ok}/{} generators of N_(A∩B) decompose; cones transversal: {}",
                r.generators.len(),
                r.hypothesis_holds
            );
            Done::new(r.all_decompose(), true, summary, to_value(&r))
        }
        Op::TransversalityRadius { a, b, plus } => {
            let (ta, tb) = (clarke_tangent_cone_with(set(a), mode)?, clarke_tangent_cone_with(set(b), mode)?);
            let r = if *plus { transversality_radius_plus(&ta, &tb)? } else { transversality_radius(&ta, &tb)? };
            let summary = match r.rho_squared() {
                Some(q) => format!("rho^2 >= {}", show(q)),
                None => "not transversal".into(),
            };
            Done::new(r.is_transversal(), true, summary, to_value(&r))
        }
        Op::StrongTransversality { a, b, radius } => {
            let da = UniformTangentSetCandidate::clarke_truncation(set(a).clone(), radius)?;
            let db = UniformTangentSetCandidate::clarke_truncation(set(b).clone(), radius)?;
            let r = strong_transversality(&da, &db)?;
            let summary = match &r {
                StrongOutcome::Certified(c) => format!("certified with rho^2 = {}", show(&c.rho_squared)),
                StrongOutcome::NotCertified { reason, .. } => reason.clone(),
            };
            Done::new(r.certificate().is_some(), true, summary, to_value(&r))
        }
        Op::WitnessSearch { a, b, x_a, x_b, eps, radius } => {
            let da = UniformTangentSetCandidate::clarke_truncation(set(a).clone(), radius)?;
            let db = UniformTangentSetCandidate::clarke_truncation(set(b).clone(), radius)?;
            let cert = match strong_transversality(&da, &db)? {
                StrongOutcome::Certified(c) => c,
                StrongOutcome::NotCertified { reason, .. } => {
                    return Ok(Done::new(false, true, format!("no certificate: {reason}"), Value::Null));
                }
            };
            match witness_search(&cert, x_a, x_b, eps) {
                Ok(rec) => {
                    let summary = format!("t = {}, decrease = {}", show(&rec.t), show(&rec.decrease));
                    Done::new(rec.verify(), true, summary, to_value(&rec))
                }
                Err(Error::NoWitness(msg)) => Done::new(false, true, msg, Value::Null),
                Err(e) => return Err(e),
            }
        }
        Op::Hypertangent { set: name, direction, grid } => match hypertangent_epsilon(set(name), direction, *grid) {
            Ok(e) => Done::info(format!("eps = {}", show(&e)), json!({ "epsilon": fmt_q(&e) })),
            Err(Error::NotHypertangent(v)) => Done::info(format!("{v} is not hypertangent"), json!({ "epsilon": null })),
            Err(e) => return Err(e),
        },
        Op::PolarSandwich { a, b } => {
            let r = verify_polar_sandwich(&s.polytopes[a], &s.polytopes[b])?;
            Done::new(r.all_hold(), true, format!("all four inclusions hold: {}", r.all_hold()), to_value(&r))
        }
        Op::ClosednessProbe { z1, z2, w, k_max } => {
            let r = sum_closedness_probe(&s.cones[z1], &s.cones[z2], w, *k_max)?;
            let summary = match &r {
                ClosednessReport::Closed { reason } => format!("closed: {reason}"),
                ClosednessReport::NotClosedEvidence { sequence, certificate, .. } => format!(
                    "not closed: {} approximation steps, final residual {}, certificate alpha = {}, beta = {}",
                    sequence.len(),
                    sequence.last().map(|s| show(&s.residual)).unwrap_or_default(),
                    show(&certificate.alpha),
                    show(&certificate.beta)
                ),
            };
            Done::info(summary, to_value(&r))
        }
        Op::Subdifferential { f, x0 } => {
            let d = clarke_subdifferential(fun(f), x0)?;
            let verts: Vec<String> = d.polytope.iter().map(ToString::to_string).collect();
            let summary = format!("co{{{}}} + {}", verts.join(", "), describe_cone(&d.singular_cone));
            Done::info(summary, to_value(&d))
        }
        Op::Qualification { f1, f2, x0 } => {
            let r = singular_qualification(fun(f1), fun(f2), x0)?;
            let summary = format!("singular intersection = {}", describe_cone(&r.intersection));
            Done::new(r.holds, true, summary, to_value(&r))
        }
        Op::SumRule { f1, f2, x0 } => {
            let r = sum_rule_check(fun(f1), fun(f2), x0)?;
            let ok = r.vertices.iter().filter(|v| v.decomposition.is_some()).count();
            let verts: Vec<String> = r.sum.polytope.iter().map(ToString::to_string).collect();
            let summary = format!(
                "subdifferential of the sum: co{{{}}}; {ok}/{} vertices decompose; hypotheses certified: {}",
                verts.join(", "),
                r.vertices.len(),
                r.hypotheses.certified()
            );
            Done::new(r.hypotheses.certified() && r.all_decompose(), true, summary, to_value(&r))
        }
        Op::IntermediateInclusion { f1, f2, x0 } => {
            let r = intermediate_inclusion_check(fun(f1), fun(f2), x0)?;
            let summary = format!(
                "tangent inclusion: {}, normal cone symmetric: {}",
                r.tangent_inclusion.holds, r.normal_cone_matches
            );
            Done::new(r.holds(), true, summary, to_value(&r))
        }
    })
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Input(_)
            | Error::DimensionMismatch { .. }
            | Error::DimensionTooLarge { .. }
            | Error::OriginMissing { .. }
            | Error::PointNotInSet(_)
            | Error::PointOutsideDomain(_)
            | Error::UnsupportedPair(_)
    )
}

fn run_task(s: &Scenario, index: usize, task: &Task, mode: ExecMode) -> TaskReport {
    let start = Instant::now();
    let done = execute(s, &task.op, mode);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (done, verdict) = match done {
        Ok(d) => {
            let verdict = match (d.outcome, task.expect) {
                (Outcome::Info, _) | (Outcome::Holds, Expect::Holds) | (Outcome::Fails, Expect::Fails) => Verdict::Pass,
                (Outcome::Inconclusive, _) => Verdict::Inconclusive,
                _ => Verdict::Fail,
            };
            (d, verdict)
        }
        Err(e) => {
            let verdict = if is_input_error(&e) {
                Verdict::InputError
            } else if matches!(e, Error::SamplingStarved) {
                Verdict::Inconclusive
            } else {
                Verdict::Fail
            };
            let outcome = if verdict == Verdict::Inconclusive { Outcome::Inconclusive } else { Outcome::Fails };
            (Done { outcome, exact: false, summary: format!("error: {e}"), result: json!({ "error": e.to_string() }) }, verdict)
        }
    };
    let echo = serde_json::to_value(&task.op).expect("tasks serialize");
    TaskReport {
        index,
        label: task.label.clone(),
        op: task.op.name().into(),
        task: echo,
        outcome: done.outcome,
        expect: task.expect,
        verdict,
        exact: done.exact,
        summary: done.summary,
        result: done.result,
        elapsed_ms,
    }
}

/// Runs every task in order. The scenario must already be validated.
pub fn run(scenario: &Scenario, opts: &RunOptions) -> Report {
    let mut scenario = scenario.clone();
    if let Some(seed) = opts.seed {
        for t in &mut scenario.tasks {
            if let Some(s) = t.op.seed_mut() {
                *s = seed;
            }
        }
    }
    let mode = if opts.parallel { ExecMode::best_available() } else { ExecMode::Sequential };
    let tasks = mode.map_range(scenario.tasks.len(), |i| run_task(&scenario, i, &scenario.tasks[i], mode));
    let count = |v: Verdict| tasks.iter().filter(|t| t.verdict == v).count();
    let (passed, failed, inconclusive, input_errors) =
        (count(Verdict::Pass), count(Verdict::Fail), count(Verdict::Inconclusive), count(Verdict::InputError));
    let exit_code = if input_errors > 0 {
        EXIT_INPUT
    } else if failed > 0 {
        EXIT_FAIL
    } else if inconclusive > 0 {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    };
    Report {
        scenario: scenario.name.clone(),
        parallel: opts.parallel,
        tasks,
        summary: Summary { passed, failed, inconclusive, input_errors, exit_code },
    }
}

impl Report {
    /// The report without timings, for run-to-run comparison.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for t in &mut r.tasks {
            t.elapsed_ms = 0.0;
        }
        r
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.scenario {
            out.push_str(&format!("scenario {name}\n"));
        }
        for t in &self.tasks {
            let verdict = match t.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Inconclusive => "INCONCLUSIVE",
                Verdict::InputError => "INPUT ERROR",
            };
            let label = t.label.as_deref().map(|l| format!(" [{l}]")).unwrap_or_default();
            let kind = if t.exact { "exact" } else { "sampled" };
            out.push_str(&format!(
                "#{} {}{label}: {verdict} ({:?}, expected {:?}, {kind}, {:.1} ms)\n    {}\n",
                t.index, t.op, t.outcome, t.expect, t.elapsed_ms, t.summary
            ));
        }
        let s = &self.summary;
        out.push_str(&format!(
            "{} passed, {} failed, {} inconclusive, {} input errors; exit {}\n",
            s.passed, s.failed, s.inconclusive, s.input_errors, s.exit_code
        ));
        out
    }
}
