//! Sampling testers for the epsilon-delta-lambda tangency definitions.
//!
//! Every trial draws its own ChaCha stream from `(seed, trial index)`, so a
//! verdict is independent of the execution mode and replays bit-for-bit.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::par::ExecMode;
use crate::rational::{self, int, ratio, serde_rational, Rational};
use crate::{UnionSet, Vector};

/// A closed set given by exact membership.
pub trait MembershipOracle: Sync {
    fn dim(&self) -> usize;

    fn contains(&self, p: &Vector) -> bool;

    fn description(&self) -> String;

    /// Whether the closed ball `center + sqrt(radius_sq) B` meets the set, when
    /// this is exactly decidable.
    fn ball_meets(&self, _center: &Vector, _radius_sq: &Rational) -> Option<bool> {
        None
    }

    /// A point of the set in `x0 + delta B`, drawn with a bias towards
    /// boundaries. `None` defers to rejection sampling.
    fn sample_near(&self, _x0: &Vector, _delta: &Rational, _rng: &mut ChaCha8Rng) -> Option<Vector> {
        None
    }
}

impl MembershipOracle for UnionSet {
    fn dim(&self) -> usize {
        UnionSet::dim(self)
    }

    fn contains(&self, p: &Vector) -> bool {
        UnionSet::contains(self, p)
    }

    fn description(&self) -> String {
        format!("union of {} polyhedral cones at {}", self.pieces().len(), self.basepoint())
    }

    fn ball_meets(&self, center: &Vector, radius_sq: &Rational) -> Option<bool> {
        let local = center - self.basepoint();
        if self.contains_local(&local) {
            return Some(true);
        }
        Some(self.pieces().iter().any(|k| k.distance_squared(&local) <= *radius_sq))
    }

    fn sample_near(&self, x0: &Vector, delta: &Rational, rng: &mut ChaCha8Rng) -> Option<Vector> {
        let piece = &self.pieces()[rng.random_range(0..self.pieces().len())];
        let gens = piece.generators();
        let offset = x0 - self.basepoint();
        // Stay on a face: one generator half the time, a random subset otherwise.
        let mut d = Vector::zeros(self.dim());
        if !gens.is_empty() {
            if rng.random_bool(0.5) {
                d = gens[rng.random_range(0..gens.len())].clone();
            } else {
                for g in &gens {
                    if rng.random_bool(0.5) {
                        d = d.add_scaled(&ratio(rng.random_range(1..=16), 16), g);
                    }
                }
            }
        }
        let n2 = d.norm_squared();
        if !n2.is_zero() {
            let norm = rational::sqrt_upper(&n2, 16);
            let frac = ratio(rng.random_range(1..=16), 16);
            d = d.scale(&(delta * frac / norm));
        }
        let p = &(self.basepoint() + &offset) + &d;
        // Only meaningful when the basepoint is x0; otherwise fall back.
        (offset.is_zero() && self.contains(&p)).then_some(p)
    }
}

/// A membership predicate supplied as a closure.
pub struct FnOracle<F> {
    pub dim: usize,
    pub description: String,
    pub predicate: F,
}

impl<F: Fn(&Vector) -> bool + Sync> MembershipOracle for FnOracle<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, p: &Vector) -> bool {
        (self.predicate)(p)
    }

    fn description(&self) -> String {
        self.description.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    #[serde(with = "serde_rational")]
    pub delta: Rational,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
    pub trials: usize,
    pub seed: u64,
}

impl SamplingParams {
    pub fn new(eps: Rational, delta: Rational, lambda: Rational, trials: usize, seed: u64) -> Self {
        SamplingParams { eps, delta, lambda, trials, seed }
    }

    fn validate(&self) -> Result<()> {
        for (name, q) in [("eps", &self.eps), ("delta", &self.delta), ("lambda", &self.lambda)] {
            if !q.is_positive() {
                return Err(Error::Input(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Failed,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: Vector,
    pub v: Vector,
    #[serde(with = "serde_rational")]
    pub t: Rational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub sampled_points: usize,
    pub starved_trials: usize,
    pub triples: usize,
    pub undecided_triples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub parameters: SamplingParams,
    pub status: Status,
    /// Present exactly when `status` is `Failed`; verified exactly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Whether ball tests were decided exactly rather than by pattern search.
    pub exact: bool,
    pub coverage: Coverage,
}

impl OracleVerdict {
    pub fn passed(&self) -> bool {
        self.status == Status::Passed
    }
}

/// Geometric grid `lambda * 2^-j` of time steps.
pub fn time_grid(lambda: &Rational, steps: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(steps);
    let mut t = lambda.clone();
    for _ in 0..steps {
        out.push(t.clone());
        t /= int(2);
    }
    out
}

const UNIFORM_STEPS: usize = 6;
const SEQUENTIAL_STEPS: usize = 13;
const SEQUENTIAL_TAIL: usize = 3;
const REJECTION_ATTEMPTS: usize = 64;
const CHUNK: usize = 64;

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Direction for a trial: the vertices first, then random convex combinations.
fn sample_direction(d: &[Vector], trial: usize, rng: &mut ChaCha8Rng) -> Vector {
    if trial < d.len() {
        return d[trial].clone();
    }
    let weights: Vec<i64> = d.iter().map(|_| rng.random_range(0..=8)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return d[rng.random_range(0..d.len())].clone();
    }
    d.iter()
        .zip(&weights)
        .fold(Vector::zeros(d[0].dim()), |acc, (v, &w)| acc.add_scaled(&ratio(w, total), v))
}

fn sample_point(oracle: &dyn MembershipOracle, x0: &Vector, delta: &Rational, rng: &mut ChaCha8Rng) -> Option<Vector> {
    if rng.random_range(0..32) == 0 && oracle.contains(x0) {
        return Some(x0.clone());
    }
    if let Some(p) = oracle.sample_near(x0, delta, rng) {
        return Some(p);
    }
    let dim = x0.dim();
    let d2 = delta * delta;
    for _ in 0..REJECTION_ATTEMPTS {
        let offset = Vector::new((0..dim).map(|_| delta * ratio(rng.random_range(-64..=64), 64)).collect());
        if offset.norm_squared() <= d2 {
            let p = x0 + &offset;
            if oracle.contains(&p) {
                return Some(p);
            }
        }
    }
    None
}

/// Low-discrepancy directions of norm at most one used when balls cannot be
/// decided exactly.
fn pattern(dim: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for i in 0..dim {
        out.push(Vector::unit(dim, i));
        out.push(-Vector::unit(dim, i));
        for j in i + 1..dim {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = Vector::zeros(dim);
                v[i] = ratio(si * 7, 10);
                v[j] = ratio(sj * 7, 10);
                out.push(v);
            }
        }
    }
    let half: Vec<Vector> = out.iter().map(|v| v.scale(&ratio(1, 2))).collect();
    out.extend(half);
    out
}

enum Ball {
    Meets,
    Misses,
    Unknown,
}

fn ball_test(oracle: &dyn MembershipOracle, center: &Vector, radius: &Rational, pattern: &[Vector]) -> Ball {
    if oracle.contains(center) {
        return Ball::Meets;
    }
    match oracle.ball_meets(center, &(radius * radius)) {
        Some(true) => Ball::Meets,
        Some(false) => Ball::Misses,
        None => {
            if pattern.iter().any(|p| oracle.contains(&center.add_scaled(radius, p))) {
                Ball::Meets
            } else {
                Ball::Unknown
            }
        }
    }
}

enum Trial {
    Starved,
    Pass { triples: usize },
    Fail { cx: Counterexample, triples: usize },
    Undecided { triples: usize, undecided: usize },
}

/// How one sampled pair `(x, v)` is judged over the time grid.
#[derive(Clone, Copy)]
enum Rule {
    /// Every grid time must hit the set.
    Uniform,
    /// The finest grid times must hit the set (a null sequence exists).
    Sequential,
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    oracle: &dyn MembershipOracle,
    x0: &Vector,
    d: &[Vector],
    params: &SamplingParams,
    grid: &[Rational],
    rule: Rule,
    pat: &[Vector],
    trial: usize,
) -> Trial {
    let mut rng = trial_rng(params.seed, trial);
    let v = sample_direction(d, trial, &mut rng);
    let Some(x) = sample_point(oracle, x0, &params.delta, &mut rng) else {
        return Trial::Starved;
    };
    let times: &[Rational] = match rule {
        Rule::Uniform => grid,
        Rule::Sequential => &grid[grid.len() - SEQUENTIAL_TAIL..],
    };
    let mut undecided = 0;
    for t in times {
        let center = x.add_scaled(t, &v);
        match ball_test(oracle, &center, &(t * &params.eps), pat) {
            Ball::Meets => {}
            Ball::Misses => {
                return Trial::Fail { cx: Counterexample { x, v, t: t.clone() }, triples: times.len() };
            }
            Ball::Unknown => undecided += 1,
        }
    }
    if undecided > 0 {
        Trial::Undecided { triples: times.len(), undecided }
    } else {
        Trial::Pass { triples: times.len() }
    }
}

fn run(
    oracle: &dyn MembershipOracle,
    x0: &Vector,
    d: &[Vector],
    params: &SamplingParams,
    rule: Rule,
    mode: ExecMode,
) -> Result<OracleVerdict> {
    params.validate()?;
    check_dim(oracle.dim(), x0.dim())?;
    for v in d {
        check_dim(oracle.dim(), v.dim())?;
    }
    let probe = Vector::zeros(oracle.dim());
    let exact = oracle.ball_meets(&probe, &Rational::one()).is_some();
    let mut verdict = OracleVerdict {
        parameters: params.clone(),
        status: Status::Passed,
        counterexample: None,
        exact,
        coverage: Coverage::default(),
    };
    if d.is_empty() {
        return Ok(verdict);
    }
    let grid = match rule {
        Rule::Uniform => time_grid(&params.lambda, UNIFORM_STEPS),
        Rule::Sequential => time_grid(&Rational::one(), SEQUENTIAL_STEPS),
    };
    let pat = pattern(oracle.dim());
    let mut any_undecided = false;
    let mut start = 0;
    while start < params.trials {
        let end = (start + CHUNK).min(params.trials);
        let results = mode.map_range(end - start, |i| run_trial(oracle, x0, d, params, &grid, rule, &pat, start + i));
        for r in results {
            let cov = &mut verdict.coverage;
            match r {
                Trial::Starved => cov.starved_trials += 1,
                Trial::Pass { triples } => {
                    cov.sampled_points += 1;
                    cov.triples += triples;
                }
                Trial::Undecided { triples, undecided } => {
                    cov.sampled_points += 1;
                    cov.triples += triples;
                    cov.undecided_triples += undecided;
                    any_undecided = true;
                }
                Trial::Fail { cx, triples } => {
                    cov.sampled_points += 1;
                    cov.triples += triples;
                    if verdict.counterexample.is_none() {
                        verdict.counterexample = Some(cx);
                    }
                }
            }
        }
        if verdict.counterexample.is_some() {
            verdict.status = Status::Failed;
            return Ok(verdict);
        }
        start = end;
    }
    if verdict.coverage.sampled_points == 0 {
        return Err(Error::SamplingStarved);
    }
    if any_undecided {
        verdict.status = Status::Inconclusive;
    }
    Ok(verdict)
}

/// Uniform tangent set test: for sampled `v ∈ co(d)`, `x ∈ S ∩ (x0 + δB)` and
/// grid times `t ∈ (0, λ]`, the ball `x + t(v + εB)` must meet `S`.
pub fn check_uts(
    oracle: &dyn MembershipOracle,
    x0: &Vector,
    d: &[Vector],
    params: &SamplingParams,
    mode: ExecMode,
) -> Result<OracleVerdict> {
    run(oracle, x0, d, params, Rule::Uniform, mode)
}

/// Sequence variant: only the finest times `2^-j` of a geometric grid
/// starting at one must hit the set. `params.lambda` is ignored.
pub fn check_uts_sequential(
    oracle: &dyn MembershipOracle,
    x0: &Vector,
    d: &[Vector],
    params: &SamplingParams,
    mode: ExecMode,
) -> Result<OracleVerdict> {
    run(oracle, x0, d, params, Rule::Sequential, mode)
}

/// Single-direction Clarke tangency test.
pub fn check_clarke_membership(
    oracle: &dyn MembershipOracle,
    x0: &Vector,
    v: &Vector,
    params: &SamplingParams,
    mode: ExecMode,
) -> Result<OracleVerdict> {
    check_uts(oracle, x0, std::slice::from_ref(v), params, mode)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceRow {
    pub parameters: SamplingParams,
    pub uniform: Status,
    pub sequential: Status,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub rows: Vec<EquivalenceRow>,
    /// `(eps, delta)` pairs where the sequential test passes but no grid
    /// `lambda` passes the uniform one.
    pub tensions: Vec<(String, String)>,
}

/// Runs both testers over a parameter grid and flags disagreements.
pub fn crosscheck_equivalence(
    oracle: &dyn MembershipOracle,
    x0: &Vector,
    d: &[Vector],
    grid: &[SamplingParams],
    mode: ExecMode,
) -> Result<EquivalenceReport> {
    let mut rows = Vec::with_capacity(grid.len());
    for p in grid {
        let uniform = check_uts(oracle, x0, d, p, mode)?.status;
        let sequential = check_uts_sequential(oracle, x0, d, p, mode)?.status;
        rows.push(EquivalenceRow { parameters: p.clone(), uniform, sequential });
    }
    let mut tensions = Vec::new();
    for r in &rows {
        let key = (&r.parameters.eps, &r.parameters.delta);
        if r.sequential != Status::Passed {
            continue;
        }
        let any_uniform = rows
            .iter()
            .any(|o| (&o.parameters.eps, &o.parameters.delta) == key && o.uniform == Status::Passed);
        let entry = (rational::format(key.0), rational::format(key.1));
        if !any_uniform && !tensions.contains(&entry) {
            tensions.push(entry);
        }
    }
    Ok(EquivalenceReport { rows, tensions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;
    use crate::PolyhedralCone;

    fn halfplane() -> UnionSet {
        UnionSet::cone(PolyhedralCone::from_constraints(2, &[vector![0, -1]], &[]).unwrap())
    }

    fn quadrants() -> UnionSet {
        let q1 = PolyhedralCone::from_constraints(2, &[vector![-1, 0], vector![0, -1]], &[]).unwrap();
        UnionSet::cones(vec![q1.clone(), q1.negated()]).unwrap()
    }

    fn params(trials: usize) -> SamplingParams {
        SamplingParams::new(ratio(1, 4), int(1), int(1), trials, 7)
    }

    fn origin() -> Vector {
        vector![0, 0]
    }

    #[test]
    fn halfplane_interior_and_exterior() {
        let s = halfplane();
        let up = check_uts(&s, &origin(), &[vector![0, 1]], &params(200), ExecMode::Sequential).unwrap();
        assert!(up.passed() && up.exact);
        let down = check_uts(&s, &origin(), &[vector![0, -1]], &params(200), ExecMode::Sequential).unwrap();
        assert_eq!(down.status, Status::Failed);
        let cx = down.counterexample.unwrap();
        assert!(s.contains(&cx.x));
        assert!(check_uts(&s, &origin(), &[vector![0, 0]], &params(50), ExecMode::Sequential).unwrap().passed());
        assert!(check_clarke_membership(&s, &origin(), &vector![1, 0], &params(100), ExecMode::Sequential)
            .unwrap()
            .passed());
    }

    #[test]
    fn quadrants_block_axis_directions() {
        let s = quadrants();
        let v = check_clarke_membership(&s, &origin(), &vector![1, 0], &params(300), ExecMode::Sequential).unwrap();
        assert_eq!(v.status, Status::Failed);
        let seq = check_uts_sequential(&s, &origin(), &[vector![1, 1]], &params(300), ExecMode::Sequential).unwrap();
        assert_eq!(seq.status, Status::Failed);
    }

    #[test]
    fn deterministic_across_modes() {
        let s = quadrants();
        let p = params(300);
        let a = check_uts(&s, &origin(), &[vector![1, 1], vector![1, 0]], &p, ExecMode::Sequential).unwrap();
        let b = check_uts(&s, &origin(), &[vector![1, 1], vector![1, 0]], &p, ExecMode::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn closure_oracle_is_inexact() {
        let disc = FnOracle {
            dim: 2,
            description: "upper halfplane".into(),
            predicate: |p: &Vector| !p[1].is_negative(),
        };
        let v = check_uts(&disc, &origin(), &[vector![0, 1]], &params(50), ExecMode::Sequential).unwrap();
        assert!(v.passed() && !v.exact);
        let v = check_uts(&disc, &origin(), &[vector![0, -1]], &params(50), ExecMode::Sequential).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
    }

    #[test]
    fn starved_sampling_errors() {
        let empty = FnOracle { dim: 2, description: "nothing".into(), predicate: |_: &Vector| false };
        assert_eq!(
            check_uts(&empty, &origin(), &[vector![0, 1]], &params(5), ExecMode::Sequential),
            Err(Error::SamplingStarved)
        );
    }

    #[test]
    fn equivalence_grid_has_no_tension() {
        let s = halfplane();
        let grid: Vec<SamplingParams> = [int(1), ratio(1, 4)]
            .iter()
            .map(|l| SamplingParams::new(ratio(1, 8), ratio(1, 2), l.clone(), 60, 3))
            .collect();
        let r = crosscheck_equivalence(&s, &origin(), &[vector![1, 1]], &grid, ExecMode::Sequential).unwrap();
        assert!(r.tensions.is_empty());
        assert!(r.rows.iter().all(|row| row.uniform == Status::Passed && row.sequential == Status::Passed));
    }
}
