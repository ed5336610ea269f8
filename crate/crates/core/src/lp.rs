//! Exact two-phase simplex over the rationals (Bland's rule, so it always
//! terminates).

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Result};
use crate::rational::{serde_rational, Rational};
use crate::{Halfspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

/// Optimise `<objective, x>` over the intersection of the constraint
/// halfspaces. Variables are free.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LinearProgram {
    pub objective: Vector,
    pub constraints: Vec<Halfspace>,
    pub sense: Sense,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LpOutcome {
    Optimum {
        #[serde(with = "serde_rational")]
        value: Rational,
        point: Vector,
    },
    Unbounded,
    Infeasible,
}

pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    let n = lp.objective.dim();
    for h in &lp.constraints {
        check_dim(n, h.dim())?;
    }
    let mut problem = Problem::new(n);
    problem.free = vec![true; n];
    for h in &lp.constraints {
        problem.push(h.normal.coords().to_vec(), Relation::Le, h.offset.clone());
    }
    problem.objective = match lp.sense {
        Sense::Min => lp.objective.coords().to_vec(),
        Sense::Max => lp.objective.coords().iter().map(|c| -c).collect(),
    };
    Ok(match problem.solve() {
        Solution::Optimal { x, value } => {
            let value = match lp.sense {
                Sense::Min => value,
                Sense::Max => -value,
            };
            LpOutcome::Optimum { value, point: Vector::new(x) }
        }
        Solution::Unbounded => LpOutcome::Unbounded,
        Solution::Infeasible => LpOutcome::Infeasible,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug)]
pub(crate) struct Row {
    coefs: Vec<Rational>,
    rel: Relation,
    rhs: Rational,
}

/// General-form LP used internally: minimise `objective . x` subject to rows,
/// with per-variable sign restriction (`free[j]` or `x_j >= 0`).
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub free: Vec<bool>,
    pub rows: Vec<Row>,
    pub objective: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Solution {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
    Infeasible,
}

impl Problem {
    pub fn new(nvars: usize) -> Self {
        Problem {
            free: vec![false; nvars],
            rows: Vec::new(),
            objective: vec![Rational::zero(); nvars],
        }
    }

    pub fn nvars(&self) -> usize {
        self.free.len()
    }

    pub fn push(&mut self, coefs: Vec<Rational>, rel: Relation, rhs: Rational) {
        debug_assert_eq!(coefs.len(), self.nvars());
        self.rows.push(Row { coefs, rel, rhs });
    }

    /// Feasible point, ignoring the objective.
    pub fn feasible_point(&self) -> Option<Vec<Rational>> {
        let mut p = self.clone();
        p.objective = vec![Rational::zero(); p.nvars()];
        match p.solve() {
            Solution::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn solve(&self) -> Solution {
        Tableau::build(self).run()
    }
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    ncols: usize,
    n_struct: usize,
    first_artificial: usize,
    /// For each original variable: (positive column, optional negative column).
    var_cols: Vec<(usize, Option<usize>)>,
    costs: Vec<Rational>,
}

impl Tableau {
    fn build(p: &Problem) -> Tableau {
        let mut var_cols = Vec::with_capacity(p.nvars());
        let mut col = 0;
        for &free in &p.free {
            if free {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            } else {
                var_cols.push((col, None));
                col += 1;
            }
        }
        let n_struct = col;
        let n_slack = p.rows.iter().filter(|r| r.rel != Relation::Eq).count();
        let m = p.rows.len();

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut slack_of_row: Vec<Option<usize>> = Vec::with_capacity(m);
        let mut next_slack = n_struct;
        for r in &p.rows {
            let mut row = vec![Rational::zero(); n_struct + n_slack];
            for (j, c) in r.coefs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                row[pos] = c.clone();
                if let Some(neg) = neg {
                    row[neg] = -c;
                }
            }
            let mut rhs = r.rhs.clone();
            let slack = match r.rel {
                Relation::Eq => None,
                Relation::Le => {
                    row[next_slack] = Rational::one();
                    next_slack += 1;
                    Some(next_slack - 1)
                }
                Relation::Ge => {
                    row[next_slack] = -Rational::one();
                    next_slack += 1;
                    Some(next_slack - 1)
                }
            };
            if rhs.is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                rhs = -rhs;
            }
            row.push(rhs);
            slack_of_row.push(slack.filter(|&s| row[s].is_positive()));
            rows.push(row);
        }

        let first_artificial = n_struct + n_slack;
        let n_art = slack_of_row.iter().filter(|s| s.is_none()).count();
        let ncols = first_artificial + n_art;
        let mut basis = Vec::with_capacity(m);
        let mut next_art = first_artificial;
        let mut t = Vec::with_capacity(m);
        for (mut row, slack) in rows.into_iter().zip(slack_of_row) {
            let rhs = row.pop().unwrap();
            row.resize(ncols, Rational::zero());
            match slack {
                Some(s) => basis.push(s),
                None => {
                    row[next_art] = Rational::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            row.push(rhs);
            t.push(row);
        }

        let mut costs = vec![Rational::zero(); ncols];
        for (j, c) in p.objective.iter().enumerate() {
            let (pos, neg) = var_cols[j];
            costs[pos] = c.clone();
            if let Some(neg) = neg {
                costs[neg] = -c;
            }
        }
        Tableau { t, basis, ncols, n_struct, first_artificial, var_cols, costs }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational]) {
        let inv = Rational::one() / &self.t[r][c];
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.t[r].clone();
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                row[j] -= delta;
            }
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for &j in &nz {
                let delta = &f * &pivot_row[j];
                obj[j] -= delta;
            }
        }
        self.basis[r] = c;
    }

    fn objective_row(&self, costs: &[Rational]) -> Vec<Rational> {
        let mut obj: Vec<Rational> = costs.to_vec();
        obj.push(Rational::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            if costs[b].is_zero() {
                continue;
            }
            let cb = costs[b].clone();
            for (j, x) in self.t[i].iter().enumerate() {
                if !x.is_zero() {
                    obj[j] -= &cb * x;
                }
            }
        }
        obj
    }

    /// Runs simplex iterations on columns `< allowed`. Returns false on
    /// unboundedness.
    fn iterate(&mut self, obj: &mut [Rational], allowed: usize) -> bool {
        let rhs = self.ncols;
        loop {
            let Some(enter) = (0..allowed).find(|&j| obj[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.t[i][rhs] / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter, obj);
        }
    }

    fn run(mut self) -> Solution {
        let rhs = self.ncols;
        if self.first_artificial < self.ncols {
            let mut phase1 = vec![Rational::zero(); self.ncols];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = Rational::one();
            }
            let mut obj = self.objective_row(&phase1);
            let bounded = self.iterate(&mut obj, self.ncols);
            debug_assert!(bounded, "phase one is bounded below by zero");
            let infeasibility: Rational = self
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= self.first_artificial)
                .fold(Rational::zero(), |acc, (i, _)| acc + &self.t[i][rhs]);
            if infeasibility.is_positive() {
                return Solution::Infeasible;
            }
            // Drive remaining (zero-valued) artificials out of the basis.
            let mut i = 0;
            while i < self.t.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.t[i][j].is_zero()) {
                        Some(j) => {
                            let mut dummy = vec![Rational::zero(); self.ncols + 1];
                            self.pivot(i, j, &mut dummy);
                        }
                        None => {
                            // Redundant equality row.
                            self.t.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let costs = self.costs.clone();
        let mut obj = self.objective_row(&costs);
        if !self.iterate(&mut obj, self.first_artificial) {
            return Solution::Unbounded;
        }
        let mut col_value = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_value[b] = self.t[i][rhs].clone();
        }
        let x: Vec<Rational> = self
            .var_cols
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &col_value[pos] - &col_value[neg],
                None => col_value[pos].clone(),
            })
            .collect();
        let value = (0..self.n_struct).fold(Rational::zero(), |acc, j| acc + &costs[j] * &col_value[j]);
        Solution::Optimal { value, x }
    }
}

/// Finds `lambda >= 0` (and free `mu`) with `sum lambda_i g_i + sum mu_j l_j = target`.
pub(crate) fn conic_combination(
    rays: &[Vector],
    lines: &[Vector],
    target: &Vector,
) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let dim = target.dim();
    let nv = rays.len() + lines.len();
    let mut p = Problem::new(nv);
    for j in rays.len()..nv {
        p.free[j] = true;
    }
    for i in 0..dim {
        let coefs: Vec<Rational> = rays.iter().chain(lines).map(|g| g[i].clone()).collect();
        p.push(coefs, Relation::Eq, target[i].clone());
    }
    let x = p.feasible_point()?;
    let (a, b) = x.split_at(rays.len());
    Some((a.to_vec(), b.to_vec()))
}

/// Finds convex weights over `points` plus conic weights over `rays` reaching `target`.
pub(crate) fn convex_conic_combination(
    points: &[Vector],
    rays: &[Vector],
    lines: &[Vector],
    target: &Vector,
) -> Option<Vec<Rational>> {
    let dim = target.dim();
    let nv = points.len() + rays.len() + lines.len();
    let mut p = Problem::new(nv);
    for j in points.len() + rays.len()..nv {
        p.free[j] = true;
    }
    for i in 0..dim {
        let coefs: Vec<Rational> =
            points.iter().chain(rays).chain(lines).map(|g| g[i].clone()).collect();
        p.push(coefs, Relation::Eq, target[i].clone());
    }
    let mut ones = vec![Rational::zero(); nv];
    for c in ones.iter_mut().take(points.len()) {
        *c = Rational::one();
    }
    p.push(ones, Relation::Eq, Rational::one());
    p.feasible_point()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::vector;

    fn hs(n: Vector, b: i64) -> Halfspace {
        Halfspace::new(n, int(b))
    }

    #[test]
    fn one_dimensional_cases() {
        let at_least_one = hs(vector![-1], -1);
        let lp = LinearProgram { objective: vector![1], constraints: vec![at_least_one.clone()], sense: Sense::Min };
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Optimum { value: int(1), point: vector![1] });

        let lp = LinearProgram { objective: vector![1], constraints: vec![hs(vector![1], 0)], sense: Sense::Min };
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Unbounded);

        let lp = LinearProgram {
            objective: vector![1],
            constraints: vec![at_least_one, hs(vector![1], 0)],
            sense: Sense::Min,
        };
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn textbook_max() {
        // max 2x + 3y, 2x + y <= 18, 6x + 5y <= 60, 2x + 5y <= 40, x, y >= 0
        let lp = LinearProgram {
            objective: vector![2, 3],
            constraints: vec![
                hs(vector![2, 1], 18),
                hs(vector![6, 5], 60),
                hs(vector![2, 5], 40),
                hs(vector![-1, 0], 0),
                hs(vector![0, -1], 0),
            ],
            sense: Sense::Max,
        };
        assert_eq!(lp_solve(&lp).unwrap(), LpOutcome::Optimum { value: int(28), point: vector![5, 6] });
    }

    #[test]
    fn fractional_optimum() {
        // max x + y, 3x + y <= 2, x + 3y <= 2
        let lp = LinearProgram {
            objective: vector![1, 1],
            constraints: vec![hs(vector![3, 1], 2), hs(vector![1, 3], 2)],
            sense: Sense::Max,
        };
        match lp_solve(&lp).unwrap() {
            LpOutcome::Optimum { value, point } => {
                assert_eq!(value, int(1));
                assert_eq!(point, Vector::new(vec![ratio(1, 2), ratio(1, 2)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let lp = LinearProgram { objective: vector![1, 0], constraints: vec![hs(vector![1], 0)], sense: Sense::Min };
        assert!(lp_solve(&lp).is_err());
    }

    #[test]
    fn combinations() {
        let (lam, mu) = conic_combination(&[vector![1, 0]], &[vector![0, 1]], &vector![2, -3]).unwrap();
        assert_eq!(lam, vec![int(2)]);
        assert_eq!(mu, vec![int(-3)]);
        assert!(conic_combination(&[vector![1, 0]], &[], &vector![-1, 0]).is_none());
        let w = convex_conic_combination(&[vector![0, 0], vector![2, 0]], &[], &[], &vector![1, 0]).unwrap();
        assert_eq!(&w[0] + &w[1], int(1));
    }
}
