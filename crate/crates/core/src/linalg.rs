//! Dense exact linear algebra on small row systems.

use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::Vector;

/// Reduced row echelon form of the given rows. Returns the nonzero rows and
/// their pivot columns.
pub fn rref(rows: &[Vector], dim: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|r| r.coords().to_vec()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Rational::one() / &m[row][col];
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = r[col].clone();
                for (x, p) in r[col..dim].iter_mut().zip(&pivot_row[col..dim]) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    (m.into_iter().map(Vector::new).collect(), pivots)
}

pub fn rank(rows: &[Vector], dim: usize) -> usize {
    rref(rows, dim).1.len()
}

/// Basis of `{x : <r, x> = 0 for every row r}`.
pub fn nullspace(rows: &[Vector], dim: usize) -> Vec<Vector> {
    let (r, pivots) = rref(rows, dim);
    let mut is_pivot = vec![false; dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..dim)
        .filter(|&free| !is_pivot[free])
        .map(|free| {
            let mut v = Vector::zeros(dim);
            v[free] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Canonical basis of the row span: RREF rows scaled to primitive integers.
pub fn canonical_span(rows: &[Vector], dim: usize) -> Vec<Vector> {
    rref(rows, dim).0.iter().map(Vector::primitive).collect()
}

/// Mutually orthogonal basis of the span (Gram-Schmidt without normalisation).
pub fn orthogonal_basis(rows: &[Vector]) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for r in rows {
        let mut v = r.clone();
        for b in &basis {
            let c = v.dot(b) / b.norm_squared();
            v = v.add_scaled(&-c, b);
        }
        if !v.is_zero() {
            basis.push(v.primitive());
        }
    }
    basis
}

/// Orthogonal projection of `v` onto the span of an orthogonal basis.
pub fn project_onto(v: &Vector, orthogonal: &[Vector]) -> Vector {
    let mut out = Vector::zeros(v.dim());
    for b in orthogonal {
        let c = v.dot(b) / b.norm_squared();
        out = out.add_scaled(&c, b);
    }
    out
}

/// Component of `v` orthogonal to the span of an orthogonal basis.
pub fn reject_from(v: &Vector, orthogonal: &[Vector]) -> Vector {
    let mut out = v.clone();
    for b in orthogonal {
        let c = out.dot(b) / b.norm_squared();
        out = out.add_scaled(&-c, b);
    }
    out
}

/// Solves `sum_j coeffs[j] * columns[j] = target` if a solution exists.
pub fn solve_combination(columns: &[Vector], target: &Vector) -> Option<Vec<Rational>> {
    let dim = target.dim();
    let k = columns.len();
    // Augmented system: one row per coordinate, one column per generator.
    let rows: Vec<Vector> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            Vector::new(row)
        })
        .collect();
    let (r, pivots) = rref(&rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[k].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector;

    #[test]
    fn nullspace_of_plane() {
        let ns = nullspace(&[vector![1, 1, 1]], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(v.dot(&vector![1, 1, 1]).is_zero());
        }
        assert_eq!(rank(&ns, 3), 2);
    }

    #[test]
    fn projection_and_solve() {
        let basis = orthogonal_basis(&[vector![1, 1, 0], vector![1, 0, 0]]);
        let p = project_onto(&vector![3, 5, 7], &basis);
        assert_eq!(p, vector![3, 5, 0]);
        assert_eq!(reject_from(&vector![3, 5, 7], &basis), vector![0, 0, 7]);
        let x = solve_combination(&[vector![1, 0], vector![1, 1]], &vector![3, 2]).unwrap();
        assert_eq!(x, vec![Rational::from_integer(1.into()), Rational::from_integer(2.into())]);
        assert!(solve_combination(&[vector![1, 1]], &vector![1, 0]).is_none());
    }
}
