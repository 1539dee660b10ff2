//! Dense two-phase simplex for small equality-constrained programs:
//! minimize `c^T z` subject to `A z = b`, `z >= 0`.
//!
//! The gauge computation needs only a handful of rows, so a plain tableau
//! with Bland's anti-cycling rule is adequate and keeps the code short.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimplexError {
    #[error("program is infeasible (phase-1 objective {0:.3e})")]
    Infeasible(f64),
    #[error("program is unbounded below")]
    Unbounded,
    #[error("pivot limit exceeded")]
    PivotLimit,
}

const EPS: f64 = 1e-10;

pub(crate) fn solve_min(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    c: &DVector<f64>,
) -> Result<f64, SimplexError> {
    let m = a.nrows();
    let n = a.ncols();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Columns n..n+m are phase-1 artificials; last column is the rhs.
    let mut t = DMatrix::<f64>::zeros(m, n + m + 1);
    for i in 0..m {
        let s = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[(i, j)] = s * a[(i, j)];
        }
        t[(i, n + i)] = 1.0;
        t[(i, n + m)] = s * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let phase1_cost = |j: usize| if j < n { 0.0 } else { 1.0 };
    iterate(&mut t, &mut basis, n + m, &phase1_cost)?;
    let obj1: f64 = (0..m).map(|i| phase1_cost(basis[i]) * t[(i, n + m)]).sum();
    if obj1 > 1e-7 {
        return Err(SimplexError::Infeasible(obj1));
    }

    // Drive any leftover artificial out of the basis; a row with no real
    // pivot candidate is redundant and can stay (its rhs is zero).
    for i in 0..m {
        if basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| t[(i, j)].abs() > EPS) {
                pivot(&mut t, &mut basis, i, j);
            }
        }
    }

    let phase2_cost = |j: usize| if j < n { c[j] } else { f64::INFINITY };
    iterate(&mut t, &mut basis, n, &phase2_cost)?;
    Ok((0..m)
        .map(|i| {
            if basis[i] < n {
                c[basis[i]] * t[(i, n + m)]
            } else {
                0.0
            }
        })
        .sum())
}

fn iterate(
    t: &mut DMatrix<f64>,
    basis: &mut [usize],
    candidate_cols: usize,
    cost: &dyn Fn(usize) -> f64,
) -> Result<(), SimplexError> {
    let m = t.nrows();
    let rhs_col = t.ncols() - 1;
    let max_pivots = 50 * (t.ncols() + m);
    for _ in 0..max_pivots {
        // Bland's rule: smallest-index column with negative reduced cost.
        let mut entering = None;
        for j in 0..candidate_cols {
            if basis.contains(&j) {
                continue;
            }
            let reduced = cost(j) - (0..m).map(|i| cost(basis[i]) * t[(i, j)]).sum::<f64>();
            if reduced < -EPS {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            return Ok(());
        };

        let mut leaving: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[(i, j)] > EPS {
                let ratio = t[(i, rhs_col)] / t[(i, j)];
                let better = match leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - EPS || (ratio < lr + EPS && basis[i] < basis[li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((i, _)) = leaving else {
            return Err(SimplexError::Unbounded);
        };
        pivot(t, basis, i, j);
    }
    Err(SimplexError::PivotLimit)
}

fn pivot(t: &mut DMatrix<f64>, basis: &mut [usize], row: usize, col: usize) {
    let m = t.nrows();
    let w = t.ncols();
    let p = t[(row, col)];
    for j in 0..w {
        t[(row, j)] /= p;
    }
    for i in 0..m {
        if i != row {
            let f = t[(i, col)];
            if f != 0.0 {
                for j in 0..w {
                    t[(i, j)] -= f * t[(row, j)];
                }
            }
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_a_known_program() {
        // min z1 + z2 subject to z1 - z2 = 1  ->  z = (1, 0), value 1
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let b = DVector::from_row_slice(&[1.0]);
        let c = DVector::from_row_slice(&[1.0, 1.0]);
        assert!((solve_min(&a, &b, &c).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negative_rhs_is_handled() {
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let b = DVector::from_row_slice(&[-2.0]);
        let c = DVector::from_row_slice(&[1.0, 1.0]);
        assert!((solve_min(&a, &b, &c).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn detects_infeasibility() {
        // z1 + z2 = -1 with z >= 0 is infeasible
        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let b = DVector::from_row_slice(&[-1.0]);
        let c = DVector::from_row_slice(&[1.0, 1.0]);
        assert!(matches!(
            solve_min(&a, &b, &c),
            Err(SimplexError::Infeasible(_))
        ));
    }

    #[test]
    fn detects_unboundedness() {
        // min -z1 with z1 - z2 = 0: push both to infinity
        let a = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let b = DVector::from_row_slice(&[0.0]);
        let c = DVector::from_row_slice(&[-1.0, 0.0]);
        assert!(matches!(
            solve_min(&a, &b, &c),
            Err(SimplexError::Unbounded)
        ));
    }
}
