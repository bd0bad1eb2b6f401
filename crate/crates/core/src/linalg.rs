//! Exact Gaussian elimination over the rationals.
//!
//! With exact arithmetic there is no need for magnitude-based pivoting, so
//! pivots are chosen purely to limit fill-in.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::Rational;

/// Solves `a * x = b` for square, nonsingular `a`.
///
/// Sparse LU with Markowitz pivot selection: each step picks the nonzero that
/// minimizes `(row count - 1) * (column count - 1)` among the remaining rows
/// and columns, which keeps fill-in low on the sparse blocks produced by
/// learning chains. Back substitution then runs over the dense right-hand side.
pub fn solve(a: &RatMatrix, b: &RatMatrix) -> Result<RatMatrix> {
    assert!(a.is_square(), "solve needs a square coefficient matrix");
    assert_eq!(a.rows(), b.rows(), "right-hand side has the wrong height");
    let n = a.rows();
    let m = b.cols();

    // coefficient rows and right-hand sides, both sparse
    let mut coef: Vec<BTreeMap<usize, Rational>> = (0..n)
        .map(|r| nonzeros(a.row(r)).collect())
        .collect();
    let mut rhs: Vec<BTreeMap<usize, Rational>> = (0..n)
        .map(|r| nonzeros(b.row(r)).collect())
        .collect();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (r, row) in coef.iter().enumerate() {
        for &c in row.keys() {
            col_rows[c].insert(r);
        }
    }
    let mut row_done = vec![false; n];
    let mut col_done = vec![false; n];
    let mut pivots = Vec::with_capacity(n);

    for _ in 0..n {
        let (pr, pc) = (0..n)
            .filter(|&c| !col_done[c])
            .flat_map(|c| col_rows[c].iter().map(move |&r| (r, c)))
            .min_by_key(|&(r, c)| ((coef[r].len() - 1) * (col_rows[c].len() - 1), c, r))
            .ok_or(Error::SingularBlock)?;
        row_done[pr] = true;
        col_done[pc] = true;
        let pivot_row = coef[pr].clone();
        let pivot_rhs = rhs[pr].clone();
        let pivot = pivot_row[&pc].clone();
        let targets: Vec<usize> = col_rows[pc].iter().copied().filter(|&r| r != pr).collect();
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        for r in targets {
            let factor = coef[r].remove(&pc).expect("column index out of sync") / &pivot;
            col_rows[pc].remove(&r);
            for (&c, x) in pivot_row.iter().filter(|(&c, _)| c != pc) {
                if axpy(&mut coef[r], c, &factor, x) {
                    col_rows[c].insert(r);
                } else {
                    col_rows[c].remove(&r);
                }
            }
            for (&c, x) in &pivot_rhs {
                axpy(&mut rhs[r], c, &factor, x);
            }
        }
        pivots.push((pr, pc));
    }

    let mut x: Vec<Vec<Rational>> = vec![Vec::new(); n];
    for &(r, c) in pivots.iter().rev() {
        let mut value = vec![Rational::zero(); m];
        for (&k, v) in &rhs[r] {
            value[k] = v.clone();
        }
        for (&j, a_rj) in coef[r].iter().filter(|(&j, _)| j != c) {
            for (k, xj) in x[j].iter().enumerate() {
                if !xj.is_zero() {
                    value[k] -= a_rj * xj;
                }
            }
        }
        let inv = coef[r][&c].recip();
        for v in value.iter_mut().filter(|v| !v.is_zero()) {
            *v *= &inv;
        }
        x[c] = value;
    }
    Ok(RatMatrix::from_fn(n, m, |r, c| x[r][c].clone()))
}

fn nonzeros(row: &[Rational]) -> impl Iterator<Item = (usize, Rational)> + '_ {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| (c, x.clone()))
}

/// `row[c] -= factor * x`; returns whether the entry is nonzero afterwards.
fn axpy(row: &mut BTreeMap<usize, Rational>, c: usize, factor: &Rational, x: &Rational) -> bool {
    let delta = factor * x;
    match row.entry(c) {
        Entry::Vacant(slot) => {
            slot.insert(-delta);
            true
        }
        Entry::Occupied(mut slot) => {
            *slot.get_mut() -= delta;
            if slot.get().is_zero() {
                slot.remove();
                false
            } else {
                true
            }
        }
    }
}

pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    solve(a, &RatMatrix::identity(a.rows()))
}

/// Basis of the right null space of `a`, one vector per free column of the
/// reduced row echelon form. Each basis vector has a 1 in its free column.
pub fn null_space(a: &RatMatrix) -> Vec<Vec<Rational>> {
    let (rows_n, cols_n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Rational>> = (0..rows_n).map(|r| a.row(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols_n {
        let Some(pivot) = (rank..rows_n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for c in col..cols_n {
                if !pivot_row[c].is_zero() {
                    row[c] -= &factor * &pivot_row[c];
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows_n {
            break;
        }
    }

    (0..cols_n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); cols_n];
            v[free] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][free].clone();
            }
            v
        })
        .collect()
}
