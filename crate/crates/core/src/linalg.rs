//! Row reduction over `F_q`.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::{Fe, Field};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce(field: &Field, rows: &mut Vec<Vec<Fe>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][col]);
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let c = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Fe>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    row_reduce(field, &mut m, ncols).len()
}

/// Basis of `{v : M v = 0}`, one vector per free column in increasing order.
/// With no constraints this is the standard basis.
pub fn nullspace(field: &Field, constraints: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = constraints.to_vec();
    let pivots = row_reduce(field, &mut m, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Fe::ZERO; ncols];
        v[free] = Fe::ONE;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}
