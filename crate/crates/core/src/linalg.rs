//! Dense linear algebra over GF(2^l).

use crate::gf2e::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// One solution (free variables set to zero) and the rank of the system.
    Solved {
        solution: Vec<FieldElement>,
        rank: usize,
    },
    Inconsistent,
}

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot column of each nonzero row. Columns `< ncols` are eliminated; any
/// trailing columns are carried along.
pub fn row_reduce(field: &Field, rows: &mut [Vec<FieldElement>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x += field.mul(factor, y);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solves `A x = b` where `a` holds the rows of `A`.
pub fn solve(field: &Field, a: &[Vec<FieldElement>], b: &[FieldElement]) -> SolveOutcome {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let ncols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<FieldElement>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = row.clone();
            r.push(rhs);
            r
        })
        .collect();
    let pivots = row_reduce(field, &mut rows, ncols);
    let rank = pivots.len();
    if rows[rank..].iter().any(|row| !row[ncols].is_zero()) {
        return SolveOutcome::Inconsistent;
    }
    let mut solution = vec![FieldElement::ZERO; ncols];
    for (i, &c) in pivots.iter().enumerate() {
        solution[c] = rows[i][ncols];
    }
    SolveOutcome::Solved { solution, rank }
}

pub fn rank(field: &Field, rows: &[Vec<FieldElement>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut m = rows.to_vec();
    row_reduce(field, &mut m, ncols).len()
}
