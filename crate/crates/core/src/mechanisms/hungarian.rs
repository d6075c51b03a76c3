//! Minimum-cost rectangular assignment (Kuhn-Munkres, shortest augmenting
//! path form with row/column potentials), `O(n² m)` for `n ≤ m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-to-column assignment. Exactly `min(rows, cols)` rows are assigned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub row_to_col: Vec<Option<usize>>,
}

impl Assignment {
    /// Sum of assigned costs, accumulated in row order.
    pub fn total<F: Scalar>(&self, cost: &[Vec<F>]) -> F {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| cost[r][c]))
            .fold(F::zero(), |acc, v| acc + v)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| (r, c)))
    }
}

/// Checks shape and entries, returning `(rows, cols)`.
pub(crate) fn validate_matrix<F: Scalar>(cost: &[Vec<F>]) -> Result<(usize, usize)> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    for (r, row) in cost.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::RaggedMatrix);
        }
        for (c, &v) in row.iter().enumerate() {
            if !v.is_finite() || v < F::zero() {
                return Err(Error::BadCost { row: r, col: c });
            }
        }
    }
    Ok((rows, cols))
}

pub(crate) fn transpose<F: Copy>(m: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    (0..cols).map(|c| m.iter().map(|row| row[c]).collect()).collect()
}

pub fn hungarian_solve<F: Scalar>(cost: &[Vec<F>]) -> Result<Assignment> {
    let (rows, cols) = validate_matrix(cost)?;
    if rows == 0 || cols == 0 {
        return Ok(Assignment {
            row_to_col: vec![None; rows],
        });
    }
    if rows <= cols {
        let row_to_col = solve_wide(cost, rows, cols).into_iter().map(Some).collect();
        Ok(Assignment { row_to_col })
    } else {
        let t = transpose(cost, cols);
        let mut row_to_col = vec![None; rows];
        for (c, r) in solve_wide(&t, cols, rows).into_iter().enumerate() {
            row_to_col[r] = Some(c);
        }
        Ok(Assignment { row_to_col })
    }
}

/// Assigns every one of `n` rows to a distinct column out of `m ≥ n`.
fn solve_wide<F: Scalar>(a: &[Vec<F>], n: usize, m: usize) -> Vec<usize> {
    let inf = F::infinity();
    // Index 0 is a sentinel column/row; real indices are 1-based.
    let mut u = vec![F::zero(); n + 1];
    let mut v = vec![F::zero(); m + 1];
    let mut col_owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        col_owner[0] = i;
        let mut j0 = 0usize;
        let mut min_slack = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = col_owner[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < min_slack[j] {
                    min_slack[j] = cur;
                    way[j] = j0;
                }
                if min_slack[j] < delta {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[col_owner[j]] = u[col_owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    min_slack[j] = min_slack[j] - delta;
                }
            }
            j0 = j1;
            if col_owner[j0] == 0 {
                break;
            }
        }
        // Augment along the alternating path.
        loop {
            let j1 = way[j0];
            col_owner[j0] = col_owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0usize; n];
    for j in 1..=m {
        if col_owner[j] != 0 {
            row_to_col[col_owner[j] - 1] = j - 1;
        }
    }
    row_to_col
}
