use serde::Serialize;

use crate::qstate::Ket;
use crate::{Error, Result};

/// Optimal one-to-one pairing of two equally sized ket lists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetMatching {
    /// `assignment[i]` is the index in `b` paired with `a[i]`.
    pub assignment: Vec<usize>,
    pub total_distance: f64,
    /// Largest `‖a_i − b_σ(i)‖` in the optimal pairing.
    pub max_distance: f64,
}

/// Pairs `a` with `b` minimizing total Euclidean distance (Hungarian
/// algorithm, `O(n³)`).
pub fn match_sets(a: &[Ket], b: &[Ket]) -> Result<SetMatching> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch(format!("{} vs {} vectors", a.len(), b.len())));
    }
    if a.is_empty() {
        return Err(Error::Empty);
    }
    let n = a.len();
    let mut cost = vec![vec![0.0; n]; n];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            cost[i][j] = x.distance(y)?;
        }
    }
    let assignment = hungarian(&cost);
    let dists: Vec<f64> = assignment.iter().enumerate().map(|(i, &j)| cost[i][j]).collect();
    Ok(SetMatching {
        total_distance: dists.iter().sum(),
        max_distance: dists.iter().copied().fold(0.0, f64::max),
        assignment,
    })
}

/// Minimum-cost perfect matching on a square cost matrix; returns the column
/// assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    // 1-based potentials; column 0 is the virtual start
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut row_of = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[row_of[j] - 1] = j - 1;
    }
    assignment
}
