//! Minimum-cost assignment for centroid matching.

use crate::matrix::Matrix;

/// Solves the square assignment problem in O(n^3) via shortest augmenting
/// paths with potentials. Returns the column assigned to each row and the
/// total cost.
pub fn min_cost_assignment(cost: &Matrix) -> (Vec<usize>, f64) {
    let n = cost.rows();
    assert_eq!(n, cost.cols(), "cost matrix must be square");
    if n == 0 {
        return (Vec::new(), 0.0);
    }

    // 1-based potentials; p[j] is the row matched to column j (0 = none).
    let mut u = vec![0.0_f64; n + 1];
    let mut v = vec![0.0_f64; n + 1];
    let mut p = vec![0_usize; n + 1];
    let mut way = vec![0_usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0_usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0_usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost.get(i0 - 1, j - 1) - u[i0] - v[j];
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
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut row_to_col = vec![0_usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            row_to_col[p[j] - 1] = j - 1;
        }
    }
    let total = row_to_col
        .iter()
        .enumerate()
        .map(|(i, &j)| cost.get(i, j))
        .sum();
    (row_to_col, total)
}

/// Exhaustive minimum over all row-to-column permutations; O(n!) and intended
/// for n <= 8 where it doubles as an oracle for [`min_cost_assignment`].
pub fn min_permutation_cost(cost: &Matrix) -> f64 {
    let n = cost.rows();
    assert_eq!(n, cost.cols(), "cost matrix must be square");
    let mut cols: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut cols, 0, cost, 0.0, &mut best);
    best
}

fn permute(cols: &mut Vec<usize>, depth: usize, cost: &Matrix, acc: f64, best: &mut f64) {
    if depth == cols.len() {
        if acc < *best {
            *best = acc;
        }
        return;
    }
    for i in depth..cols.len() {
        cols.swap(depth, i);
        let next = acc + cost.get(depth, cols[depth]);
        if next < *best {
            permute(cols, depth + 1, cost, next, best);
        }
        cols.swap(depth, i);
    }
}
