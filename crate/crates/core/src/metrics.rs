//! Clustering quality and centroid-recovery metrics.

use crate::assignment::{min_cost_assignment, min_permutation_cost};
use crate::divergence::{Centroids, Dataset, Generator};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Largest matching size handled by exhaustive permutation search before
/// switching to the assignment solver.
const EXHAUSTIVE_LIMIT: usize = 8;

fn comb2(n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        (n as f64) * ((n - 1) as f64) / 2.0
    }
}

/// Adjusted Rand index between two labelings of the same points.
///
/// Symmetric and invariant to relabeling; 1.0 for identical partitions. When
/// the chance-corrected denominator vanishes (e.g. both partitions trivial),
/// returns 1.0 for identical partitions and 0.0 otherwise.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n == 0 {
        return Ok(1.0);
    }
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![0_usize; ka * kb];
    let mut row_sums = vec![0_usize; ka];
    let mut col_sums = vec![0_usize; kb];
    for (&x, &y) in a.iter().zip(b) {
        table[x * kb + y] += 1;
        row_sums[x] += 1;
        col_sums[y] += 1;
    }

    let sum_cells: f64 = table.iter().map(|&c| comb2(c)).sum();
    let sum_rows: f64 = row_sums.iter().map(|&c| comb2(c)).sum();
    let sum_cols: f64 = col_sums.iter().map(|&c| comb2(c)).sum();
    let pairs = comb2(n);

    let expected = sum_rows * sum_cols / pairs;
    let max_index = 0.5 * (sum_rows + sum_cols);
    if max_index == expected {
        // Partitions identical up to relabeling iff every row and column of
        // the contingency table has at most one occupied cell.
        let rows_ok = (0..ka).all(|i| (0..kb).filter(|&j| table[i * kb + j] > 0).count() <= 1);
        let cols_ok = (0..kb).all(|j| (0..ka).filter(|&i| table[i * kb + j] > 0).count() <= 1);
        return Ok(if rows_ok && cols_ok { 1.0 } else { 0.0 });
    }
    Ok((sum_cells - expected) / (max_index - expected))
}

fn check_shapes(a: &Centroids, b: &Centroids) -> Result<()> {
    if a.k() != b.k() || a.dim() != b.dim() {
        return Err(Error::ShapeMismatch {
            left_rows: a.k(),
            left_cols: a.dim(),
            right_rows: b.k(),
            right_cols: b.dim(),
        });
    }
    Ok(())
}

fn min_matching_cost(cost: &Matrix) -> f64 {
    if cost.rows() <= EXHAUSTIVE_LIMIT {
        min_permutation_cost(cost)
    } else {
        min_cost_assignment(cost).1
    }
}

/// Permutation-minimized Frobenius distance between two centroid sets,
/// immune to label switching.
pub fn centroid_dist(a: &Centroids, b: &Centroids) -> Result<f64> {
    check_shapes(a, b)?;
    let k = a.k();
    let mut cost = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            let d: f64 = a
                .row(i)
                .iter()
                .zip(b.row(j))
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            cost.set(i, j, d);
        }
    }
    Ok(min_matching_cost(&cost).max(0.0).sqrt())
}

/// Permutation-minimized total Bregman divergence from true to fitted
/// centroids, using the same matching machinery as [`centroid_dist`].
pub fn centroid_divergence(
    gen: &Generator,
    t_true: &Centroids,
    t_fit: &Centroids,
) -> Result<f64> {
    check_shapes(t_true, t_fit)?;
    let k = t_true.k();
    let mut cost = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            cost.set(i, j, gen.divergence(t_true.row(i), t_fit.row(j))?);
        }
    }
    Ok(min_matching_cost(&cost).max(0.0))
}

/// Sample Bregman information: average divergence to the sample mean,
/// `(1/n) sum_i d(x_i, mean)`. Generalizes the (biased) variance.
pub fn bregman_information(gen: &Generator, data: &Dataset) -> Result<f64> {
    assert!(!data.is_empty(), "bregman information of an empty dataset");
    let n = data.len();
    let p = data.dim();
    let mut mean = vec![0.0_f64; p];
    for i in 0..n {
        for (c, &v) in data.row(i).iter().enumerate() {
            mean[c] += v;
        }
    }
    for v in &mut mean {
        *v /= n as f64;
    }
    let mut total = 0.0;
    for i in 0..n {
        total += gen.divergence(data.row(i), &mean)?;
    }
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    // Pair-counting oracle: classify all n(n-1)/2 pairs as together/apart in
    // each labeling and apply the chance-corrected agreement formula.
    fn ari_pair_oracle(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let (mut n11, mut n00, mut n10, mut n01) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
        for i in 0..n {
            for j in i + 1..n {
                let same_a = a[i] == a[j];
                let same_b = b[i] == b[j];
                match (same_a, same_b) {
                    (true, true) => n11 += 1.0,
                    (false, false) => n00 += 1.0,
                    (true, false) => n10 += 1.0,
                    (false, true) => n01 += 1.0,
                }
            }
        }
        let denom = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
        2.0 * (n00 * n11 - n01 * n10) / denom
    }

    #[test]
    fn ari_identity_and_relabeling() {
        let a = vec![0, 0, 1, 1];
        assert_eq!(adjusted_rand_index(&a, &a).unwrap(), 1.0);
        let b = vec![1, 1, 0, 0];
        assert_eq!(adjusted_rand_index(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn ari_crossed_partition_matches_pair_oracle() {
        let a = vec![0, 0, 1, 1];
        let b = vec![0, 1, 0, 1];
        let expected = ari_pair_oracle(&a, &b);
        assert!(rel_close(expected, -0.5, 1e-15));
        assert!(rel_close(adjusted_rand_index(&a, &b).unwrap(), expected, 1e-12));
    }

    #[test]
    fn ari_degenerate_cases() {
        let one = vec![0, 0, 0];
        assert_eq!(adjusted_rand_index(&one, &one).unwrap(), 1.0);
        let singletons_a = vec![0, 1, 2];
        let singletons_b = vec![2, 0, 1];
        assert_eq!(adjusted_rand_index(&singletons_a, &singletons_b).unwrap(), 1.0);
        assert!(matches!(
            adjusted_rand_index(&one, &[0, 0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn centroid_dist_hand_case() {
        let a = Centroids::from_rows(&[vec![0.0], vec![1.0]]);
        let b = Centroids::from_rows(&[vec![1.0], vec![0.5]]);
        // Permutations: sqrt(1 + 0.25) vs sqrt(0 + 0.25); the swap wins.
        assert!(rel_close(centroid_dist(&a, &b).unwrap(), 0.5, 1e-14));
        assert_eq!(centroid_dist(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn centroid_dist_permutation_invariant() {
        let a = Centroids::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]);
        let p = Centroids::from_rows(&[vec![5.0, 6.0], vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(centroid_dist(&a, &p).unwrap(), 0.0);
    }

    #[test]
    fn centroid_divergence_examples() {
        let gen = Generator::RelativeEntropy;
        let t = Centroids::from_rows(&[vec![2.0]]);
        let f = Centroids::from_rows(&[vec![1.0]]);
        let expected = 2.0 * 2.0f64.ln() - 1.0;
        assert!(rel_close(centroid_divergence(&gen, &t, &f).unwrap(), expected, 1e-14));

        let t2 = Centroids::from_rows(&[vec![2.0], vec![5.0]]);
        let p2 = Centroids::from_rows(&[vec![5.0], vec![2.0]]);
        assert_eq!(centroid_divergence(&gen, &t2, &p2).unwrap(), 0.0);
        assert_eq!(centroid_divergence(&gen, &t2, &t2).unwrap(), 0.0);
    }

    #[test]
    fn shape_mismatch_detected() {
        let a = Centroids::from_rows(&[vec![0.0]]);
        let b = Centroids::from_rows(&[vec![0.0, 1.0]]);
        assert!(matches!(
            centroid_dist(&a, &b),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn bregman_information_cases() {
        let constant = Dataset::from_rows(&[vec![3.0], vec![3.0]]);
        assert_eq!(
            bregman_information(&Generator::SquaredEuclidean, &constant).unwrap(),
            0.0
        );

        // Squared Euclidean reduces to the biased sample variance summed over
        // coordinates.
        let data = Dataset::from_rows(&[vec![1.0, 0.0], vec![3.0, 4.0]]);
        let info = bregman_information(&Generator::SquaredEuclidean, &data).unwrap();
        assert!(rel_close(info, 1.0 + 4.0, 1e-14));

        // Relative entropy on {1, 3}: (d(1,2) + d(3,2)) / 2.
        let re = Dataset::from_rows(&[vec![1.0], vec![3.0]]);
        let expected = (1.0 * (1.0f64 / 2.0).ln() + 1.0 + 3.0 * (3.0f64 / 2.0).ln() - 1.0) / 2.0;
        assert!(rel_close(expected, 0.26162407188227393, 1e-15));
        assert!(rel_close(
            bregman_information(&Generator::RelativeEntropy, &re).unwrap(),
            expected,
            1e-14
        ));
    }
}
