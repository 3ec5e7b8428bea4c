use nalgebra::{DMatrix, SymmetricEigen};

use super::StateSpace;
use crate::error::{Error, Result};

/// Classical (metric) MDS of a state space.
pub fn mds_project(space: &StateSpace, dims: usize) -> Result<Vec<Vec<f64>>> {
    classical_mds(&space.distances, dims)
}

/// Double-centers the squared distances and scales the top `dims`
/// eigenvectors by `√λ`. Non-positive eigenvalues give zero coordinates.
/// Each axis is oriented so its largest-magnitude coordinate is positive.
pub fn classical_mds(distances: &[Vec<f64>], dims: usize) -> Result<Vec<Vec<f64>>> {
    let n = distances.len();
    if n < 3 {
        return Err(Error::validation("MDS needs at least 3 points"));
    }
    if distances.iter().any(|row| row.len() != n) {
        return Err(Error::validation("distance matrix must be square"));
    }
    let sq = DMatrix::from_fn(n, n, |i, j| distances[i][j] * distances[i][j]);
    let row_means: Vec<f64> = (0..n).map(|i| sq.row(i).sum() / n as f64).collect();
    let col_means: Vec<f64> = (0..n).map(|j| sq.column(j).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| -0.5 * (sq[(i, j)] - row_means[i] - col_means[j] + grand));
    let b = (&b + b.transpose()) * 0.5;

    let eig = SymmetricEigen::new(b);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&c)));

    let mut coords = vec![vec![0.0; dims]; n];
    for (axis, &k) in order.iter().take(dims).enumerate() {
        let lambda = eig.eigenvalues[k];
        // relative cutoff: numerically zero eigenvalues are treated as absent
        let scale_ref = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if lambda <= 1e-12 * scale_ref.max(f64::MIN_POSITIVE) {
            continue;
        }
        let root = lambda.sqrt();
        let col = eig.eigenvectors.column(k);
        let pivot = (0..n).max_by(|&a, &c| col[a].abs().total_cmp(&col[c].abs()).then(c.cmp(&a))).unwrap_or(0);
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            coords[i][axis] = sign * col[i] * root;
        }
    }
    Ok(coords)
}
