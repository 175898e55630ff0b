//! Small dense linear-algebra helpers over nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub fn matrix_from_rows(rows: &[Vec<f64>], cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

/// Numerical rank of the matrix whose rows are `rows`.
pub fn rank(rows: &[Vec<f64>], cols: usize, tol: f64) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    let m = matrix_from_rows(rows, cols);
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax.max(1.0)).count()
}

/// Solve the square system `a x = b`; `None` when singular.
pub fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let m = matrix_from_rows(a, n);
    let x = m.lu().solve(&DVector::from_column_slice(b))?;
    x.iter()
        .all(|v| v.is_finite())
        .then(|| x.as_slice().to_vec())
}

/// Minimum-norm least-squares solution of `a x ≈ b` for `a` of shape `rows × cols`.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    svd.solve(b, 1e-12 * smax.max(1e-300)).ok()
}

pub fn symmetric_eigen(a: &DMatrix<f64>) -> SymmetricEigen<f64, nalgebra::Dyn> {
    SymmetricEigen::new(a.clone())
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| crate::vector::dot(row, x)).collect()
}

/// `aᵀ y` for `a` given by rows.
pub fn mat_t_vec(a: &[Vec<f64>], y: &[f64], cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; cols];
    for (row, &yi) in a.iter().zip(y) {
        for (o, &v) in out.iter_mut().zip(row) {
            *o += yi * v;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 1.0, 0.0],
        ];
        assert_eq!(rank(&rows, 3, 1e-10), 2);
        assert_eq!(rank(&[], 3, 1e-10), 0);
    }

    #[test]
    fn solves_square_system() {
        let x = solve(&[vec![2.0, 1.0], vec![1.0, 3.0]], &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-12 && (x[1] - 1.4).abs() < 1e-12);
        assert!(solve(&[vec![1.0, 1.0], vec![1.0, 1.0]], &[1.0, 2.0]).is_none());
    }
}
