//! Small dense linear algebra over the rationals.

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n).map(|i| (0..m).map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum()).collect()).collect()
}

/// Gauss-Jordan inverse of a square matrix, `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.len();
    let mut work: Vec<Vec<Rational>> =
        a.iter().zip(identity(n)).map(|(row, id)| row.iter().cloned().chain(id).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        let inv = work[col][col].recip()?;
        for x in work[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].clone();
            let pivot_row = work[col].clone();
            for (x, p) in work[r].iter_mut().zip(&pivot_row) {
                *x -= &factor * p;
            }
        }
    }
    Some(work.into_iter().map(|row| row[n..].to_vec()).collect())
}
