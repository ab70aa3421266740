//! Small dense helpers: Gaussian elimination, rank, and the largest
//! eigenvalue of a symmetric matrix (cyclic Jacobi).

// Index loops read closer to the textbook updates here.
#![allow(clippy::needless_range_loop)]

use crate::scalar::Scalar;

/// Solves `a x = b` for square `a` with partial pivoting.
pub(crate) fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = b.len();
    let scale = a
        .iter()
        .flatten()
        .fold(T::zero(), |m, v| m.max(v.abs()))
        .max(T::min_positive_value());
    let eps = T::epsilon() * T::lit(64.0) * scale;
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if a[piv][col].abs() <= eps {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - factor * v;
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let s: T = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Numerical rank of a set of row vectors.
pub(crate) fn rank<T: Scalar>(rows: &[Vec<T>], tol: T) -> usize {
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..m.len()).max_by(|&i, &j| {
            m[i][col]
                .abs()
                .partial_cmp(&m[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        }) else {
            break;
        };
        if m[piv][col].abs() <= tol {
            continue;
        }
        m.swap(r, piv);
        for row in 0..m.len() {
            if row != r {
                let f = m[row][col] / m[r][col];
                for k in col..cols {
                    let v = m[r][k];
                    m[row][k] = m[row][k] - f * v;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Largest eigenvalue of a symmetric matrix.
pub(crate) fn max_symmetric_eigenvalue<T: Scalar>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::zero();
    }
    let two = T::lit(2.0);
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: T = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= T::epsilon() * T::epsilon() * (diag + off) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = sign_nonzero(theta) / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).fold(T::neg_infinity(), T::max)
}

fn sign_nonzero<T: Scalar>(v: T) -> T {
    if v < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}
