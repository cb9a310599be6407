//! Thomas algorithm and its periodic (cyclic) extension.
//!
//! Row `i` reads `lower[i]·x[i-1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]`. In the cyclic
//! case `lower[0]` couples to `x[n-1]` and `upper[n-1]` couples to `x[0]`; otherwise those
//! two entries are ignored.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::math::abs;

fn check_lengths(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<usize> {
    let n = diag.len();
    check_dim(n, lower.len())?;
    check_dim(n, upper.len())?;
    check_dim(n, rhs.len())?;
    if n == 0 {
        return Err(Error::invalid("diag", "empty system"));
    }
    Ok(n)
}

pub fn solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = check_lengths(lower, diag, upper, rhs)?;
    let mut c_prime = vec![0.0; n];
    let mut x = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularSystem { row: 0 });
    }
    c_prime[0] = upper[0] / pivot;
    x[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c_prime[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        c_prime[i] = upper[i] / pivot;
        x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}

/// Periodic tridiagonal solve by Sherman–Morrison on top of [`solve`]. Needs `n ≥ 3`.
pub fn solve_cyclic(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = check_lengths(lower, diag, upper, rhs)?;
    if n < 3 {
        return Err(Error::invalid(
            "diag",
            "cyclic system needs at least three rows",
        ));
    }
    let corner_top = lower[0];
    let corner_bottom = upper[n - 1];
    let gamma = -diag[0];
    let mut modified = diag.to_vec();
    modified[0] = diag[0] - gamma;
    modified[n - 1] = diag[n - 1] - corner_top * corner_bottom / gamma;
    let x = solve(lower, &modified, upper, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = corner_bottom;
    let z = solve(lower, &modified, upper, &u)?;
    let denom = 1.0 + z[0] + corner_top * z[n - 1] / gamma;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::SingularSystem { row: n - 1 });
    }
    let fact = (x[0] + corner_top * x[n - 1] / gamma) / denom;
    Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
}

/// `max |M x − rhs|` for the (optionally cyclic) tridiagonal `M`.
pub fn residual(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    x: &[f64],
    rhs: &[f64],
    cyclic: bool,
) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut v = diag[i] * x[i];
            if i > 0 {
                v += lower[i] * x[i - 1];
            } else if cyclic {
                v += lower[0] * x[n - 1];
            }
            if i + 1 < n {
                v += upper[i] * x[i + 1];
            } else if cyclic {
                v += upper[n - 1] * x[0];
            }
            abs(v - rhs[i])
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense_solve(m: &mut [Vec<f64>], b: &mut [f64]) -> Vec<f64> {
        // Gaussian elimination with partial pivoting, test-only reference.
        let n = b.len();
        for col in 0..n {
            let p = (col..n)
                .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
                .unwrap();
            m.swap(col, p);
            b.swap(col, p);
            for row in col + 1..n {
                let f = m[row][col] / m[col][col];
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|k| m[i][k] * x[k]).sum();
            x[i] = (b[i] - s) / m[i][i];
        }
        x
    }

    fn dense(lower: &[f64], diag: &[f64], upper: &[f64], cyclic: bool) -> Vec<Vec<f64>> {
        let n = diag.len();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = diag[i];
            if i > 0 {
                m[i][i - 1] = lower[i];
            }
            if i + 1 < n {
                m[i][i + 1] = upper[i];
            }
        }
        if cyclic {
            m[0][n - 1] += lower[0];
            m[n - 1][0] += upper[n - 1];
        }
        m
    }

    fn system() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>)> {
        (3usize..24).prop_flat_map(|n| {
            (
                proptest::collection::vec(-1.0..1.0f64, n),
                proptest::collection::vec(2.5..4.0f64, n),
                proptest::collection::vec(-1.0..1.0f64, n),
                proptest::collection::vec(-5.0..5.0f64, n),
            )
        })
    }

    proptest! {
        #[test]
        fn thomas_matches_dense((l, d, u, r) in system()) {
            let x = solve(&l, &d, &u, &r).unwrap();
            let want = dense_solve(&mut dense(&l, &d, &u, false), &mut r.clone());
            for (a, b) in x.iter().zip(&want) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!(residual(&l, &d, &u, &x, &r, false) < 1e-12);
        }

        #[test]
        fn cyclic_matches_dense((l, d, u, r) in system()) {
            let x = solve_cyclic(&l, &d, &u, &r).unwrap();
            let want = dense_solve(&mut dense(&l, &d, &u, true), &mut r.clone());
            for (a, b) in x.iter().zip(&want) {
                prop_assert!((a - b).abs() < 1e-10);
            }
            prop_assert!(residual(&l, &d, &u, &x, &r, true) < 1e-12);
        }
    }

    #[test]
    fn singular_pivot_reported() {
        let err = solve(&[0.0, 1.0], &[0.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).unwrap_err();
        assert_eq!(err, Error::SingularSystem { row: 0 });
    }
}
