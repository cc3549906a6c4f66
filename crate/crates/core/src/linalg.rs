//! Dense solves for the collocation systems, backed by nalgebra.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

fn to_matrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(r, c, |i, j| rows[i][j])
}

/// `σ_max / σ_min` in the 2-norm; infinite when `σ_min = 0`.
pub fn condition_number(rows: &[Vec<f64>]) -> f64 {
    let a = to_matrix(rows);
    if a.is_empty() {
        return f64::NAN;
    }
    let sv = a.svd(false, false).singular_values;
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Square solve by LU with partial pivoting.
pub fn lu_solve(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>> {
    let a = to_matrix(rows);
    let b = DVector::from_column_slice(rhs);
    let lu = a.lu();
    match lu.solve(&b) {
        Some(x) if x.iter().all(|v| v.is_finite()) => Ok(x.iter().copied().collect()),
        _ => Err(Error::Singular { cond: condition_number(rows) }),
    }
}

/// Least squares `min ‖Ax - b‖₂` for a tall full-rank `A` by Householder QR.
/// Returns the solution and the residual norm.
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<(Vec<f64>, f64)> {
    let a = to_matrix(rows);
    let b = DVector::from_column_slice(rhs);
    let qr = a.clone().qr();
    let r = qr.r();
    let diag_max = r.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let diag_min = r.diagonal().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
    if diag_min <= f64::EPSILON * diag_max * r.nrows() as f64 {
        return Err(Error::RankDeficient { cond: condition_number(rows) });
    }
    let qtb = qr.q().transpose() * &b;
    let x = r
        .solve_upper_triangular(&qtb)
        .ok_or_else(|| Error::RankDeficient { cond: condition_number(rows) })?;
    let residual = (&a * &x - &b).norm();
    Ok((x.iter().copied().collect(), residual))
}
