use alloc::vec::Vec;

use crate::cylinder::{CylFunction, OperatorL};
use crate::engine::GridField;
use crate::error::{check_dim, Error, Result};
use crate::math::abs;

use super::fd::{assemble, FdBoundary, FdGeometry};
use super::tridiag;

#[derive(Debug, Clone)]
pub struct ResolventSolution {
    pub field: GridField,
    /// `max |(λ − L_h) f − rhs|` over the grid.
    pub residual: f64,
}

/// Solves `(λ − L_h) f = rhs` on a one-dimensional finite-difference grid.
pub fn resolvent_solve(
    op: &OperatorL,
    lambda: f64,
    rhs: &CylFunction,
    geometry: &FdGeometry,
) -> Result<ResolventSolution> {
    if geometry.dim() != 1 {
        return Err(Error::invalid("dim", "resolvent oracle is one-dimensional"));
    }
    check_dim(op.dim(), 1)?;
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid("lambda", "must be finite and positive"));
    }
    if !op.coefficients().is_contractive() {
        return Err(Error::Regime("resolvent oracle requires the C <= 0 regime"));
    }
    let line = assemble(op, geometry)?.remove(0).remove(0);
    let n = line.nodes.len();
    let grid = geometry.field_from_fn(|_| 0.0)?;
    let mut lower: Vec<f64> = line.lower.iter().map(|v| -v).collect();
    let mut upper: Vec<f64> = line.upper.iter().map(|v| -v).collect();
    let mut diag: Vec<f64> = line.diag.iter().map(|v| lambda - v).collect();
    let mut b = Vec::with_capacity(n);
    for k in 0..n {
        b.push(rhs.eval(&grid.point(k))?);
    }
    let cyclic = geometry.boundary == FdBoundary::Periodic;
    if let FdBoundary::Dirichlet(v) = geometry.boundary {
        for i in [0, n - 1] {
            lower[i] = 0.0;
            upper[i] = 0.0;
            diag[i] = 1.0;
            b[i] = v;
        }
    }
    let f = if cyclic {
        tridiag::solve_cyclic(&lower, &diag, &upper, &b)?
    } else {
        tridiag::solve(&lower, &diag, &upper, &b)?
    };
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            context: "resolvent solution",
        });
    }
    let residual = tridiag::residual(&lower, &diag, &upper, &f, &b, cyclic);
    debug_assert!(residual >= 0.0 && abs(residual).is_finite());
    Ok(ResolventSolution {
        field: grid.with_values(f)?,
        residual,
    })
}
