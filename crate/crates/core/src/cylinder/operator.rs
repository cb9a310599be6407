use alloc::vec;
use alloc::vec::Vec;

use super::{trace_hessian, Coefficients, CylFunction};
use crate::error::{check_dim, Error, Result};
use crate::gauss::TraceClassOperator;
use crate::math::abs;

/// `L = g·tr(A ∂²) + ⟨∂, A B⟩ + C` on the leading `dim` coordinates of `A`'s eigenbasis.
#[derive(Debug, Clone)]
pub struct OperatorL {
    coeffs: Coefficients,
    a: TraceClassOperator,
    dim: usize,
}

impl OperatorL {
    /// Uses the coefficients' own cylinder dimension.
    pub fn new(coeffs: Coefficients, a: &TraceClassOperator) -> Result<Self> {
        let dim = coeffs.dim();
        Self::with_dim(coeffs, a, dim)
    }

    /// Operator acting on functions of `dim ≥ coeffs.dim()` coordinates.
    pub fn with_dim(coeffs: Coefficients, a: &TraceClassOperator, dim: usize) -> Result<Self> {
        if dim < coeffs.dim() {
            return Err(Error::DimensionMismatch {
                expected: coeffs.dim(),
                found: dim,
            });
        }
        let a = a.truncated(dim)?;
        let ellipticity = coeffs.g_floor() * a.eigenvalue(dim - 1);
        if !(ellipticity > 0.0) {
            return Err(Error::invalid(
                "A",
                "second-order coefficient must be positive",
            ));
        }
        Ok(Self { coeffs, a, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coeffs
    }

    /// Active block `Aₙ`.
    pub fn covariance(&self) -> &TraceClassOperator {
        &self.a
    }

    /// Lower bound `g₀·qₙ` on the second-order coefficient along every coordinate.
    pub fn ellipticity_constant(&self) -> f64 {
        self.coeffs.g_floor() * self.a.eigenvalue(self.dim - 1)
    }

    /// Replaces the coefficients, keeping `A` and the dimension.
    pub fn with_coefficients(&self, coeffs: Coefficients) -> Result<Self> {
        Self::with_dim(coeffs, &self.a, self.dim)
    }
}

/// `(Lf)(x)`.
pub fn apply_l(op: &OperatorL, f: &CylFunction, x: &[f64]) -> Result<f64> {
    check_dim(op.dim, x.len())?;
    if f.dim() > op.dim {
        return Err(Error::DimensionMismatch {
            expected: op.dim,
            found: f.dim(),
        });
    }
    let coeffs = &op.coeffs;
    let mut value = coeffs.g_at(x)? * trace_hessian(&op.a, f, x)?;
    if !coeffs.drift_is_zero() {
        let mut b = vec![0.0; op.dim];
        coeffs.drift_at(x, &mut b)?;
        let grad = f.gradient(x)?;
        value += grad
            .iter()
            .enumerate()
            .map(|(s, d)| op.a.eigenvalue(s) * b[s] * d)
            .sum::<f64>();
    }
    value += coeffs.c_at(x)? * f.eval(x)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { context: "Lf" })
    }
}

/// Both sides of `sup|Lf − λf| ≥ λ·sup|f|` evaluated as maxima over a probe grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub lhs: f64,
    pub rhs: f64,
}

impl Witness {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs >= self.rhs - tol
    }
}

pub fn dissipativity_witness(
    op: &OperatorL,
    f: &CylFunction,
    lambda: f64,
    grid: &[Vec<f64>],
) -> Result<Witness> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid("lambda", "must be finite and positive"));
    }
    if !op.coeffs.is_contractive() {
        return Err(Error::Regime("dissipativity requires the C <= 0 regime"));
    }
    let mut lhs = 0.0f64;
    let mut sup_f = 0.0f64;
    for x in grid {
        let fx = f.eval(x)?;
        lhs = lhs.max(abs(apply_l(op, f, x)? - lambda * fx));
        sup_f = sup_f.max(abs(fx));
    }
    Ok(Witness {
        lhs,
        rhs: lambda * sup_f,
    })
}
