//! Checks that make the one-step operator's proven properties measurable.

use alloc::vec::Vec;

use super::kernel::{apply_kernel, check_margin, Kernel};
use super::{apply_s_at, chernoff_solve, step_margin, ChernoffPlan, GridField, StepOptions};
use crate::cylinder::{apply_l, CylFunction, OperatorL};
use crate::error::{check_dim, Error, Result};
use crate::math::{abs, exp};

/// `max |(S_τφ(x) − φ(x))/τ − (Lφ)(x)|` over the probe points.
pub fn tangency_residual(
    op: &OperatorL,
    phi: &CylFunction,
    tau: f64,
    grid: &[Vec<f64>],
    options: &StepOptions,
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let stepped = apply_s_at(op, tau, phi, grid, options)?;
    let mut worst = 0.0f64;
    for (x, s) in grid.iter().zip(stepped) {
        let r = (s - phi.eval(x)?) / tau - apply_l(op, phi, x)?;
        worst = worst.max(abs(r));
    }
    Ok(worst)
}

/// Measured `‖S_τu‖/‖u‖` against the a-priori bound `exp((2‖A‖B₀²/g₀ + ‖C‖)τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBound {
    pub ratio: f64,
    pub bound: f64,
}

impl NormBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.ratio <= self.bound + tol
    }
}

/// The output sup-norm is taken over points a one-step margin away from the faces.
pub fn norm_bound_check(
    op: &OperatorL,
    tau: f64,
    u: &GridField,
    options: &StepOptions,
) -> Result<NormBound> {
    check_dim(op.dim(), u.dim())?;
    let input = u.sup_norm();
    if input == 0.0 {
        return Err(Error::ZeroField);
    }
    let kernel = Kernel::new(op, tau, &options.quad, options.tilt)?;
    let margin = step_margin(op, tau, options.tilt);
    check_margin(u, margin)?;
    let stepped = apply_kernel(&kernel, u, options.interpolation)?;
    let interior = u.interior_indices(margin);
    let coeffs = op.coefficients();
    let b0 = coeffs.drift_bound();
    let exponent = 2.0 * op.covariance().norm() * b0 * b0 / coeffs.g_floor() + coeffs.c_norm();
    Ok(NormBound {
        ratio: stepped.sup_norm_on(&interior) / input,
        bound: exp(exponent * tau),
    })
}

/// Largest gap between the Chernoff solutions for two driftless operators, over the
/// interior and the checkpoints `t/4, t/2, t`. Each checkpoint is its own solve with the
/// plan's step count.
pub fn coefficient_continuity_probe(
    op0: &OperatorL,
    op_j: &OperatorL,
    plan: &ChernoffPlan,
    u0: &GridField,
) -> Result<f64> {
    for op in [op0, op_j] {
        let coeffs = op.coefficients();
        if !coeffs.drift_is_zero() {
            return Err(Error::Regime("continuity probe requires B = 0"));
        }
        if !coeffs.is_contractive() {
            return Err(Error::Regime("continuity probe requires C <= 0"));
        }
    }
    check_dim(op0.dim(), op_j.dim())?;
    let base = plan.with_op(op0.clone())?;
    let perturbed = plan.with_op(op_j.clone())?;
    let margin = base.truncation_margin().max(perturbed.truncation_margin());
    let interior = u0.interior_indices(margin);
    if interior.is_empty() {
        let (lo, hi) = u0.bounds()[0];
        return Err(Error::TruncationMargin {
            axis: 0,
            half_width: 0.5 * (hi - lo),
            margin,
        });
    }
    let mut gap = 0.0f64;
    for fraction in [0.25, 0.5, 1.0] {
        let t = plan.t_final * fraction;
        let u = chernoff_solve(&base.at_time(t)?, u0)?.field;
        let v = chernoff_solve(&perturbed.at_time(t)?, u0)?.field;
        for &k in &interior {
            gap = gap.max(abs(u.values()[k] - v.values()[k]));
        }
    }
    Ok(gap)
}
