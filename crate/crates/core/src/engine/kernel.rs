use alloc::vec;
use alloc::vec::Vec;

use super::{GridField, Interpolation};
use crate::cylinder::{CylFunction, OperatorL};
use crate::error::{check_dim, Error, Result};
use crate::gauss::{NodeSet, QuadratureSpec};
use crate::math::{exp, sqrt};
use crate::par;

/// Standard deviations kept inside the box; the Gaussian tail beyond is below 1e-8.
pub const TAIL_SIGMAS: f64 = 6.0;

/// Exponential tilt applied to the Gaussian in `S_τ` when a drift is present.
///
/// `Half` tilts by `e^{⟨B/(2g), y⟩}` and normalizes by `e^{-τ⟨AB,B⟩/(4g)}`: the tilted
/// measure has mean `τ·A·B(x)`, which makes `S_τ` tangent to `L`. `Full` tilts by
/// `e^{⟨B/g, y⟩}` with prefactor `e^{-τ⟨AB,B⟩/g}`; its mean is `2τ·A·B(x)`, so it is tangent
/// to the operator whose first-order term is `2⟨∂u, AB⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftTilt {
    #[default]
    Half,
    Full,
}

impl DriftTilt {
    fn factor(self) -> f64 {
        match self {
            DriftTilt::Half => 0.5,
            DriftTilt::Full => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepOptions {
    pub quad: QuadratureSpec,
    pub interpolation: Interpolation,
    pub tilt: DriftTilt,
}

/// Truncation margin for a chain of total time `t`: `6·√(2t·g_max·q₁)` plus the drift shift.
pub fn step_margin(op: &OperatorL, t: f64, tilt: DriftTilt) -> f64 {
    let coeffs = op.coefficients();
    let q1 = op.covariance().norm();
    TAIL_SIGMAS * sqrt(2.0 * t * coeffs.g_max() * q1)
        + 2.0 * tilt.factor() * t * q1 * coeffs.drift_bound()
}

pub(crate) fn check_margin(field: &GridField, margin: f64) -> Result<()> {
    if field.boundary() == super::BoundaryMode::Periodic {
        return Ok(());
    }
    for (axis, (lo, hi)) in field.bounds().iter().enumerate() {
        let half_width = 0.5 * (hi - lo);
        if !(half_width > margin) {
            return Err(Error::TruncationMargin {
                axis,
                half_width,
                margin,
            });
        }
    }
    Ok(())
}

/// One application of `S_τ` at a point, against an arbitrary integrand source.
pub(crate) struct Kernel<'a> {
    op: &'a OperatorL,
    tau: f64,
    nodes: NodeSet,
    tilt: f64,
    sqrt_q: Vec<f64>,
}

impl<'a> Kernel<'a> {
    pub(crate) fn new(
        op: &'a OperatorL,
        tau: f64,
        quad: &QuadratureSpec,
        tilt: DriftTilt,
    ) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::invalid("tau", "must be finite and positive"));
        }
        let nodes = NodeSet::new(quad, op.dim())?;
        let sqrt_q = op
            .covariance()
            .eigenvalues()
            .iter()
            .map(|q| sqrt(*q))
            .collect();
        Ok(Self {
            op,
            tau,
            nodes,
            tilt: tilt.factor(),
            sqrt_q,
        })
    }

    /// `e^{τC − τκ²⟨AB,B⟩/g} Σₖ wₖ u(x + √(2τg)·√q∘zₖ)·e^{⟨κB/g, √(2τg)·√q∘zₖ⟩}`.
    pub(crate) fn apply_at(&self, x: &[f64], u: impl Fn(&[f64]) -> Result<f64>) -> Result<f64> {
        let dim = self.op.dim();
        let coeffs = self.op.coefficients();
        let g = coeffs.g_at(x)?;
        let c = coeffs.c_at(x)?;
        let spread = sqrt(2.0 * self.tau * g);
        let scale: Vec<f64> = self.sqrt_q.iter().map(|s| spread * s).collect();
        let mut log_prefactor = self.tau * c;
        let mut slope = vec![0.0; dim];
        if !coeffs.drift_is_zero() {
            let mut b = vec![0.0; dim];
            coeffs.drift_at(x, &mut b)?;
            let ab_b: f64 = self.op.covariance().inner(&b, &b);
            log_prefactor -= self.tau * self.tilt * self.tilt * ab_b / g;
            for i in 0..dim {
                slope[i] = self.tilt * b[i] / g * scale[i];
            }
        }
        let mut y = vec![0.0; dim];
        let mut acc = 0.0;
        for (z, w) in self.nodes.iter() {
            let mut tilt_exponent = 0.0;
            for i in 0..dim {
                y[i] = x[i] + scale[i] * z[i];
                tilt_exponent += slope[i] * z[i];
            }
            acc += w * u(&y)? * exp(tilt_exponent);
        }
        let value = exp(log_prefactor) * acc;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::NonFinite {
                context: "S_tau integrand",
            })
        }
    }
}

/// `S_τ u` on the grid of `u`; off-grid values of `u` come from interpolation and the
/// field's boundary mode. Fails when no grid point sits a full one-step margin from the faces.
pub fn apply_s(
    op: &OperatorL,
    tau: f64,
    u: &GridField,
    options: &StepOptions,
) -> Result<GridField> {
    check_dim(op.dim(), u.dim())?;
    let kernel = Kernel::new(op, tau, &options.quad, options.tilt)?;
    check_margin(u, step_margin(op, tau, options.tilt))?;
    apply_kernel(&kernel, u, options.interpolation)
}

pub(crate) fn apply_kernel(
    kernel: &Kernel<'_>,
    u: &GridField,
    interpolation: Interpolation,
) -> Result<GridField> {
    let values = par::try_map(u.len(), |k| {
        let x = u.point(k);
        kernel.apply_at(&x, |y| Ok(u.interpolate(y, interpolation)))
    })?;
    u.with_values(values)
}

/// `(S_τ φ)(x)` at each probe point, integrating `φ` itself (no grid).
pub fn apply_s_at(
    op: &OperatorL,
    tau: f64,
    phi: &CylFunction,
    points: &[Vec<f64>],
    options: &StepOptions,
) -> Result<Vec<f64>> {
    if phi.dim() > op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            found: phi.dim(),
        });
    }
    let kernel = Kernel::new(op, tau, &options.quad, options.tilt)?;
    par::try_map(points.len(), |k| {
        check_dim(op.dim(), points[k].len())?;
        kernel.apply_at(&points[k], |y| phi.eval(y))
    })
}
