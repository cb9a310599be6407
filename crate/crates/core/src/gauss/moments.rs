//! Closed-form moments of a centered Gaussian with covariance `Ã = s·diag(q)`.

use alloc::vec::Vec;

use super::GaussianSpec;
use crate::error::{check_dim, Error, Result};
use crate::math::exp;
use crate::matrix::{dot, SquareMatrix};

fn centered_diag(spec: &GaussianSpec, dim: usize) -> Result<Vec<f64>> {
    check_dim(spec.dim(), dim)?;
    if !spec.is_centered() {
        return Err(Error::NonCenteredMeasure);
    }
    Ok(spec.covariance_diag())
}

fn scaled(diag: &[f64], z: &[f64]) -> Vec<f64> {
    diag.iter().zip(z).map(|(a, v)| a * v).collect()
}

/// `∫ ⟨Gy, y⟩ dμ = tr(ÃG)`.
pub fn expect_quadratic(g: &SquareMatrix, spec: &GaussianSpec) -> Result<f64> {
    let diag = centered_diag(spec, g.dim())?;
    Ok(diag.iter().enumerate().map(|(i, a)| a * g[(i, i)]).sum())
}

/// `∫ e^{⟨z, y⟩} dμ = exp(½⟨Ãz, z⟩)`.
pub fn expect_exp(z: &[f64], spec: &GaussianSpec) -> Result<f64> {
    let diag = centered_diag(spec, z.len())?;
    Ok(exp(0.5 * dot(&scaled(&diag, z), z)))
}

/// `∫ ⟨w, y⟩ e^{⟨z, y⟩} dμ = ⟨Ãw, z⟩·exp(½⟨Ãz, z⟩)`.
pub fn expect_linear_exp(w: &[f64], z: &[f64], spec: &GaussianSpec) -> Result<f64> {
    check_dim(z.len(), w.len())?;
    let diag = centered_diag(spec, z.len())?;
    Ok(dot(&scaled(&diag, w), z) * exp(0.5 * dot(&scaled(&diag, z), z)))
}

/// `∫ ⟨Gy, y⟩ e^{⟨z, y⟩} dμ = (tr(ÃG) + ⟨GÃz, Ãz⟩)·exp(½⟨Ãz, z⟩)`.
pub fn expect_quadratic_exp(g: &SquareMatrix, z: &[f64], spec: &GaussianSpec) -> Result<f64> {
    g.require_dim(z.len())?;
    let diag = centered_diag(spec, z.len())?;
    let az = scaled(&diag, z);
    let trace: f64 = diag.iter().enumerate().map(|(i, a)| a * g[(i, i)]).sum();
    let g_az = g.mul_vec(&az)?;
    Ok((trace + dot(&g_az, &az)) * exp(0.5 * dot(&az, z)))
}
