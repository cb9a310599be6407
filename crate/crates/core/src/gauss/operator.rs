use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::math::sqrt;

/// Positive trace-class operator stored by its eigenvalues `q₁ ≥ q₂ ≥ … > 0`
/// in a fixed orthonormal eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceClassOperator {
    eigenvalues: Vec<f64>,
}

impl TraceClassOperator {
    pub fn new(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::invalid(
                "eigenvalues",
                "at least one eigenvalue is required",
            ));
        }
        if let Some(q) = eigenvalues.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
            return Err(Error::invalid(
                "eigenvalues",
                alloc::format!("every eigenvalue must be finite and positive, got {q}"),
            ));
        }
        if eigenvalues.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::invalid(
                "eigenvalues",
                "eigenvalues must be non-increasing",
            ));
        }
        Ok(Self { eigenvalues })
    }

    /// `qₖ = scale / k^power` for `k = 1..=len`; `power > 1` keeps the full series summable.
    pub fn power_law(len: usize, scale: f64, power: f64) -> Result<Self> {
        Self::new(
            (1..=len)
                .map(|k| scale / libm::pow(k as f64, power))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Operator norm, the leading eigenvalue.
    pub fn norm(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Projection onto the first `n` eigenvectors.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(Self {
            eigenvalues: self.eigenvalues[..n].to_vec(),
        })
    }

    /// `⟨A v, w⟩` on the leading block of dimension `v.len()`.
    pub fn inner(&self, v: &[f64], w: &[f64]) -> f64 {
        v.iter()
            .zip(w)
            .zip(&self.eigenvalues)
            .map(|((a, b), q)| q * a * b)
            .sum()
    }
}

/// Gaussian measure `N(mean, s·Aₙ)` on the cylinder subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSpec {
    mean: Vec<f64>,
    scale: f64,
    covariance: TraceClassOperator,
}

impl GaussianSpec {
    pub fn centered(covariance: TraceClassOperator, scale: f64) -> Result<Self> {
        let mean = alloc::vec![0.0; covariance.dim()];
        Self::new(mean, scale, covariance)
    }

    pub fn new(mean: Vec<f64>, scale: f64, covariance: TraceClassOperator) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::invalid(
                "covariance_scale",
                "must be finite and positive",
            ));
        }
        check_dim(covariance.dim(), mean.len())?;
        if mean.iter().any(|m| !m.is_finite()) {
            return Err(Error::NonFinite {
                context: "gaussian mean",
            });
        }
        Ok(Self {
            mean,
            scale,
            covariance,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn covariance(&self) -> &TraceClassOperator {
        &self.covariance
    }

    pub fn is_centered(&self) -> bool {
        self.mean.iter().all(|m| *m == 0.0)
    }

    /// Marginal variance `s·qᵢ`.
    pub fn variance(&self, i: usize) -> f64 {
        self.scale * self.covariance.eigenvalue(i)
    }

    pub fn std_devs(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| sqrt(self.variance(i))).collect()
    }

    /// Diagonal of the scaled covariance `Ã = s·diag(q)`.
    pub fn covariance_diag(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.variance(i)).collect()
    }
}
