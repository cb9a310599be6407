use alloc::vec::Vec;

use super::CylFunction;
use crate::error::{Error, Result};
use crate::math::sqrt;

/// Drift field `B` in the cylinder basis.
#[derive(Debug, Clone)]
pub enum Drift {
    Zero,
    Field(Vec<CylFunction>),
}

/// The triple `(g, B, C)` with the ellipticity floor `g ≥ g₀ > 0`.
///
/// In the contractive regime every evaluation of `C` asserts `C(x) ≤ 0`.
#[derive(Debug, Clone)]
pub struct Coefficients {
    g: CylFunction,
    drift: Drift,
    c: CylFunction,
    g_floor: f64,
    contractive: bool,
}

impl Coefficients {
    /// Driftless coefficients; the contractive regime (`C ≤ 0`) is on by default.
    pub fn new(g: CylFunction, c: CylFunction, g_floor: f64) -> Result<Self> {
        if !(g_floor.is_finite() && g_floor > 0.0) {
            return Err(Error::invalid("g_floor", "must be finite and positive"));
        }
        if g.sup_bound() < g_floor {
            return Err(Error::invalid("g", "declared sup bound is below the floor"));
        }
        Ok(Self {
            g,
            drift: Drift::Zero,
            c,
            g_floor,
            contractive: true,
        })
    }

    /// Constant `g ≡ gamma`, `C ≡ c`, no drift, in `dim` coordinates.
    pub fn constant(dim: usize, gamma: f64, c: f64) -> Result<Self> {
        let coeffs = Self::new(
            CylFunction::constant(dim, gamma)?,
            CylFunction::constant(dim, c)?,
            gamma,
        )?;
        Ok(coeffs.contractive(c <= 0.0))
    }

    /// Components declared with `sup_bound == 0` are identically zero; an all-zero field
    /// collapses to [`Drift::Zero`].
    pub fn with_drift(mut self, components: Vec<CylFunction>) -> Result<Self> {
        if components.is_empty() || components.iter().all(|b| b.sup_bound() == 0.0) {
            self.drift = Drift::Zero;
        } else {
            self.drift = Drift::Field(components);
        }
        Ok(self)
    }

    pub fn contractive(mut self, on: bool) -> Self {
        self.contractive = on;
        self
    }

    pub fn is_contractive(&self) -> bool {
        self.contractive
    }

    pub fn drift_is_zero(&self) -> bool {
        matches!(self.drift, Drift::Zero)
    }

    pub fn drift(&self) -> &Drift {
        &self.drift
    }

    pub fn g(&self) -> &CylFunction {
        &self.g
    }

    pub fn c(&self) -> &CylFunction {
        &self.c
    }

    pub fn g_floor(&self) -> f64 {
        self.g_floor
    }

    /// Declared `sup g`.
    pub fn g_max(&self) -> f64 {
        self.g.sup_bound()
    }

    /// `B₀ ≥ sup ‖B(x)‖` from the component bounds.
    pub fn drift_bound(&self) -> f64 {
        match &self.drift {
            Drift::Zero => 0.0,
            Drift::Field(b) => sqrt(b.iter().map(|f| f.sup_bound() * f.sup_bound()).sum()),
        }
    }

    /// Declared `‖C‖ = sup |C|`.
    pub fn c_norm(&self) -> f64 {
        self.c.sup_bound()
    }

    /// Number of leading coordinates the coefficients depend on.
    pub fn dim(&self) -> usize {
        let drift = match &self.drift {
            Drift::Zero => 0,
            Drift::Field(b) => b.len().max(b.iter().map(|f| f.dim()).max().unwrap_or(0)),
        };
        self.g.dim().max(self.c.dim()).max(drift)
    }

    pub fn g_at(&self, x: &[f64]) -> Result<f64> {
        let v = self.g.eval(x)?;
        if v < self.g_floor {
            return Err(Error::BelowFloor {
                value: v,
                floor: self.g_floor,
            });
        }
        Ok(v)
    }

    pub fn c_at(&self, x: &[f64]) -> Result<f64> {
        let v = self.c.eval(x)?;
        if self.contractive && v > 0.0 {
            return Err(Error::PositivePotential { value: v });
        }
        Ok(v)
    }

    /// Writes `B(x)` into `out` (zero-padded to `out.len()`).
    pub fn drift_at(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        out.iter_mut().for_each(|v| *v = 0.0);
        if let Drift::Field(b) = &self.drift {
            if b.len() > out.len() {
                return Err(Error::DimensionMismatch {
                    expected: out.len(),
                    found: b.len(),
                });
            }
            for (o, f) in out.iter_mut().zip(b) {
                *o = f.eval(x)?;
            }
        }
        Ok(())
    }
}
