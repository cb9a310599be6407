use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::math::{abs, floor};

pub const MAX_GRID_DIM: usize = 4;

/// How values outside the grid box are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryMode {
    /// Coordinates are clamped into the box.
    ClampNearest,
    /// Any point outside the box takes this value.
    Constant(f64),
    /// Axis `[lo, hi)` wraps with period `hi - lo`; `hi` itself is not a grid point.
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    Linear,
    /// Tensor four-point Lagrange.
    #[default]
    Cubic,
}

/// Values on a uniform tensor grid, last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    bounds: Vec<(f64, f64)>,
    points_per_axis: usize,
    values: Vec<f64>,
    boundary: BoundaryMode,
}

fn validate_geometry(
    bounds: &[(f64, f64)],
    points_per_axis: usize,
    boundary: BoundaryMode,
) -> Result<()> {
    let dim = bounds.len();
    if dim == 0 || dim > MAX_GRID_DIM {
        return Err(Error::invalid(
            "bounds",
            alloc::format!("grid dimension must be 1..={MAX_GRID_DIM}"),
        ));
    }
    if points_per_axis < 2 {
        return Err(Error::invalid(
            "points_per_axis",
            "need at least two points per axis",
        ));
    }
    if bounds
        .iter()
        .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && hi > lo))
    {
        return Err(Error::invalid("bounds", "each axis needs finite lo < hi"));
    }
    if let BoundaryMode::Constant(c) = boundary {
        if !c.is_finite() {
            return Err(Error::NonFinite {
                context: "boundary constant",
            });
        }
    }
    Ok(())
}

impl GridField {
    pub fn new(
        bounds: Vec<(f64, f64)>,
        points_per_axis: usize,
        boundary: BoundaryMode,
        values: Vec<f64>,
    ) -> Result<Self> {
        validate_geometry(&bounds, points_per_axis, boundary)?;
        check_dim(points_per_axis.pow(bounds.len() as u32), values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "grid values",
            });
        }
        Ok(Self {
            bounds,
            points_per_axis,
            values,
            boundary,
        })
    }

    pub fn from_fn(
        bounds: Vec<(f64, f64)>,
        points_per_axis: usize,
        boundary: BoundaryMode,
        f: impl Fn(&[f64]) -> f64,
    ) -> Result<Self> {
        validate_geometry(&bounds, points_per_axis, boundary)?;
        let shell = Self {
            bounds,
            points_per_axis,
            values: Vec::new(),
            boundary,
        };
        let mut x = vec![0.0; shell.dim()];
        let values = (0..shell.total_points())
            .map(|k| {
                shell.point_into(k, &mut x);
                f(&x)
            })
            .collect();
        Self::new(shell.bounds, points_per_axis, boundary, values)
    }

    /// Same geometry, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(
            self.bounds.clone(),
            self.points_per_axis,
            self.boundary,
            values,
        )
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn total_points(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        match self.boundary {
            BoundaryMode::Periodic => (hi - lo) / self.points_per_axis as f64,
            _ => (hi - lo) / (self.points_per_axis - 1) as f64,
        }
    }

    pub fn coordinate(&self, axis: usize, j: usize) -> f64 {
        self.bounds[axis].0 + j as f64 * self.spacing(axis)
    }

    /// Coordinates of flat index `k`.
    pub fn point_into(&self, k: usize, out: &mut [f64]) {
        let mut rest = k;
        for axis in (0..self.dim()).rev() {
            let j = rest % self.points_per_axis;
            rest /= self.points_per_axis;
            out[axis] = self.coordinate(axis, j);
        }
    }

    pub fn point(&self, k: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim()];
        self.point_into(k, &mut x);
        x
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(abs(*v)))
    }

    pub fn sup_norm_on(&self, indices: &[usize]) -> f64 {
        indices.iter().fold(0.0, |m, &k| m.max(abs(self.values[k])))
    }

    /// Indices of points at distance at least `margin` from every face of the box.
    /// Periodic grids have no faces, so every point qualifies.
    pub fn interior_indices(&self, margin: f64) -> Vec<usize> {
        if self.boundary == BoundaryMode::Periodic {
            return (0..self.len()).collect();
        }
        let eps = 1.0e-9 * self.spacing(0);
        let mut x = vec![0.0; self.dim()];
        (0..self.len())
            .filter(|&k| {
                self.point_into(k, &mut x);
                x.iter()
                    .zip(&self.bounds)
                    .all(|(v, (lo, hi))| *v >= lo + margin - eps && *v <= hi - margin + eps)
            })
            .collect()
    }

    /// Value at an arbitrary point, using the boundary mode outside the box.
    pub fn interpolate(&self, x: &[f64], method: Interpolation) -> f64 {
        let dim = self.dim();
        let width = match method {
            Interpolation::Linear => 2,
            Interpolation::Cubic => 4,
        }
        .min(self.points_per_axis);
        let mut idx = [[0usize; 4]; MAX_GRID_DIM];
        let mut wts = [[0.0f64; 4]; MAX_GRID_DIM];
        for axis in 0..dim {
            let (lo, hi) = self.bounds[axis];
            let h = self.spacing(axis);
            let n = self.points_per_axis;
            let mut xa = x[axis];
            match self.boundary {
                BoundaryMode::Constant(c) => {
                    let tol = 1.0e-12 * h;
                    if xa < lo - tol || xa > hi + tol {
                        return c;
                    }
                    xa = xa.clamp(lo, hi);
                }
                BoundaryMode::ClampNearest => xa = xa.clamp(lo, hi),
                BoundaryMode::Periodic => {}
            }
            let s = (xa - lo) / h;
            let cell = floor(s);
            match self.boundary {
                BoundaryMode::Periodic => {
                    let first = cell as i64 - (width as i64 / 2 - 1);
                    let t = s - first as f64;
                    stencil_weights(width, t, &mut wts[axis]);
                    for m in 0..width {
                        idx[axis][m] = (first + m as i64).rem_euclid(n as i64) as usize;
                    }
                }
                _ => {
                    let first = (cell as i64 - (width as i64 / 2 - 1)).clamp(0, (n - width) as i64)
                        as usize;
                    let t = s - first as f64;
                    stencil_weights(width, t, &mut wts[axis]);
                    for m in 0..width {
                        idx[axis][m] = first + m;
                    }
                }
            }
        }
        // tensor sum over width^dim stencil points
        let mut acc = 0.0;
        let mut odo = [0usize; MAX_GRID_DIM];
        loop {
            let mut flat = 0;
            let mut w = 1.0;
            for axis in 0..dim {
                flat = flat * self.points_per_axis + idx[axis][odo[axis]];
                w *= wts[axis][odo[axis]];
            }
            acc += w * self.values[flat];
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return acc;
                }
                axis -= 1;
                odo[axis] += 1;
                if odo[axis] < width {
                    break;
                }
                odo[axis] = 0;
            }
        }
    }
}

/// Lagrange weights for nodes `0..width` evaluated at local coordinate `t`.
fn stencil_weights(width: usize, t: f64, out: &mut [f64; 4]) {
    match width {
        2 => {
            out[0] = 1.0 - t;
            out[1] = t;
        }
        3 => {
            out[0] = 0.5 * (t - 1.0) * (t - 2.0);
            out[1] = -t * (t - 2.0);
            out[2] = 0.5 * t * (t - 1.0);
        }
        _ => {
            out[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
            out[1] = 0.5 * t * (t - 2.0) * (t - 3.0);
            out[2] = -0.5 * t * (t - 1.0) * (t - 3.0);
            out[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
        }
    }
}
