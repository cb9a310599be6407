use alloc::vec;
use alloc::vec::Vec;

use crate::cylinder::OperatorL;
use crate::engine::{BoundaryMode, GridField};
use crate::error::{check_dim, Error, Result};
use crate::math::abs;

use super::tridiag;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    /// Crank–Nicolson in 1D; Peaceman–Rachford ADI (also second order) in 2D.
    CrankNicolson,
    ExplicitEuler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdBoundary {
    /// Axis `[lo, hi)` with `hi ≡ lo`.
    Periodic,
    /// Nodes on the faces (`lo` and `hi` included) are held at this value.
    Dirichlet(f64),
}

/// Uniform tensor grid for the finite-difference oracle (dimension 1 or 2).
#[derive(Debug, Clone, PartialEq)]
pub struct FdGeometry {
    pub bounds: Vec<(f64, f64)>,
    pub points_per_axis: usize,
    pub boundary: FdBoundary,
}

impl FdGeometry {
    pub fn new(
        bounds: Vec<(f64, f64)>,
        points_per_axis: usize,
        boundary: FdBoundary,
    ) -> Result<Self> {
        if bounds.is_empty() || bounds.len() > 2 {
            return Err(Error::invalid(
                "dim",
                "finite-difference oracle supports dimension 1 or 2",
            ));
        }
        if points_per_axis < 3 {
            return Err(Error::invalid(
                "points_per_axis",
                "need at least three points per axis",
            ));
        }
        if bounds
            .iter()
            .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && hi > lo))
        {
            return Err(Error::invalid("bounds", "each axis needs finite lo < hi"));
        }
        Ok(Self {
            bounds,
            points_per_axis,
            boundary,
        })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        match self.boundary {
            FdBoundary::Periodic => (hi - lo) / self.points_per_axis as f64,
            FdBoundary::Dirichlet(_) => (hi - lo) / (self.points_per_axis - 1) as f64,
        }
    }

    pub fn boundary_mode(&self) -> BoundaryMode {
        match self.boundary {
            FdBoundary::Periodic => BoundaryMode::Periodic,
            FdBoundary::Dirichlet(v) => BoundaryMode::Constant(v),
        }
    }

    pub fn field_from_fn(&self, f: impl Fn(&[f64]) -> f64) -> Result<GridField> {
        GridField::from_fn(
            self.bounds.clone(),
            self.points_per_axis,
            self.boundary_mode(),
            f,
        )
    }

    fn check_field(&self, field: &GridField) -> Result<()> {
        check_dim(self.dim(), field.dim())?;
        check_dim(self.points_per_axis, field.points_per_axis())?;
        if field.bounds() != self.bounds.as_slice() || field.boundary() != self.boundary_mode() {
            return Err(Error::invalid(
                "u0",
                "field geometry differs from the oracle grid",
            ));
        }
        Ok(())
    }

    fn is_face(&self, k: usize) -> bool {
        if self.boundary == FdBoundary::Periodic {
            return false;
        }
        let n = self.points_per_axis;
        let mut rest = k;
        for _ in 0..self.dim() {
            let j = rest % n;
            rest /= n;
            if j == 0 || j == n - 1 {
                return true;
            }
        }
        false
    }
}

#[derive(Debug, Clone)]
pub struct FdProblem {
    pub op: OperatorL,
    pub geometry: FdGeometry,
    pub t_final: f64,
    pub time_steps: usize,
    pub scheme: FdScheme,
}

impl FdProblem {
    pub fn new(
        op: OperatorL,
        geometry: FdGeometry,
        t_final: f64,
        time_steps: usize,
        scheme: FdScheme,
    ) -> Result<Self> {
        check_dim(op.dim(), geometry.dim())?;
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::invalid("t_final", "must be finite and positive"));
        }
        if time_steps == 0 {
            return Err(Error::invalid("time_steps", "must be positive"));
        }
        let problem = Self {
            op,
            geometry,
            t_final,
            time_steps,
            scheme,
        };
        if scheme == FdScheme::ExplicitEuler {
            let h = (0..problem.geometry.dim())
                .map(|a| problem.geometry.spacing(a))
                .fold(f64::INFINITY, f64::min);
            let q1 = problem.op.covariance().norm();
            let limit = h * h
                / (2.0 * problem.op.coefficients().g_max() * q1 * problem.geometry.dim() as f64);
            if problem.dt() > limit {
                return Err(Error::Unstable {
                    dt: problem.dt(),
                    limit,
                });
            }
        }
        Ok(problem)
    }

    pub fn dt(&self) -> f64 {
        self.t_final / self.time_steps as f64
    }
}

#[derive(Debug, Clone)]
pub struct FdSolution {
    pub field: GridField,
    /// Sup-norm of the initial field followed by the value after each time step.
    pub step_sup_norms: Vec<f64>,
}

/// Discrete `L` restricted to one grid line along one axis.
pub(crate) struct Line {
    pub(crate) nodes: Vec<usize>,
    pub(crate) lower: Vec<f64>,
    pub(crate) diag: Vec<f64>,
    pub(crate) upper: Vec<f64>,
}

impl Line {
    fn apply(&self, u: &[f64], cyclic: bool, out: &mut [f64]) {
        let n = self.nodes.len();
        for i in 0..n {
            let mut v = self.diag[i] * u[self.nodes[i]];
            if i > 0 {
                v += self.lower[i] * u[self.nodes[i - 1]];
            } else if cyclic {
                v += self.lower[0] * u[self.nodes[n - 1]];
            }
            if i + 1 < n {
                v += self.upper[i] * u[self.nodes[i + 1]];
            } else if cyclic {
                v += self.upper[n - 1] * u[self.nodes[0]];
            }
            out[i] = v;
        }
    }
}

/// Per-axis line operators for `L = Σ_axis L_axis`, the potential split evenly across axes.
pub(crate) fn assemble(op: &OperatorL, geometry: &FdGeometry) -> Result<Vec<Vec<Line>>> {
    let dim = geometry.dim();
    let n = geometry.points_per_axis;
    let total = n.pow(dim as u32);
    let coeffs = op.coefficients();
    let mut x = vec![0.0; dim];
    let mut b = vec![0.0; dim];
    let mut g = vec![0.0; total];
    let mut c = vec![0.0; total];
    let mut drift = vec![0.0; total * dim];
    for k in 0..total {
        let mut rest = k;
        for axis in (0..dim).rev() {
            x[axis] = geometry.bounds[axis].0 + (rest % n) as f64 * geometry.spacing(axis);
            rest /= n;
        }
        g[k] = coeffs.g_at(&x)?;
        c[k] = coeffs.c_at(&x)?;
        coeffs.drift_at(&x, &mut b)?;
        drift[k * dim..(k + 1) * dim].copy_from_slice(&b);
    }
    let stride = |axis: usize| n.pow((dim - 1 - axis) as u32);
    let mut axes = Vec::with_capacity(dim);
    for axis in 0..dim {
        let h = geometry.spacing(axis);
        let q = op.covariance().eigenvalue(axis);
        let s = stride(axis);
        let mut lines = Vec::new();
        for start in 0..total {
            if (start / s) % n != 0 {
                continue;
            }
            let nodes: Vec<usize> = (0..n).map(|j| start + j * s).collect();
            let mut lower = vec![0.0; n];
            let mut diag = vec![0.0; n];
            let mut upper = vec![0.0; n];
            for (i, &k) in nodes.iter().enumerate() {
                if geometry.is_face(k) {
                    continue;
                }
                let d = g[k] * q / (h * h);
                let e = q * drift[k * dim + axis] / (2.0 * h);
                lower[i] = d - e;
                diag[i] = -2.0 * d + c[k] / dim as f64;
                upper[i] = d + e;
            }
            lines.push(Line {
                nodes,
                lower,
                diag,
                upper,
            });
        }
        axes.push(lines);
    }
    Ok(axes)
}

/// `(I − θ L_line) x = rhs` along one line, written back into `u`.
fn implicit_line(line: &Line, theta: f64, rhs: &[f64], cyclic: bool, u: &mut [f64]) -> Result<()> {
    let lower: Vec<f64> = line.lower.iter().map(|v| -theta * v).collect();
    let upper: Vec<f64> = line.upper.iter().map(|v| -theta * v).collect();
    let diag: Vec<f64> = line.diag.iter().map(|v| 1.0 - theta * v).collect();
    for i in 0..diag.len() {
        if abs(diag[i]) < abs(lower[i]) + abs(upper[i]) {
            return Err(Error::invalid(
                "scheme",
                "Crank–Nicolson system is not diagonally dominant",
            ));
        }
    }
    let x = if cyclic {
        tridiag::solve_cyclic(&lower, &diag, &upper, rhs)?
    } else {
        tridiag::solve(&lower, &diag, &upper, rhs)?
    };
    for (&k, v) in line.nodes.iter().zip(x) {
        u[k] = v;
    }
    Ok(())
}

/// Explicit half step `u + θ·L_axis u` for every line of one axis.
fn explicit_axis(lines: &[Line], theta: f64, u: &[f64], cyclic: bool, out: &mut [f64]) {
    let mut buf = Vec::new();
    for line in lines {
        buf.resize(line.nodes.len(), 0.0);
        line.apply(u, cyclic, &mut buf);
        for (&k, lv) in line.nodes.iter().zip(&buf) {
            out[k] = u[k] + theta * lv;
        }
    }
}

/// Solves `u_t = Lu` to `t_final` from `u0`, which must live on the problem's grid.
pub fn fd_solve(problem: &FdProblem, u0: &GridField) -> Result<FdSolution> {
    let geometry = &problem.geometry;
    geometry.check_field(u0)?;
    let axes = assemble(&problem.op, geometry)?;
    let cyclic = geometry.boundary == FdBoundary::Periodic;
    let dt = problem.dt();
    let mut u = u0.values().to_vec();
    if let FdBoundary::Dirichlet(v) = geometry.boundary {
        for (k, value) in u.iter_mut().enumerate() {
            if geometry.is_face(k) {
                *value = v;
            }
        }
    }
    let sup = |u: &[f64]| u.iter().fold(0.0f64, |m, v| m.max(abs(*v)));
    let mut step_sup_norms = Vec::with_capacity(problem.time_steps + 1);
    step_sup_norms.push(sup(&u));
    let mut scratch = vec![0.0; u.len()];
    let mut rhs = Vec::new();
    for _ in 0..problem.time_steps {
        match (problem.scheme, axes.len()) {
            (FdScheme::ExplicitEuler, _) => {
                scratch.copy_from_slice(&u);
                for lines in &axes {
                    let mut buf = Vec::new();
                    for line in lines {
                        buf.resize(line.nodes.len(), 0.0);
                        line.apply(&u, cyclic, &mut buf);
                        for (&k, lv) in line.nodes.iter().zip(&buf) {
                            scratch[k] += dt * lv;
                        }
                    }
                }
                core::mem::swap(&mut u, &mut scratch);
            }
            (FdScheme::CrankNicolson, 1) => {
                explicit_axis(&axes[0], 0.5 * dt, &u, cyclic, &mut scratch);
                for line in &axes[0] {
                    rhs.clear();
                    rhs.extend(line.nodes.iter().map(|&k| scratch[k]));
                    implicit_line(line, 0.5 * dt, &rhs, cyclic, &mut u)?;
                }
            }
            (FdScheme::CrankNicolson, _) => {
                // Peaceman–Rachford: implicit in axis 0, then in axis 1.
                explicit_axis(&axes[1], 0.5 * dt, &u, cyclic, &mut scratch);
                for line in &axes[0] {
                    rhs.clear();
                    rhs.extend(line.nodes.iter().map(|&k| scratch[k]));
                    implicit_line(line, 0.5 * dt, &rhs, cyclic, &mut u)?;
                }
                explicit_axis(&axes[0], 0.5 * dt, &u, cyclic, &mut scratch);
                for line in &axes[1] {
                    rhs.clear();
                    rhs.extend(line.nodes.iter().map(|&k| scratch[k]));
                    implicit_line(line, 0.5 * dt, &rhs, cyclic, &mut u)?;
                }
            }
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "finite-difference state",
            });
        }
        step_sup_norms.push(sup(&u));
    }
    Ok(FdSolution {
        field: u0.with_values(u)?,
        step_sup_norms,
    })
}
