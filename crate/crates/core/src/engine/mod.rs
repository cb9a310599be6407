//! Grid representation of `u(t, ·)`, the one-step Gaussian operator `S_τ` and its
//! Chernoff iteration `(S_{t/n})ⁿ u₀`.

mod diagnostics;
mod grid;
mod kernel;
mod solve;

pub use diagnostics::{
    coefficient_continuity_probe, norm_bound_check, tangency_residual, NormBound,
};
pub use grid::{BoundaryMode, GridField, Interpolation, MAX_GRID_DIM};
pub use kernel::{apply_s, apply_s_at, step_margin, DriftTilt, StepOptions, TAIL_SIGMAS};
pub use solve::{chernoff_solve, ChernoffPlan, ChernoffSolution, Convergence};
