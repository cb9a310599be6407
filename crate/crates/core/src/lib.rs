//! Chernoff approximation of parabolic equations with trace-class diffusion.
//!
//! Solves `u'_t = g(x)·tr(A u'') + ⟨u', A B(x)⟩ + C(x) u` on the finite-dimensional
//! cylinder subspace spanned by the leading eigenvectors of a trace-class covariance
//! operator `A`. The solution is approximated by iterating a one-step Gaussian integral
//! operator `S_τ` on a tensor grid, `u(t) ≈ (S_{t/n})^n u₀`.
//!
//! Modules:
//! - [`gauss`]: Gaussian measures with diagonal trace-class covariance, closed-form
//!   moment identities, Gauss–Hermite and Monte Carlo integration.
//! - [`cylinder`]: cylindrical functions, their derivatives and the operator `L`.
//! - [`engine`]: grid fields, the operator `S_τ`, the Chernoff iteration and its diagnostics.
//! - [`oracle`]: closed-form and finite-difference reference solvers.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std` feature.
//! The `parallel` feature evaluates grid points and Monte Carlo blocks on the rayon pool;
//! results are bit-identical to the serial path.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cylinder;
pub mod engine;
mod error;
pub mod gauss;
pub mod matrix;
pub mod oracle;

mod math;
mod par;

pub use cylinder::{Coefficients, CylFunction, OperatorL};
pub use engine::{BoundaryMode, ChernoffPlan, DriftTilt, GridField, Interpolation, StepOptions};
pub use error::{Error, Result};
pub use gauss::{GaussianSpec, QuadratureSpec, TraceClassOperator};
pub use matrix::SquareMatrix;
