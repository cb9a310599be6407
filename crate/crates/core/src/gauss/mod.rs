//! Centered Gaussian measures with diagonal trace-class covariance.
//!
//! Everything here works in the eigenbasis of the covariance operator: a measure on the
//! cylinder subspace of dimension `n` is the product of one-dimensional normals with
//! variances `s·q₁, …, s·qₙ`.

mod hermite;
mod moments;
mod operator;
mod quadrature;

pub use hermite::GaussHermiteRule;
pub use moments::{expect_exp, expect_linear_exp, expect_quadratic, expect_quadratic_exp};
pub use operator::{GaussianSpec, TraceClassOperator};
pub use quadrature::{
    integrate, integrate_estimate, scale_identity_residual, Estimate, NodeSet, QuadratureSpec,
    DEFAULT_GH_NODES, MAX_GH_DIM, MC_BLOCK,
};
