//! Cylindrical functions `f(x) = fⁿ(x₁, …, xₙ)` in the eigenbasis of `A`, and the
//! differential operator `L = g·tr(A ∂²) + ⟨∂, A B⟩ + C` restricted to them.

mod coefficients;
mod function;
mod operator;

pub use coefficients::{Coefficients, Drift};
pub use function::{gradient, trace_hessian, CylFunction, DEFAULT_FD_STEP, DEFAULT_FD_STEP_SECOND};
pub use operator::{apply_l, dissipativity_witness, OperatorL, Witness};
