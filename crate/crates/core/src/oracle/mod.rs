//! Reference solvers independent of the Gaussian-integral path: a closed form for
//! constant coefficients, finite differences in one and two dimensions, and a
//! one-dimensional resolvent solve.

mod exact;
mod fd;
mod resolvent;
pub mod tridiag;

pub use exact::exact_constant_solution;
pub use fd::{fd_solve, FdBoundary, FdGeometry, FdProblem, FdScheme, FdSolution};
pub use resolvent::{resolvent_solve, ResolventSolution};
