use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::gauss::TraceClassOperator;
use crate::math::abs;
use crate::matrix::SquareMatrix;

pub const DEFAULT_FD_STEP: f64 = 1.0e-5;
/// Central second differences lose ~eps/h² to rounding, so they use a coarser step.
pub const DEFAULT_FD_STEP_SECOND: f64 = 1.0e-4;

type Eval = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type Grad = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
type Hess = Arc<dyn Fn(&[f64]) -> SquareMatrix + Send + Sync>;

/// A function of the first `dim` coordinates of the state.
///
/// Evaluation asserts `|f(x)| ≤ sup_bound`; `f64::INFINITY` declares no bound (polynomial
/// probes). Longer inputs are accepted and truncated to the leading `dim` coordinates.
#[derive(Clone)]
pub struct CylFunction {
    dim: usize,
    sup_bound: f64,
    eval: Eval,
    grad: Option<Grad>,
    hess: Option<Hess>,
    fd_step: f64,
    fd_step_second: f64,
}

impl fmt::Debug for CylFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CylFunction")
            .field("dim", &self.dim)
            .field("sup_bound", &self.sup_bound)
            .field("analytic_grad", &self.grad.is_some())
            .field("analytic_hess", &self.hess.is_some())
            .field("fd_step", &self.fd_step)
            .finish()
    }
}

impl CylFunction {
    pub fn new(
        dim: usize,
        sup_bound: f64,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dim", "must be positive"));
        }
        if sup_bound.is_nan() || sup_bound < 0.0 {
            return Err(Error::invalid("sup_bound", "must be non-negative"));
        }
        Ok(Self {
            dim,
            sup_bound,
            eval: Arc::new(eval),
            grad: None,
            hess: None,
            fd_step: DEFAULT_FD_STEP,
            fd_step_second: DEFAULT_FD_STEP_SECOND,
        })
    }

    /// Constant `c` with exact zero derivatives.
    pub fn constant(dim: usize, c: f64) -> Result<Self> {
        Ok(Self::new(dim, abs(c), move |_| c)?
            .with_gradient(move |_| vec![0.0; dim])
            .with_hessian(move |_| SquareMatrix::zeros(dim)))
    }

    pub fn with_gradient(
        mut self,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn with_hessian(
        mut self,
        hess: impl Fn(&[f64]) -> SquareMatrix + Send + Sync + 'static,
    ) -> Self {
        self.hess = Some(Arc::new(hess));
        self
    }

    pub fn with_fd_steps(mut self, first: f64, second: f64) -> Result<Self> {
        if !(first > 0.0 && second > 0.0 && first.is_finite() && second.is_finite()) {
            return Err(Error::invalid("fd_step", "must be finite and positive"));
        }
        self.fd_step = first;
        self.fd_step_second = second;
        Ok(self)
    }

    /// `α·f + β·h`, carrying analytic derivatives when both operands have them.
    pub fn linear_combination(alpha: f64, f: &Self, beta: f64, h: &Self) -> Result<Self> {
        let dim = f.dim.max(h.dim);
        let bound = abs(alpha) * f.sup_bound + abs(beta) * h.sup_bound;
        let (fe, he) = (f.eval.clone(), h.eval.clone());
        let (fd, hd) = (f.dim, h.dim);
        let mut out = Self::new(dim, bound, move |x| {
            alpha * fe(&x[..fd]) + beta * he(&x[..hd])
        })?;
        out.fd_step = f.fd_step.min(h.fd_step);
        out.fd_step_second = f.fd_step_second.min(h.fd_step_second);
        if let (Some(fg), Some(hg)) = (f.grad.clone(), h.grad.clone()) {
            out = out.with_gradient(move |x| {
                let mut g = vec![0.0; dim];
                for (i, v) in fg(&x[..fd]).into_iter().enumerate() {
                    g[i] += alpha * v;
                }
                for (i, v) in hg(&x[..hd]).into_iter().enumerate() {
                    g[i] += beta * v;
                }
                g
            });
        }
        if let (Some(fh), Some(hh)) = (f.hess.clone(), h.hess.clone()) {
            out = out.with_hessian(move |x| {
                let (a, b) = (fh(&x[..fd]), hh(&x[..hd]));
                SquareMatrix::from_fn(dim, |i, j| {
                    let av = if i < fd && j < fd { a[(i, j)] } else { 0.0 };
                    let bv = if i < hd && j < hd { b[(i, j)] } else { 0.0 };
                    alpha * av + beta * bv
                })
            });
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn fd_step(&self) -> f64 {
        self.fd_step
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    pub fn has_analytic_hessian(&self) -> bool {
        self.hess.is_some()
    }

    fn args<'a>(&self, x: &'a [f64]) -> Result<&'a [f64]> {
        if x.len() < self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(&x[..self.dim])
    }

    /// Evaluates, asserting finiteness and the declared sup bound.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let v = (self.eval)(self.args(x)?);
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "cylindrical function",
            });
        }
        if abs(v) > self.sup_bound * (1.0 + 1.0e-12) {
            return Err(Error::SupBoundExceeded {
                value: v,
                bound: self.sup_bound,
            });
        }
        Ok(v)
    }

    fn raw(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    /// Gradient in the first `dim` coordinates.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let x = self.args(x)?;
        let g = match &self.grad {
            Some(grad) => {
                let g = grad(x);
                if g.len() != self.dim {
                    return Err(Error::DimensionMismatch {
                        expected: self.dim,
                        found: g.len(),
                    });
                }
                g
            }
            None => self.fd_gradient(x),
        };
        if g.iter().all(|v| v.is_finite()) {
            Ok(g)
        } else {
            Err(Error::NonFinite {
                context: "gradient",
            })
        }
    }

    /// Central differences with `fd_step`, ignoring any analytic gradient.
    pub fn fd_gradient(&self, x: &[f64]) -> Vec<f64> {
        let h = self.fd_step;
        let mut probe = x[..self.dim].to_vec();
        (0..self.dim)
            .map(|i| {
                let xi = probe[i];
                probe[i] = xi + h;
                let up = self.raw(&probe);
                probe[i] = xi - h;
                let down = self.raw(&probe);
                probe[i] = xi;
                (up - down) / (2.0 * h)
            })
            .collect()
    }

    /// `∂ᵢ∂ᵢ f(x)`.
    pub fn second_partial(&self, i: usize, x: &[f64]) -> Result<f64> {
        let x = self.args(x)?;
        let v = match &self.hess {
            Some(hess) => {
                let m = hess(x);
                m.require_dim(self.dim)?;
                m[(i, i)]
            }
            None => {
                let h = self.fd_step_second;
                let mut probe = x.to_vec();
                let centre = self.raw(&probe);
                probe[i] = x[i] + h;
                let up = self.raw(&probe);
                probe[i] = x[i] - h;
                let down = self.raw(&probe);
                (up - 2.0 * centre + down) / (h * h)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                context: "second derivative",
            })
        }
    }

    /// Full Hessian; mixed partials by the four-point central stencil when not supplied.
    pub fn hessian(&self, x: &[f64]) -> Result<SquareMatrix> {
        let x = self.args(x)?;
        let m = match &self.hess {
            Some(hess) => {
                let m = hess(x);
                m.require_dim(self.dim)?;
                m
            }
            None => {
                let h = self.fd_step_second;
                let mut m = SquareMatrix::zeros(self.dim);
                let mut probe = x.to_vec();
                for i in 0..self.dim {
                    m[(i, i)] = self.second_partial(i, x)?;
                    for j in 0..i {
                        let mut corner = |si: f64, sj: f64| {
                            probe[i] = x[i] + si * h;
                            probe[j] = x[j] + sj * h;
                            let v = self.raw(&probe);
                            probe[i] = x[i];
                            probe[j] = x[j];
                            v
                        };
                        let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0)
                            + corner(-1.0, -1.0))
                            / (4.0 * h * h);
                        m[(i, j)] = v;
                        m[(j, i)] = v;
                    }
                }
                m
            }
        };
        if m.is_finite() {
            Ok(m)
        } else {
            Err(Error::NonFinite { context: "hessian" })
        }
    }

    /// Largest deviation between the supplied gradient and central differences over `probes`.
    /// Returns `None` when no analytic gradient is present.
    pub fn gradient_consistency(&self, probes: &[Vec<f64>]) -> Result<Option<f64>> {
        let Some(grad) = &self.grad else {
            return Ok(None);
        };
        let mut worst = 0.0f64;
        for x in probes {
            let x = self.args(x)?;
            let analytic = grad(x);
            for (a, d) in analytic.iter().zip(self.fd_gradient(x)) {
                worst = worst.max(abs(a - d));
            }
        }
        Ok(Some(worst))
    }
}

/// Gradient of `f` at `x` (analytic when supplied, central differences otherwise).
pub fn gradient(f: &CylFunction, x: &[f64]) -> Result<Vec<f64>> {
    f.gradient(x)
}

/// `tr(Aₙ f''(x)) = Σ qᵢ ∂ᵢ² f(x)` for diagonal `A`.
pub fn trace_hessian(a: &TraceClassOperator, f: &CylFunction, x: &[f64]) -> Result<f64> {
    if a.dim() < f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: a.dim(),
        });
    }
    let mut acc = 0.0;
    match &f.hess {
        Some(_) => {
            let m = f.hessian(x)?;
            for i in 0..f.dim() {
                acc += a.eigenvalue(i) * m[(i, i)];
            }
        }
        None => {
            for i in 0..f.dim() {
                acc += a.eigenvalue(i) * f.second_partial(i, x)?;
            }
        }
    }
    if acc.is_finite() {
        Ok(acc)
    } else {
        Err(Error::NonFinite {
            context: "trace of hessian",
        })
    }
}
