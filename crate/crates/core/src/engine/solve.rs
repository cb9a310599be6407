use alloc::vec::Vec;

use super::kernel::{apply_kernel, check_margin, Kernel};
use super::{step_margin, GridField, StepOptions};
use crate::cylinder::OperatorL;
use crate::error::{check_dim, Error, Result};

/// Whether `(S_{t/n})ⁿ u₀` is known to converge to the solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    /// No drift: the closure of `L` generates a contraction-bounded semigroup.
    Proven,
    /// Drift present: the limit is the solution provided the semigroup exists.
    ConditionalOnSemigroup,
}

#[derive(Debug, Clone)]
pub struct ChernoffPlan {
    pub op: OperatorL,
    pub t_final: f64,
    pub steps: usize,
    pub options: StepOptions,
}

impl ChernoffPlan {
    pub fn new(op: OperatorL, t_final: f64, steps: usize, options: StepOptions) -> Result<Self> {
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::invalid("t_final", "must be finite and positive"));
        }
        if steps == 0 {
            return Err(Error::invalid("steps", "must be positive"));
        }
        options.quad.validate(op.dim())?;
        Ok(Self {
            op,
            t_final,
            steps,
            options,
        })
    }

    pub fn tau(&self) -> f64 {
        self.t_final / self.steps as f64
    }

    /// Distance from the faces beyond which the whole chain is unaffected by truncation.
    pub fn truncation_margin(&self) -> f64 {
        step_margin(&self.op, self.t_final, self.options.tilt)
    }

    /// Same plan at another final time.
    pub fn at_time(&self, t_final: f64) -> Result<Self> {
        Self::new(self.op.clone(), t_final, self.steps, self.options)
    }

    pub fn with_op(&self, op: OperatorL) -> Result<Self> {
        Self::new(op, self.t_final, self.steps, self.options)
    }

    pub fn convergence(&self) -> Convergence {
        if self.op.coefficients().drift_is_zero() {
            Convergence::Proven
        } else {
            Convergence::ConditionalOnSemigroup
        }
    }
}

#[derive(Debug, Clone)]
pub struct ChernoffSolution {
    pub field: GridField,
    /// Interior sup-norms: entry 0 is `u₀`, entry `k` is after step `k`.
    pub step_sup_norms: Vec<f64>,
    /// Grid indices outside the truncation margin of the full chain.
    pub interior: Vec<usize>,
    pub convergence: Convergence,
}

/// `(S_{t/n})ⁿ u₀` by `n` successive kernel applications on the grid of `u₀`.
pub fn chernoff_solve(plan: &ChernoffPlan, u0: &GridField) -> Result<ChernoffSolution> {
    check_dim(plan.op.dim(), u0.dim())?;
    let margin = plan.truncation_margin();
    check_margin(u0, margin)?;
    let interior = u0.interior_indices(margin);
    if interior.is_empty() {
        let (lo, hi) = u0.bounds()[0];
        return Err(Error::TruncationMargin {
            axis: 0,
            half_width: 0.5 * (hi - lo),
            margin,
        });
    }
    let kernel = Kernel::new(&plan.op, plan.tau(), &plan.options.quad, plan.options.tilt)?;
    let mut field = u0.clone();
    let mut step_sup_norms = Vec::with_capacity(plan.steps + 1);
    step_sup_norms.push(field.sup_norm_on(&interior));
    for _ in 0..plan.steps {
        field = apply_kernel(&kernel, &field, plan.options.interpolation)?;
        step_sup_norms.push(field.sup_norm_on(&interior));
    }
    Ok(ChernoffSolution {
        field,
        step_sup_norms,
        interior,
        convergence: plan.convergence(),
    })
}
