//! Builds engine objects from a validated [`ExperimentConfig`].

use std::sync::Arc;

use chernoff_core::engine::{chernoff_solve, ChernoffSolution};
use chernoff_core::oracle::{
    exact_constant_solution, fd_solve, FdBoundary, FdGeometry, FdProblem, FdScheme,
};
use chernoff_core::{
    ChernoffPlan, Coefficients, CylFunction, GridField, Interpolation, OperatorL, StepOptions,
    TraceClassOperator,
};

use crate::config::{ExperimentConfig, FunctionSpec, InitialSpec, OracleBoundary, OracleSpec};
use crate::error::{CliError, ConfigField};

pub type Initial = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Everything a command needs, resolved from the config.
pub struct Problem {
    pub config: ExperimentConfig,
    pub covariance: TraceClassOperator,
    pub op: OperatorL,
    pub initial: Initial,
    pub u0: GridField,
    pub options: StepOptions,
    /// `--seed` if given, else the Monte Carlo seed of the config.
    pub seed: Option<u64>,
}

impl Problem {
    pub fn from_config(
        config: ExperimentConfig,
        seed_override: Option<u64>,
    ) -> Result<Self, CliError> {
        let covariance =
            TraceClassOperator::new(config.eigenvalues.clone()).field("eigenvalues")?;
        let coeffs = build_coefficients(&config, 0.0, 0.0)?;
        let op = OperatorL::with_dim(coeffs, &covariance, config.dim).field("coefficients")?;
        let initial = build_initial(&config.initial);
        let bounds = config.grid.bounds.iter().map(|b| (b[0], b[1])).collect();
        let f = initial.clone();
        let u0 = GridField::from_fn(
            bounds,
            config.grid.points_per_axis,
            config.grid.boundary.into(),
            |x| f(x),
        )
        .field("grid")?;
        let quad = config.quadrature.to_spec(seed_override);
        quad.validate(config.dim).field("quadrature")?;
        let options = StepOptions {
            quad,
            interpolation: config.interpolation.into(),
            tilt: config.tilt.into(),
        };
        let seed = quad.seed();
        Ok(Self {
            config,
            covariance,
            op,
            initial,
            u0,
            options,
            seed,
        })
    }

    pub fn plan(&self, steps: usize) -> Result<ChernoffPlan, CliError> {
        Ok(ChernoffPlan::new(
            self.op.clone(),
            self.config.t_final,
            steps,
            self.options,
        )?)
    }

    pub fn solve(&self, steps: usize) -> Result<ChernoffSolution, CliError> {
        Ok(chernoff_solve(&self.plan(steps)?, &self.u0)?)
    }

    /// Operator with `g + dg` and `C + dc`, for the continuity probe.
    pub fn perturbed(&self, dg: f64, dc: f64) -> Result<OperatorL, CliError> {
        let coeffs = build_coefficients(&self.config, dg, dc)?;
        Ok(OperatorL::with_dim(
            coeffs,
            &self.covariance,
            self.config.dim,
        )?)
    }

    /// Reference solution at `t_final`, or a config error when none is configured.
    pub fn oracle(&self) -> Result<Oracle, CliError> {
        let spec = self
            .config
            .oracle
            .as_ref()
            .ok_or_else(|| CliError::config("oracle", "this command needs an oracle"))?;
        match spec {
            OracleSpec::ExactConstant => self.exact_oracle(),
            OracleSpec::CrankNicolson {
                points_per_axis,
                time_steps,
                bounds,
                boundary,
            } => {
                if self.config.dim > 2 {
                    return Err(CliError::config(
                        "oracle",
                        "Crank–Nicolson oracle supports dim 1 or 2",
                    ));
                }
                let bounds = bounds
                    .as_ref()
                    .unwrap_or(&self.config.grid.bounds)
                    .iter()
                    .map(|b| (b[0], b[1]))
                    .collect();
                let boundary = match boundary {
                    OracleBoundary::Periodic => FdBoundary::Periodic,
                    OracleBoundary::Dirichlet(v) => FdBoundary::Dirichlet(*v),
                };
                let geometry =
                    FdGeometry::new(bounds, *points_per_axis, boundary).field("oracle")?;
                let problem = FdProblem::new(
                    self.op.clone(),
                    geometry.clone(),
                    self.config.t_final,
                    *time_steps,
                    FdScheme::CrankNicolson,
                )
                .field("oracle")?;
                let f = self.initial.clone();
                let u0 = geometry.field_from_fn(|x| f(x))?;
                Ok(Oracle::Grid(fd_solve(&problem, &u0)?.field))
            }
        }
    }

    fn exact_oracle(&self) -> Result<Oracle, CliError> {
        let c = &self.config.coefficients;
        let (FunctionSpec::Constant { value: gamma }, FunctionSpec::Constant { value: cv }) =
            (&c.g, &c.c)
        else {
            return Err(CliError::config(
                "oracle",
                "exact_constant needs constant g and c",
            ));
        };
        if c.drift
            .iter()
            .any(|d| !matches!(d, FunctionSpec::Constant { value } if *value == 0.0))
        {
            return Err(CliError::config(
                "oracle",
                "exact_constant needs zero drift",
            ));
        }
        let k = match self.config.initial {
            InitialSpec::Cosine { k } => k,
            InitialSpec::Constant { value } => {
                return Ok(Oracle::Exact {
                    gamma: *gamma,
                    c: *cv,
                    k: 0.0,
                    q: vec![],
                    scale: value,
                })
            }
            InitialSpec::GaussianBump { .. } => {
                return Err(CliError::config(
                    "oracle",
                    "exact_constant needs a cosine or constant initial condition",
                ))
            }
        };
        let q = self.covariance.eigenvalues()[..self.config.dim].to_vec();
        Ok(Oracle::Exact {
            gamma: *gamma,
            c: *cv,
            k,
            q,
            scale: 1.0,
        })
    }
}

pub enum Oracle {
    /// `scale·e^{ct}·Π_i e^{−γq_ik²t} cos(k x_i)`.
    Exact {
        gamma: f64,
        c: f64,
        k: f64,
        q: Vec<f64>,
        scale: f64,
    },
    Grid(GridField),
}

impl Oracle {
    pub fn value(&self, t: f64, x: &[f64]) -> f64 {
        match self {
            Oracle::Exact {
                gamma,
                c,
                k,
                q,
                scale,
            } => {
                let mut v = scale * (c * t).exp();
                for (qi, xi) in q.iter().zip(x) {
                    v *= exact_constant_solution(*gamma, *qi, 0.0, *k, t, *xi);
                }
                v
            }
            Oracle::Grid(field) => field.interpolate(x, Interpolation::Cubic),
        }
    }

    /// `max |u − oracle|` over the given indices of `u`.
    pub fn sup_error(&self, t: f64, u: &GridField, indices: &[usize]) -> f64 {
        let mut x = vec![0.0; u.dim()];
        indices.iter().fold(0.0f64, |worst, &k| {
            u.point_into(k, &mut x);
            worst.max((u.values()[k] - self.value(t, &x)).abs())
        })
    }
}

fn build_coefficients(
    config: &ExperimentConfig,
    dg: f64,
    dc: f64,
) -> Result<Coefficients, CliError> {
    let c = &config.coefficients;
    let dim = config.dim;
    if c.contractive && spec_max(&c.c) + dc > 0.0 {
        return Err(CliError::config(
            "coefficients.c",
            "c must be <= 0 when contractive is true",
        ));
    }
    let g = build_function(&c.g, dim, dg).field("coefficients.g")?;
    let cf = build_function(&c.c, dim, dc).field("coefficients.c")?;
    let mut coeffs = Coefficients::new(g, cf, c.g_floor)
        .field("coefficients.g_floor")?
        .contractive(c.contractive);
    if !c.drift.is_empty() {
        let drift = c
            .drift
            .iter()
            .map(|s| build_function(s, dim, 0.0))
            .collect::<chernoff_core::Result<Vec<_>>>()
            .field("coefficients.drift")?;
        coeffs = coeffs.with_drift(drift).field("coefficients.drift")?;
    }
    Ok(coeffs)
}

fn spec_max(spec: &FunctionSpec) -> f64 {
    match spec {
        FunctionSpec::Constant { value } => *value,
        FunctionSpec::OnePlusHalfSin { .. } => 1.5,
        FunctionSpec::Table { y, .. } => y.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

/// `spec + offset` as a cylindrical function of `dim` coordinates.
pub fn build_function(
    spec: &FunctionSpec,
    dim: usize,
    offset: f64,
) -> chernoff_core::Result<CylFunction> {
    match spec {
        FunctionSpec::Constant { value } => CylFunction::constant(dim, value + offset),
        FunctionSpec::OnePlusHalfSin { axis } => {
            let axis = *axis;
            CylFunction::new(dim, 1.5 + offset.abs(), move |x| {
                1.0 + 0.5 * x[axis].sin() + offset
            })
        }
        FunctionSpec::Table { axis, x, y } => {
            let (axis, xs, ys) = (*axis, x.clone(), y.clone());
            let bound = ys.iter().fold(0.0f64, |m, v| m.max(v.abs())) + offset.abs();
            CylFunction::new(dim, bound, move |p| {
                piecewise_linear(&xs, &ys, p[axis]) + offset
            })
        }
    }
}

fn piecewise_linear(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let last = xs.len() - 1;
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[last] {
        return ys[last];
    }
    let j = xs.partition_point(|v| *v <= x) - 1;
    let w = (x - xs[j]) / (xs[j + 1] - xs[j]);
    ys[j] + w * (ys[j + 1] - ys[j])
}

fn build_initial(spec: &InitialSpec) -> Initial {
    match *spec {
        InitialSpec::Cosine { k } => Arc::new(move |x| x.iter().map(|v| (k * v).cos()).product()),
        InitialSpec::GaussianBump { width } => {
            Arc::new(move |x| (-x.iter().map(|v| v * v).sum::<f64>() / (2.0 * width * width)).exp())
        }
        InitialSpec::Constant { value } => Arc::new(move |_| value),
    }
}
