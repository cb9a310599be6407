//! The property battery run by `verify`: one [`Check`] per measured invariant.

use chernoff_core::cylinder::dissipativity_witness;
use chernoff_core::engine::{coefficient_continuity_probe, norm_bound_check, tangency_residual};
use chernoff_core::gauss::{
    expect_exp, expect_linear_exp, expect_quadratic, expect_quadratic_exp, integrate,
    integrate_estimate, scale_identity_residual,
};
use chernoff_core::oracle::{resolvent_solve, FdBoundary, FdGeometry};
use chernoff_core::{
    CylFunction, GaussianSpec, GridField, QuadratureSpec, SquareMatrix, StepOptions,
};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, Uniform};

use crate::error::CliError;
use crate::problem::Problem;
use crate::suite::smooth_suite;

type Integrand<'a> = Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>;

pub const TANGENCY_TAUS: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const DISSIPATIVITY_LAMBDAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const CONTINUITY_DELTAS: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const NORM_BOUND_FIELDS: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured <= threshold`.
    pub fn at_most(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            pass: measured <= threshold,
        }
    }

    /// Passes when `measured < threshold`.
    pub fn below(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            threshold,
            pass: measured < threshold,
        }
    }
}

/// Largest ratio of consecutive entries; `< 1` iff the sequence strictly decreases.
pub fn max_ratio(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max)
}

/// Quadrature for the operator diagnostics: the configured Gauss–Hermite rule, or a
/// dimension-scaled default when the config asks for Monte Carlo.
pub fn diagnostic_options(problem: &Problem) -> StepOptions {
    match problem.options.quad {
        QuadratureSpec::GaussHermite { .. } => problem.options,
        QuadratureSpec::MonteCarlo { .. } => {
            let nodes = [32, 32, 16, 8][problem.config.dim - 1];
            StepOptions {
                quad: QuadratureSpec::gauss_hermite(nodes),
                ..problem.options
            }
        }
    }
}

pub fn run(problem: &Problem) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    checks.extend(gaussian_identities(problem)?);
    checks.push(scale_identity(problem)?);
    checks.extend(tangency(problem)?);
    checks.push(norm_bound(problem)?);
    let coeffs = problem.op.coefficients();
    if coeffs.drift_is_zero() {
        checks.push(contractivity(problem)?);
    }
    if coeffs.is_contractive() {
        checks.push(dissipativity(problem)?);
        if problem.config.dim == 1 {
            checks.extend(resolvent(problem)?);
        }
    }
    if matches!(
        problem.config.oracle,
        Some(crate::config::OracleSpec::ExactConstant)
    ) {
        checks.extend(exactness(problem)?);
    }
    if coeffs.drift_is_zero() && coeffs.is_contractive() {
        checks.extend(continuity(problem)?);
    }
    Ok(checks)
}

fn identity_family(n: usize) -> (Vec<f64>, Vec<f64>, SquareMatrix) {
    let z = [1.0, -1.0, 0.5][..n].to_vec();
    let w = [1.0, 1.0, -2.0][..n].to_vec();
    let g = SquareMatrix::from_fn(n, |i, j| {
        1.0 + 0.5 * i as f64 - 0.3 * j as f64 + if i == j { 1.0 } else { 0.0 }
    });
    (z, w, g)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quadrature against the four closed forms, for cylinder dimensions 1..=min(dim, 3).
pub fn gaussian_identities(problem: &Problem) -> Result<Vec<Check>, CliError> {
    let mut gh_err = 0.0f64;
    let mut mc_z = 0.0f64;
    for n in 1..=problem.config.dim.min(3) {
        let spec = GaussianSpec::centered(problem.covariance.truncated(n)?, 1.0)?;
        let (z, w, g) = identity_family(n);
        let qf = |y: &[f64]| dot(&g.mul_vec(y).expect("matching dim"), y);
        let cases: [(Integrand<'_>, f64); 4] = [
            (Box::new(qf), expect_quadratic(&g, &spec)?),
            (
                Box::new(|y: &[f64]| dot(&z, y).exp()),
                expect_exp(&z, &spec)?,
            ),
            (
                Box::new(|y: &[f64]| dot(&w, y) * dot(&z, y).exp()),
                expect_linear_exp(&w, &z, &spec)?,
            ),
            (
                Box::new(|y: &[f64]| qf(y) * dot(&z, y).exp()),
                expect_quadratic_exp(&g, &z, &spec)?,
            ),
        ];
        for (f, want) in &cases {
            let got = integrate(f, &spec, &QuadratureSpec::gauss_hermite(32))?;
            gh_err = gh_err.max((got - want).abs());
            if let QuadratureSpec::MonteCarlo { .. } = problem.options.quad {
                let est = integrate_estimate(f, &spec, &problem.options.quad)?;
                let se = est.std_error.unwrap_or(f64::NAN);
                mc_z = mc_z.max((est.value - want).abs() / se);
            }
        }
    }
    let mut out = vec![Check::at_most("gaussian_identities_gh", gh_err, 1e-9)];
    if let QuadratureSpec::MonteCarlo { .. } = problem.options.quad {
        out.push(Check::at_most("gaussian_identities_mc_z", mc_z, 4.0));
    }
    Ok(out)
}

pub fn scale_identity(problem: &Problem) -> Result<Check, CliError> {
    let a = problem
        .covariance
        .truncated(problem.config.dim.min(chernoff_core::gauss::MAX_GH_DIM))?;
    let family: [Integrand<'_>; 6] = [
        Box::new(|_| 1.0),
        Box::new(|y| y[0]),
        Box::new(|y| y[0] * y[0]),
        Box::new(|y| (-y[0]).exp()),
        Box::new(|y| (0.5 * y[0]).exp()),
        Box::new(|y| y[0].exp()),
    ];
    let quad = match problem.options.quad {
        QuadratureSpec::GaussHermite { .. } => QuadratureSpec::gauss_hermite(32),
        mc => mc,
    };
    let mut worst = 0.0f64;
    for f in &family {
        for t in [0.5, 2.0, 4.0] {
            worst = worst.max(scale_identity_residual(f, t, &a, &quad)?);
        }
    }
    Ok(Check::at_most("scale_identity", worst, 1e-10))
}

pub fn probe_points(dim: usize) -> Vec<Vec<f64>> {
    let ticks: Vec<f64> = if dim == 1 {
        (0..41).map(|i| -2.0 + 0.1 * i as f64).collect()
    } else {
        (0..9).map(|i| -2.0 + 0.5 * i as f64).collect()
    };
    let mut out = Vec::new();
    for &a in &ticks {
        if dim == 1 {
            out.push(vec![a]);
            continue;
        }
        for &b in &ticks {
            let mut x = vec![0.0; dim];
            x[0] = a;
            x[1] = b;
            out.push(x);
        }
    }
    out
}

/// Tangency residuals at the three step sizes must strictly decrease, per test function.
pub fn tangency(problem: &Problem) -> Result<Vec<Check>, CliError> {
    let dim = problem.config.dim;
    let options = diagnostic_options(problem);
    let grid = probe_points(dim);
    let mut out = Vec::new();
    for f in smooth_suite(dim).into_iter().take(5) {
        let phi = f.to_cyl(dim)?;
        let residuals = TANGENCY_TAUS
            .iter()
            .map(|&tau| tangency_residual(&problem.op, &phi, tau, &grid, &options))
            .collect::<chernoff_core::Result<Vec<_>>>()?;
        out.push(Check::below(
            format!("tangency[{}]", f.name()),
            max_ratio(&residuals),
            1.0,
        ));
    }
    Ok(out)
}

/// Random trigonometric fields on the problem grid, reproducible from `seed`.
pub fn random_fields(
    template: &GridField,
    count: usize,
    seed: u64,
) -> Result<Vec<GridField>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = Uniform::new(-1.0, 1.0).expect("valid range");
    let freq = Uniform::new(0.2, 3.0).expect("valid range");
    let phase = Uniform::new(0.0, std::f64::consts::TAU).expect("valid range");
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let terms: Vec<(f64, Vec<(f64, f64)>)> = (0..4)
            .map(|_| {
                let a = amp.sample(&mut rng);
                let modes = (0..template.dim())
                    .map(|_| (freq.sample(&mut rng), phase.sample(&mut rng)))
                    .collect();
                (a, modes)
            })
            .collect();
        let mut x = vec![0.0; template.dim()];
        let values = (0..template.len())
            .map(|k| {
                template.point_into(k, &mut x);
                terms
                    .iter()
                    .map(|(a, modes)| {
                        a * modes
                            .iter()
                            .zip(&x)
                            .map(|((f, p), xi)| (f * xi + p).cos())
                            .product::<f64>()
                    })
                    .sum()
            })
            .collect();
        out.push(template.with_values(values)?);
    }
    Ok(out)
}

pub fn norm_bound(problem: &Problem) -> Result<Check, CliError> {
    let tau = problem.config.t_final / problem.config.solve_steps() as f64;
    let options = diagnostic_options(problem);
    let mut worst = f64::NEG_INFINITY;
    for u in random_fields(&problem.u0, NORM_BOUND_FIELDS, problem.seed.unwrap_or(0))? {
        let nb = norm_bound_check(&problem.op, tau, &u, &options)?;
        worst = worst.max(nb.ratio - nb.bound);
    }
    Ok(Check::at_most("norm_bound", worst, 1e-8))
}

/// Interior sup-norm after every step, for every configured step count, against `‖u₀‖`.
pub fn contractivity(problem: &Problem) -> Result<Check, CliError> {
    let base = problem.u0.sup_norm();
    let mut worst = f64::NEG_INFINITY;
    for &n in &problem.config.steps {
        let sol = problem.solve(n)?;
        for s in &sol.step_sup_norms {
            worst = worst.max(s - base);
        }
    }
    Ok(Check::at_most("contractivity", worst, 1e-8))
}

pub fn dissipativity(problem: &Problem) -> Result<Check, CliError> {
    let dim = problem.config.dim;
    let grid: Vec<Vec<f64>> = (0..problem.u0.len()).map(|k| problem.u0.point(k)).collect();
    let mut worst = f64::NEG_INFINITY;
    for f in smooth_suite(dim) {
        let phi = f.to_cyl(dim)?;
        for lambda in DISSIPATIVITY_LAMBDAS {
            let w = dissipativity_witness(&problem.op, &phi, lambda, &grid)?;
            worst = worst.max(w.rhs - w.lhs);
        }
    }
    Ok(Check::at_most("dissipativity", worst, 1e-6))
}

/// One-dimensional resolvent solves with Dirichlet closure on the problem grid.
pub fn resolvent(problem: &Problem) -> Result<Vec<Check>, CliError> {
    let b = problem.config.grid.bounds[0];
    let geometry = FdGeometry::new(
        vec![(b[0], b[1])],
        problem.config.grid.points_per_axis,
        FdBoundary::Dirichlet(0.0),
    )?;
    let mut excess = f64::NEG_INFINITY;
    let mut residual = 0.0f64;
    for f in smooth_suite(1) {
        let rhs: CylFunction = f.to_cyl(1)?;
        for lambda in DISSIPATIVITY_LAMBDAS {
            let sol = resolvent_solve(&problem.op, lambda, &rhs, &geometry)?;
            let n = sol.field.len();
            let mut sup_rhs = 0.0f64;
            for k in 1..n - 1 {
                sup_rhs = sup_rhs.max(rhs.eval(&sol.field.point(k))?.abs());
            }
            excess = excess.max(sol.field.sup_norm() - sup_rhs / lambda);
            residual = residual.max(sol.residual);
        }
    }
    Ok(vec![
        Check::at_most("resolvent_max_principle", excess, 1e-8),
        Check::at_most("resolvent_residual", residual, 1e-10),
    ])
}

pub fn exactness(problem: &Problem) -> Result<Vec<Check>, CliError> {
    let oracle = problem.oracle()?;
    let t = problem.config.t_final;
    let mut out = Vec::new();
    let mut first: Option<GridField> = None;
    let mut spread = 0.0f64;
    for &n in &problem.config.steps {
        let sol = problem.solve(n)?;
        out.push(Check::at_most(
            format!("exactness[n={n}]"),
            oracle.sup_error(t, &sol.field, &sol.interior),
            1e-5,
        ));
        match &first {
            None => first = Some(sol.field),
            Some(u) => {
                for &k in &sol.interior {
                    spread = spread.max((sol.field.values()[k] - u.values()[k]).abs());
                }
            }
        }
    }
    if problem.config.steps.len() > 1 {
        out.push(Check::at_most("step_independence", spread, 5e-7));
    }
    Ok(out)
}

/// Gaps for `g + δ` and `C − δ`: strictly decreasing in δ, and below 1e-2 at the smallest δ.
pub fn continuity(problem: &Problem) -> Result<Vec<Check>, CliError> {
    let plan = problem.plan(problem.config.solve_steps())?;
    let mut out = Vec::new();
    for (label, dg, dc) in [("g", 1.0, 0.0), ("c", 0.0, -1.0)] {
        let gaps = CONTINUITY_DELTAS
            .iter()
            .map(|&d| {
                let op_j = problem.perturbed(dg * d, dc * d)?;
                Ok(coefficient_continuity_probe(
                    &problem.op,
                    &op_j,
                    &plan,
                    &problem.u0,
                )?)
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        out.push(Check::below(
            format!("continuity_{label}_decreasing"),
            max_ratio(&gaps),
            1.0,
        ));
        out.push(Check::below(
            format!("continuity_{label}_smallest"),
            gaps[2],
            1e-2,
        ));
    }
    Ok(out)
}
