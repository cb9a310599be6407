use std::time::Instant;

use chernoff_core::engine::Convergence;
use chernoff_core::QuadratureSpec;

use crate::battery;
use crate::error::CliError;
use crate::problem::Problem;
use crate::report::{num, Report};

fn backend(quad: &QuadratureSpec) -> String {
    match quad {
        QuadratureSpec::GaussHermite { nodes_per_dim } => {
            format!("gauss_hermite(nodes_per_dim={nodes_per_dim})")
        }
        QuadratureSpec::MonteCarlo { samples, .. } => format!("monte_carlo(samples={samples})"),
    }
}

fn common_meta(report: &mut Report, problem: &Problem, command: &str) {
    report
        .meta("command", command)
        .meta("problem", &problem.config.problem)
        .meta("dim", problem.config.dim)
        .meta("t_final", num(problem.config.t_final))
        .meta("backend", backend(&problem.options.quad))
        .meta(
            "seed",
            problem.seed.map_or("none".to_string(), |s| s.to_string()),
        );
}

/// Final field of `(S_{t/n})ⁿ u₀` for the largest configured `n`.
pub fn solve(problem: &Problem) -> Result<Report, CliError> {
    let n = problem.config.solve_steps();
    let sol = problem.solve(n)?;
    let dim = problem.config.dim;
    let mut report = Report::new((0..dim).map(|i| format!("x{i}")).chain(["u".to_string()]));
    common_meta(&mut report, problem, "solve");
    report
        .meta("n", n)
        .meta(
            "convergence",
            match sol.convergence {
                Convergence::Proven => "proven",
                Convergence::ConditionalOnSemigroup => "conditional_on_semigroup",
            },
        )
        .meta("interior_points", sol.interior.len())
        .meta(
            "step_sup_norms",
            sol.step_sup_norms
                .iter()
                .map(|v| num(*v))
                .collect::<Vec<_>>()
                .join(";"),
        );
    let mut x = vec![0.0; dim];
    for (k, u) in sol.field.values().iter().enumerate() {
        sol.field.point_into(k, &mut x);
        report.row(x.iter().map(|v| num(*v)).chain([num(*u)]).collect());
    }
    Ok(report)
}

/// Interior sup-error against the oracle for every configured step count.
pub fn converge(problem: &Problem) -> Result<Report, CliError> {
    let oracle = problem.oracle()?;
    let mut report = Report::new(["n", "sup_error", "runtime_ms"]);
    common_meta(&mut report, problem, "converge");
    let t = problem.config.t_final;
    for &n in &problem.config.steps {
        let start = Instant::now();
        let sol = problem.solve(n)?;
        let ms = start.elapsed().as_millis();
        report.row(vec![
            n.to_string(),
            num(oracle.sup_error(t, &sol.field, &sol.interior)),
            ms.to_string(),
        ]);
    }
    Ok(report)
}

/// Runs the battery; the flag is true iff every check passed.
pub fn verify(problem: &Problem) -> Result<(Report, bool), CliError> {
    let checks = battery::run(problem)?;
    let mut report = Report::new(["name", "measured", "threshold", "pass"]);
    common_meta(&mut report, problem, "verify");
    let passed = checks.iter().all(|c| c.pass);
    report.meta("checks", checks.len()).meta("all_pass", passed);
    for c in checks {
        report.row(vec![
            c.name,
            num(c.measured),
            num(c.threshold),
            c.pass.to_string(),
        ]);
    }
    Ok((report, passed))
}
