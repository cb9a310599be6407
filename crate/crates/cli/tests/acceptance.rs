//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use chernoff_cli::battery::{self, max_ratio, random_fields};
use chernoff_cli::{ExperimentConfig, Problem};
use chernoff_core::engine::norm_bound_check;
use chernoff_core::gauss::{
    expect_exp, expect_linear_exp, expect_quadratic, expect_quadratic_exp, integrate,
    integrate_estimate, scale_identity_residual,
};
use chernoff_core::{
    BoundaryMode, Coefficients, CylFunction, DriftTilt, GaussianSpec, GridField, OperatorL,
    QuadratureSpec, SquareMatrix, StepOptions, TraceClassOperator,
};

type Outcome = Result<String, String>;

fn config_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn problem(name: &str) -> Problem {
    let cfg = ExperimentConfig::load(&config_dir().join(name)).expect("shipped config loads");
    Problem::from_config(cfg, None).expect("shipped config builds")
}

fn shipped_configs() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(config_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(
        start.elapsed() < limit,
        format!("runtime {:?} exceeds {limit:?}", start.elapsed()),
    )
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let gh = QuadratureSpec::gauss_hermite(32);
    let mc = QuadratureSpec::monte_carlo(1_000_000, 1);
    let (mut gh_err, mut mc_z) = (0.0f64, 0.0f64);
    for n in 1..=3 {
        let spec = GaussianSpec::centered(
            TraceClassOperator::new([0.5, 0.25, 0.125][..n].to_vec()).unwrap(),
            1.0,
        )
        .unwrap();
        let z = [1.0, -1.0, 0.5][..n].to_vec();
        let w = [1.0, 1.0, -2.0][..n].to_vec();
        let g = SquareMatrix::from_fn(n, |i, j| {
            if i == j {
                2.0
            } else {
                0.5 * i as f64 - 0.3 * j as f64
            }
        });
        let qf = |y: &[f64]| dot(&g.mul_vec(y).unwrap(), y);
        let cases: [(Box<dyn Fn(&[f64]) -> f64 + Sync>, f64); 4] = [
            (Box::new(qf), expect_quadratic(&g, &spec).unwrap()),
            (
                Box::new(|y: &[f64]| dot(&z, y).exp()),
                expect_exp(&z, &spec).unwrap(),
            ),
            (
                Box::new(|y: &[f64]| dot(&w, y) * dot(&z, y).exp()),
                expect_linear_exp(&w, &z, &spec).unwrap(),
            ),
            (
                Box::new(|y: &[f64]| qf(y) * dot(&z, y).exp()),
                expect_quadratic_exp(&g, &z, &spec).unwrap(),
            ),
        ];
        for (f, want) in &cases {
            gh_err = gh_err.max((integrate(f, &spec, &gh).unwrap() - want).abs());
            let est = integrate_estimate(f, &spec, &mc).unwrap();
            mc_z = mc_z.max((est.value - want).abs() / est.std_error.unwrap());
        }
    }
    ensure(gh_err < 1e-9, format!("GH error {gh_err:.3e} >= 1e-9"))?;
    ensure(
        mc_z <= 4.0,
        format!("MC error {mc_z:.2} standard errors > 4"),
    )?;
    within(start, Duration::from_secs(10))?;
    Ok(format!(
        "GH max error {gh_err:.2e}, MC max {mc_z:.2} SE, {:.1?}",
        start.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let gh = QuadratureSpec::gauss_hermite(32);
    let family: [Box<dyn Fn(&[f64]) -> f64 + Sync>; 6] = [
        Box::new(|_| 1.0),
        Box::new(|y| y[0]),
        Box::new(|y| y[0] * y[0]),
        Box::new(|y| (-y[0]).exp()),
        Box::new(|y| (0.5 * y[0]).exp()),
        Box::new(|y| y[0].exp()),
    ];
    let mut worst = 0.0f64;
    for a in [vec![1.0], vec![0.5, 0.25], vec![2.0, 1.0, 0.5]] {
        let a = TraceClassOperator::new(a).unwrap();
        for f in &family {
            for t in [0.25, 2.0, 4.0] {
                worst = worst.max(scale_identity_residual(f, t, &a, &gh).unwrap());
            }
        }
    }
    ensure(worst < 1e-10, format!("residual {worst:.3e} >= 1e-10"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("max residual {worst:.2e}, {:.1?}", start.elapsed()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (name, c) in [("constant_1d.json", 0.0), ("constant_damped_1d.json", -1.0)] {
        let p = problem(name);
        ensure(
            p.u0.points_per_axis() == 512 && p.config.steps == [1, 4, 16],
            "config drifted from criterion",
        )?;
        let oracle = p.oracle().map_err(|e| e.to_string())?;
        let mut fields = Vec::new();
        for &n in &p.config.steps {
            let sol = p.solve(n).map_err(|e| e.to_string())?;
            let err = oracle.sup_error(1.0, &sol.field, &sol.interior);
            ensure(err < 1e-5, format!("C = {c}, n = {n}: error {err:.3e}"))?;
            fields.push(sol);
        }
        let (one, sixteen) = (&fields[0], &fields[2]);
        let gap = one
            .interior
            .iter()
            .map(|&k| (one.field.values()[k] - sixteen.field.values()[k]).abs())
            .fold(0.0, f64::max);
        ensure(gap < 5e-7, format!("C = {c}: n=1 vs n=16 gap {gap:.3e}"))?;
        detail.push(format!("C={c}: gap {gap:.1e}"));
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("{}, {:.1?}", detail.join("; "), start.elapsed()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let p = problem("variable_g_1d.json");
    ensure(
        p.config.steps == [4, 8, 16, 32, 64],
        "config drifted from criterion",
    )?;
    let oracle = p.oracle().map_err(|e| e.to_string())?;
    let mut errors = Vec::new();
    for &n in &p.config.steps {
        let sol = p.solve(n).map_err(|e| e.to_string())?;
        errors.push(oracle.sup_error(p.config.t_final, &sol.field, &sol.interior));
    }
    let shown = errors
        .iter()
        .map(|e| format!("{e:.2e}"))
        .collect::<Vec<_>>()
        .join(" ");
    ensure(
        max_ratio(&errors) < 1.0,
        format!("errors not strictly decreasing: {shown}"),
    )?;
    ensure(
        errors[4] < errors[0] / 3.0,
        format!("err(64) not below err(4)/3: {shown}"),
    )?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("errors n=4..64: {shown}, {:.1?}", start.elapsed()))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for name in ["constant_1d.json", "variable_g_1d.json", "drift_1d.json"] {
        let p = problem(name);
        for check in battery::tangency(&p).map_err(|e| e.to_string())? {
            ensure(
                check.pass,
                format!("{name}: {} ratio {:.3}", check.name, check.measured),
            )?;
            rows += 1;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{rows} function/config pairs strictly decreasing (incl. B = 1), {:.1?}",
        start.elapsed()
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    // g0 = 1, B0 = 1, |C| = 1
    let coeffs = Coefficients::new(
        CylFunction::new(1, 1.5, |x| 1.25 + 0.25 * x[0].sin()).unwrap(),
        CylFunction::new(1, 1.0, |x| x[0].sin()).unwrap(),
        1.0,
    )
    .unwrap()
    .contractive(false)
    .with_drift(vec![CylFunction::new(1, 1.0, |x| x[0].cos()).unwrap()])
    .unwrap();
    let op = OperatorL::new(coeffs, &TraceClassOperator::new(vec![0.5]).unwrap()).unwrap();
    let template =
        GridField::from_fn(vec![(-8.0, 8.0)], 512, BoundaryMode::ClampNearest, |_| 0.0).unwrap();
    let mut worst = f64::NEG_INFINITY;
    for tilt in [DriftTilt::Half, DriftTilt::Full] {
        let options = StepOptions {
            tilt,
            ..StepOptions::default()
        };
        for u in random_fields(&template, 20, 11).map_err(|e| e.to_string())? {
            for tau in [0.01, 0.1] {
                let nb = norm_bound_check(&op, tau, &u, &options).map_err(|e| e.to_string())?;
                ensure(
                    nb.holds(1e-8),
                    format!("ratio {} > bound {}", nb.ratio, nb.bound),
                )?;
                worst = worst.max(nb.ratio - nb.bound);
            }
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "max ratio - bound {worst:.3e} over 20 fields x 2 tilts x 2 steps, {:.1?}",
        start.elapsed()
    ))
}

fn criterion_7() -> Outcome {
    let mut used = Vec::new();
    for name in shipped_configs() {
        let p = problem(&name);
        let coeffs = p.op.coefficients();
        if !(coeffs.drift_is_zero() && coeffs.is_contractive()) {
            continue;
        }
        let check = battery::contractivity(&p).map_err(|e| e.to_string())?;
        ensure(
            check.pass,
            format!("{name}: sup-norm exceeds |u0| by {:.3e}", check.measured),
        )?;
        used.push(name.trim_end_matches(".json").to_string());
    }
    ensure(used.len() >= 4, "too few contractive configs")?;
    Ok(format!(
        "per-step interior sup-norms bounded by |u0| for {}",
        used.join(", ")
    ))
}

fn criterion_8() -> Outcome {
    let mut worst_witness = f64::NEG_INFINITY;
    let mut worst_resolvent = f64::NEG_INFINITY;
    for name in [
        "constant_1d.json",
        "variable_g_1d.json",
        "potential_table_1d.json",
        "constant_2d.json",
    ] {
        let p = problem(name);
        let w = battery::dissipativity(&p).map_err(|e| e.to_string())?;
        ensure(
            w.pass,
            format!("{name}: witness short by {:.3e}", w.measured),
        )?;
        worst_witness = worst_witness.max(w.measured);
        if p.config.dim == 1 {
            for check in battery::resolvent(&p).map_err(|e| e.to_string())? {
                ensure(
                    check.pass,
                    format!("{name}: {} = {:.3e}", check.name, check.measured),
                )?;
                if check.name == "resolvent_max_principle" {
                    worst_resolvent = worst_resolvent.max(check.measured);
                }
            }
        }
    }
    Ok(format!(
        "max(rhs - lhs) {worst_witness:.2e} (tol 1e-6); max(|f| - |rhs|/lambda) {worst_resolvent:.2e} (tol 1e-8)"
    ))
}

fn criterion_9() -> Outcome {
    let mut detail = Vec::new();
    for name in ["variable_g_1d.json", "potential_table_1d.json"] {
        let p = problem(name);
        for check in battery::continuity(&p).map_err(|e| e.to_string())? {
            ensure(
                check.pass,
                format!("{name}: {} = {:.3e}", check.name, check.measured),
            )?;
            if check.name.ends_with("smallest") {
                let label = check
                    .name
                    .trim_start_matches("continuity_")
                    .trim_end_matches("_smallest");
                detail.push(format!(
                    "{}/{label} {:.1e}",
                    name.trim_end_matches(".json"),
                    check.measured
                ));
            }
        }
    }
    Ok(format!(
        "gaps strictly decreasing; delta=1e-3 gaps: {}",
        detail.join(", ")
    ))
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_chernoff");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |config: &str, out: &str| {
        let out = dir.path().join(out);
        let status = Command::new(bin)
            .args(["verify", "--config"])
            .arg(config_dir().join(config))
            .arg("--out")
            .arg(&out)
            .args(["--seed", "7"])
            .stderr(Stdio::null())
            .status()
            .expect("binary runs");
        (status.code(), std::fs::read(&out).unwrap_or_default())
    };
    let (code_a, a) = run("monte_carlo_1d.json", "a.csv");
    let (code_b, b) = run("monte_carlo_1d.json", "b.csv");
    ensure(
        code_a == Some(0) && code_b == Some(0),
        format!("verify exit codes {code_a:?} {code_b:?}"),
    )?;
    ensure(!a.is_empty() && a == b, "repeated verify output differs")?;
    let (code, neg) = run("negative_control.json", "neg.csv");
    ensure(
        code == Some(1),
        format!("negative control exit {code:?}, expected 1"),
    )?;
    let text = String::from_utf8_lossy(&neg);
    ensure(
        text.lines()
            .any(|l| l.starts_with("contractivity,") && l.ends_with(",false")),
        "negative control does not flag contractivity",
    )?;
    Ok(format!(
        "{} identical bytes across two seeded runs; negative control exit 1",
        a.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("gaussian identity suite", criterion_1),
        ("scale identity", criterion_2),
        ("constant-coefficient exactness", criterion_3),
        ("variable-coefficient convergence", criterion_4),
        ("tangency", criterion_5),
        ("norm bound", criterion_6),
        ("contractivity", criterion_7),
        ("dissipativity", criterion_8),
        ("coefficient continuity", criterion_9),
        ("reproducibility and exit codes", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({reason})", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
