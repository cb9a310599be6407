use chernoff_core::engine::{apply_s, chernoff_solve, step_margin};
use chernoff_core::gauss::GaussHermiteRule;
use chernoff_core::oracle::exact_constant_solution;
use chernoff_core::{
    BoundaryMode, ChernoffPlan, Coefficients, CylFunction, DriftTilt, GridField, OperatorL,
    StepOptions, TraceClassOperator,
};
use proptest::prelude::*;

fn variable_op() -> OperatorL {
    let coeffs = Coefficients::new(
        CylFunction::new(1, 1.5, |x| 1.0 + 0.5 * x[0].sin()).unwrap(),
        CylFunction::new(1, 1.0, |x| -0.5 * (1.0 + x[0].cos())).unwrap(),
        0.5,
    )
    .unwrap();
    OperatorL::new(coeffs, &TraceClassOperator::new(vec![1.0]).unwrap()).unwrap()
}

#[test]
fn two_steps_equal_nested_integral() {
    let op = variable_op();
    let (t, n) = (0.5, 2);
    let tau = t / n as f64;
    let u0 = GridField::from_fn(vec![(-10.0, 10.0)], 1025, BoundaryMode::ClampNearest, |x| {
        x[0].cos()
    })
    .unwrap();
    let plan = ChernoffPlan::new(op, t, n, StepOptions::default()).unwrap();
    let sol = chernoff_solve(&plan, &u0).unwrap();

    let rule = GaussHermiteRule::new(32).unwrap();
    let g = |x: f64| 1.0 + 0.5 * x.sin();
    let c = |x: f64| -0.5 * (1.0 + x.cos());
    let sigma = |x: f64| (2.0 * tau * g(x)).sqrt();
    let step = |x: f64, u: &dyn Fn(f64) -> f64| {
        (tau * c(x)).exp() * rule.integrate(|z| u(x + sigma(x) * z))
    };
    let nested = |x: f64| step(x, &|y| step(y, &|w| w.cos()));

    assert!(!sol.interior.is_empty());
    for &k in &sol.interior {
        let x = u0.point(k)[0];
        assert!((sol.field.values()[k] - nested(x)).abs() < 1e-7, "x = {x}");
    }
}

#[test]
fn two_dimensional_product_solution() {
    let a = TraceClassOperator::new(vec![0.5, 0.25]).unwrap();
    let op = OperatorL::new(Coefficients::constant(2, 1.0, -0.5).unwrap(), &a).unwrap();
    let bounds = vec![(-9.0, 9.0), (-9.0, 9.0)];
    let u0 = GridField::from_fn(bounds, 181, BoundaryMode::ClampNearest, |x| {
        x[0].cos() * (2.0 * x[1]).cos()
    })
    .unwrap();
    let options = StepOptions {
        quad: chernoff_core::QuadratureSpec::gauss_hermite(24),
        ..Default::default()
    };
    let plan = ChernoffPlan::new(op, 0.5, 4, options).unwrap();
    let sol = chernoff_solve(&plan, &u0).unwrap();
    for &k in &sol.interior {
        let x = u0.point(k);
        let want = (-0.5f64 * 0.5).exp()
            * exact_constant_solution(1.0, 0.5, 0.0, 1.0, 0.5, x[0])
            * exact_constant_solution(1.0, 0.25, 0.0, 2.0, 0.5, x[1]);
        assert!((sol.field.values()[k] - want).abs() < 1e-4, "{x:?}");
    }
}

#[test]
fn mass_preservation() {
    let a = TraceClassOperator::new(vec![0.5]).unwrap();
    let coeffs = Coefficients::new(
        CylFunction::new(1, 1.5, |x| 1.0 + 0.5 * x[0].sin()).unwrap(),
        CylFunction::constant(1, 0.0).unwrap(),
        0.5,
    )
    .unwrap();
    let op = OperatorL::new(coeffs, &a).unwrap();
    let u =
        GridField::from_fn(vec![(-8.0, 8.0)], 257, BoundaryMode::ClampNearest, |_| 1.0).unwrap();
    let s = apply_s(&op, 0.1, &u, &StepOptions::default()).unwrap();
    for k in u.interior_indices(step_margin(&op, 0.1, DriftTilt::Half)) {
        assert!((s.values()[k] - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn apply_s_is_linear(alpha in -3.0f64..3.0, beta in -3.0f64..3.0, k in 0.5f64..3.0) {
        let op = variable_op();
        let bounds = vec![(-8.0, 8.0)];
        let u = GridField::from_fn(bounds.clone(), 129, BoundaryMode::ClampNearest, |x| (k * x[0]).cos()).unwrap();
        let v = GridField::from_fn(bounds.clone(), 129, BoundaryMode::ClampNearest, |x| (-x[0] * x[0]).exp()).unwrap();
        let mix = u.with_values(u.values().iter().zip(v.values()).map(|(a, b)| alpha * a + beta * b).collect()).unwrap();
        let options = StepOptions::default();
        let (su, sv, sm) = (
            apply_s(&op, 0.05, &u, &options).unwrap(),
            apply_s(&op, 0.05, &v, &options).unwrap(),
            apply_s(&op, 0.05, &mix, &options).unwrap(),
        );
        for i in 0..u.len() {
            let want = alpha * su.values()[i] + beta * sv.values()[i];
            prop_assert!((sm.values()[i] - want).abs() < 1e-10);
        }
    }
}
