//! Smooth bounded test functions with analytic derivatives, used by the diagnostics.

use chernoff_core::{CylFunction, SquareMatrix};

/// One-dimensional profile with its first two derivatives.
#[derive(Debug, Clone, Copy)]
pub enum Shape {
    /// `cos(k(x − c))`.
    Cos { k: f64, c: f64 },
    /// `sin(kx)`.
    Sin { k: f64 },
    /// `exp(−(x − c)²/(2s²))`.
    Gauss { c: f64, s: f64 },
    /// `1/(1 + (x − c)²)`.
    Lorentz { c: f64 },
}

impl Shape {
    fn label(self, x: &str) -> String {
        let shifted = |c: f64| {
            if c == 0.0 {
                x.to_string()
            } else {
                format!("({x}-{c})")
            }
        };
        match self {
            Shape::Cos { k, c } => format!("cos({k}*{})", shifted(c)),
            Shape::Sin { k } => format!("sin({k}*{x})"),
            Shape::Gauss { c, s } => {
                format!("exp(-{}^2/{})", shifted(c), (2e9 * s * s).round() / 1e9)
            }
            Shape::Lorentz { c } => format!("1/(1+{}^2)", shifted(c)),
        }
    }

    fn jet(self, x: f64) -> [f64; 3] {
        match self {
            Shape::Cos { k, c } => {
                let (s, co) = (k * (x - c)).sin_cos();
                [co, -k * s, -k * k * co]
            }
            Shape::Sin { k } => {
                let (s, co) = (k * x).sin_cos();
                [s, k * co, -k * k * s]
            }
            Shape::Gauss { c, s } => {
                let d = x - c;
                let f = (-d * d / (2.0 * s * s)).exp();
                let s2 = s * s;
                [f, -d / s2 * f, (d * d / (s2 * s2) - 1.0 / s2) * f]
            }
            Shape::Lorentz { c } => {
                let d = x - c;
                let r = 1.0 / (1.0 + d * d);
                [r, -2.0 * d * r * r, (6.0 * d * d - 2.0) * r * r * r]
            }
        }
    }
}

/// A product of profiles over the leading axes, or a profile of `x₀ + x₁`.
#[derive(Debug, Clone)]
pub enum TestFunction {
    Product(Vec<Shape>),
    Ridge(Shape),
}

impl TestFunction {
    /// Formula-like label without commas, safe inside a CSV cell.
    pub fn name(&self) -> String {
        match self {
            TestFunction::Product(shapes) => shapes
                .iter()
                .enumerate()
                .map(|(i, s)| s.label(&format!("x{i}")))
                .collect::<Vec<_>>()
                .join("*"),
            TestFunction::Ridge(s) => s.label("(x0+x1)"),
        }
    }

    pub fn to_cyl(&self, dim: usize) -> chernoff_core::Result<CylFunction> {
        match self.clone() {
            TestFunction::Product(shapes) => {
                let shapes: Vec<Shape> = shapes.into_iter().take(dim).collect();
                let (s1, s2) = (shapes.clone(), shapes.clone());
                let jets = move |x: &[f64], s: &[Shape]| -> Vec<[f64; 3]> {
                    s.iter().zip(x).map(|(sh, xi)| sh.jet(*xi)).collect()
                };
                let other = |j: &[[f64; 3]], skip: &[usize]| -> f64 {
                    j.iter()
                        .enumerate()
                        .filter(|(a, _)| !skip.contains(a))
                        .map(|(_, v)| v[0])
                        .product()
                };
                Ok(CylFunction::new(dim, 1.0, move |x| {
                    shapes.iter().zip(x).map(|(s, xi)| s.jet(*xi)[0]).product()
                })?
                .with_gradient(move |x| {
                    let j = jets(x, &s1);
                    let mut g = vec![0.0; dim];
                    for a in 0..j.len() {
                        g[a] = j[a][1] * other(&j, &[a]);
                    }
                    g
                })
                .with_hessian(move |x| {
                    let j = jets(x, &s2);
                    let n = j.len();
                    SquareMatrix::from_fn(dim, |a, b| {
                        if a >= n || b >= n {
                            0.0
                        } else if a == b {
                            j[a][2] * other(&j, &[a])
                        } else {
                            j[a][1] * j[b][1] * other(&j, &[a, b])
                        }
                    })
                }))
            }
            TestFunction::Ridge(shape) => {
                let arg = |x: &[f64]| x[0] + x.get(1).copied().unwrap_or(0.0);
                let n = dim.min(2);
                Ok(CylFunction::new(dim, 1.0, move |x| shape.jet(arg(x))[0])?
                    .with_gradient(move |x| {
                        let d = shape.jet(arg(x))[1];
                        (0..dim).map(|a| if a < n { d } else { 0.0 }).collect()
                    })
                    .with_hessian(move |x| {
                        let d2 = shape.jet(arg(x))[2];
                        SquareMatrix::from_fn(dim, |a, b| if a < n && b < n { d2 } else { 0.0 })
                    }))
            }
        }
    }
}

/// Ten smooth bounded functions; the first five form the tangency suite.
pub fn smooth_suite(dim: usize) -> Vec<TestFunction> {
    use Shape::*;
    use TestFunction::*;
    let mut out = vec![
        Product(vec![Cos { k: 1.0, c: 0.0 }]),
        Product(vec![Gauss {
            c: 0.0,
            s: core::f64::consts::FRAC_1_SQRT_2,
        }]),
        Product(vec![Sin { k: 1.0 }]),
        Product(vec![Lorentz { c: 0.5 }]),
        Product(vec![Cos { k: 2.0, c: 0.3 }]),
        Product(vec![Gauss { c: 1.0, s: 1.0 }]),
        Product(vec![Cos { k: 0.5, c: -1.0 }]),
    ];
    if dim >= 2 {
        out.extend([
            Product(vec![Cos { k: 1.0, c: 0.0 }, Cos { k: 1.0, c: 0.0 }]),
            Ridge(Cos { k: 1.0, c: 0.0 }),
            Product(vec![Gauss { c: 0.0, s: 1.0 }, Cos { k: 2.0, c: 0.0 }]),
        ]);
    } else {
        out.extend([
            Product(vec![Sin { k: 2.0 }]),
            Product(vec![Gauss { c: -1.0, s: 0.5 }]),
            Product(vec![Lorentz { c: -1.5 }]),
        ]);
    }
    out
}
