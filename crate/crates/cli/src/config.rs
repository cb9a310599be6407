//! JSON experiment configuration. Unknown keys are rejected at every level.

use std::path::Path;

use chernoff_core::{BoundaryMode, DriftTilt, Interpolation, QuadratureSpec};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    pub dim: usize,
    pub coefficients: CoefficientsConfig,
    /// Leading eigenvalues of `A`, non-increasing. Only the first `dim` enter the grid.
    pub eigenvalues: Vec<f64>,
    pub initial: InitialSpec,
    pub t_final: f64,
    pub steps: Vec<usize>,
    pub grid: GridConfig,
    #[serde(default)]
    pub interpolation: InterpolationConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub tilt: TiltConfig,
    #[serde(default)]
    pub oracle: Option<OracleSpec>,
    #[serde(default)]
    pub output: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientsConfig {
    pub g: FunctionSpec,
    #[serde(default)]
    pub drift: Vec<FunctionSpec>,
    pub c: FunctionSpec,
    pub g_floor: f64,
    #[serde(default = "default_true")]
    pub contractive: bool,
}

fn default_true() -> bool {
    true
}

/// Registry of coefficient functions. Each depends on one coordinate `axis` at most.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionSpec {
    Constant {
        value: f64,
    },
    /// `1 + sin(x_axis)/2`.
    OnePlusHalfSin {
        #[serde(default)]
        axis: usize,
    },
    /// Piecewise-linear in `x_axis` through the knots, held constant beyond the ends.
    Table {
        #[serde(default)]
        axis: usize,
        x: Vec<f64>,
        y: Vec<f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    /// `Π_i cos(k·x_i)`.
    Cosine {
        k: f64,
    },
    /// `exp(−|x|²/(2w²))`.
    GaussianBump {
        width: f64,
    },
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub bounds: Vec<[f64; 2]>,
    pub points_per_axis: usize,
    #[serde(default)]
    pub boundary: BoundaryConfig,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundaryConfig {
    #[default]
    ClampNearest,
    Constant(f64),
    Periodic,
}

impl From<BoundaryConfig> for BoundaryMode {
    fn from(b: BoundaryConfig) -> Self {
        match b {
            BoundaryConfig::ClampNearest => BoundaryMode::ClampNearest,
            BoundaryConfig::Constant(v) => BoundaryMode::Constant(v),
            BoundaryConfig::Periodic => BoundaryMode::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InterpolationConfig {
    Linear,
    #[default]
    Cubic,
}

impl From<InterpolationConfig> for Interpolation {
    fn from(i: InterpolationConfig) -> Self {
        match i {
            InterpolationConfig::Linear => Interpolation::Linear,
            InterpolationConfig::Cubic => Interpolation::Cubic,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TiltConfig {
    #[default]
    Half,
    Full,
}

impl From<TiltConfig> for DriftTilt {
    fn from(t: TiltConfig) -> Self {
        match t {
            TiltConfig::Half => DriftTilt::Half,
            TiltConfig::Full => DriftTilt::Full,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "backend", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuadratureConfig {
    GaussHermite { nodes_per_dim: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig::GaussHermite {
            nodes_per_dim: chernoff_core::gauss::DEFAULT_GH_NODES,
        }
    }
}

impl QuadratureConfig {
    pub fn to_spec(self, seed_override: Option<u64>) -> QuadratureSpec {
        match self {
            QuadratureConfig::GaussHermite { nodes_per_dim } => {
                QuadratureSpec::gauss_hermite(nodes_per_dim)
            }
            QuadratureConfig::MonteCarlo { samples, seed } => {
                QuadratureSpec::monte_carlo(samples, seed_override.unwrap_or(seed))
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleSpec {
    /// Closed form; needs constant `g` and `C`, no drift and a cosine initial condition.
    ExactConstant,
    /// Crank–Nicolson (ADI in 2D) reference solve, interpolated onto the engine grid.
    CrankNicolson {
        points_per_axis: usize,
        time_steps: usize,
        /// Oracle domain; defaults to the engine grid bounds.
        #[serde(default)]
        bounds: Option<Vec<[f64; 2]>>,
        #[serde(default)]
        boundary: OracleBoundary,
    },
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum OracleBoundary {
    #[default]
    Periodic,
    Dirichlet(f64),
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
            config: true,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = error_field(&e);
            CliError::config(field, e.into_inner())
        })?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.dim == 0 || self.dim > chernoff_core::engine::MAX_GRID_DIM {
            return Err(CliError::config("dim", "must be between 1 and 4"));
        }
        if self.eigenvalues.len() < self.dim {
            return Err(CliError::config(
                "eigenvalues",
                "need at least `dim` eigenvalues",
            ));
        }
        if self.grid.bounds.len() != self.dim {
            return Err(CliError::config(
                "grid.bounds",
                "need one [lo, hi] pair per dimension",
            ));
        }
        if self.steps.is_empty() {
            return Err(CliError::config("steps", "must not be empty"));
        }
        if self.steps.contains(&0) {
            return Err(CliError::config("steps", "entries must be positive"));
        }
        if self.steps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::config("steps", "must be strictly increasing"));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            return Err(CliError::config("t_final", "must be finite and positive"));
        }
        if !self.coefficients.drift.is_empty() && self.coefficients.drift.len() != self.dim {
            return Err(CliError::config(
                "coefficients.drift",
                "need one component per dimension",
            ));
        }
        let specs = std::iter::once(("coefficients.g", &self.coefficients.g))
            .chain(std::iter::once(("coefficients.c", &self.coefficients.c)))
            .chain(
                self.coefficients
                    .drift
                    .iter()
                    .map(|s| ("coefficients.drift", s)),
            );
        for (name, spec) in specs {
            spec.validate(name, self.dim)?;
        }
        match self.initial {
            InitialSpec::GaussianBump { width } if !(width.is_finite() && width > 0.0) => {
                return Err(CliError::config(
                    "initial.width",
                    "must be finite and positive",
                ));
            }
            InitialSpec::Cosine { k } if !k.is_finite() => {
                return Err(CliError::config("initial.k", "must be finite"));
            }
            InitialSpec::Constant { value } if !value.is_finite() => {
                return Err(CliError::config("initial.value", "must be finite"));
            }
            _ => {}
        }
        if let Some(OracleSpec::CrankNicolson {
            bounds: Some(b), ..
        }) = &self.oracle
        {
            if b.len() != self.dim {
                return Err(CliError::config(
                    "oracle.bounds",
                    "need one [lo, hi] pair per dimension",
                ));
            }
        }
        Ok(())
    }

    /// The step count used by `solve`.
    pub fn solve_steps(&self) -> usize {
        *self.steps.last().expect("validated non-empty")
    }
}

impl FunctionSpec {
    fn validate(&self, name: &str, dim: usize) -> Result<(), CliError> {
        match self {
            FunctionSpec::Constant { value } if !value.is_finite() => {
                Err(CliError::config(name, "constant must be finite"))
            }
            FunctionSpec::OnePlusHalfSin { axis } | FunctionSpec::Table { axis, .. }
                if *axis >= dim =>
            {
                Err(CliError::config(
                    format!("{name}.axis"),
                    "axis out of range",
                ))
            }
            FunctionSpec::Table { x, y, .. } => {
                if x.len() < 2 || x.len() != y.len() {
                    return Err(CliError::config(
                        format!("{name}.x"),
                        "need at least two knots and matching y",
                    ));
                }
                if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(y).any(|v| !v.is_finite())
                {
                    return Err(CliError::config(
                        format!("{name}.x"),
                        "knots must be finite and increasing",
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Dotted path of the offending key; unknown and missing keys are appended to their parent.
fn error_field(e: &serde_path_to_error::Error<serde_json::Error>) -> String {
    let path = e.path().to_string();
    let msg = e.inner().to_string();
    for marker in ["unknown field `", "missing field `"] {
        if let Some(start) = msg.find(marker) {
            let rest = &msg[start + marker.len()..];
            if let Some(end) = rest.find('`') {
                let key = &rest[..end];
                if path == "." {
                    return key.to_string();
                }
                if path.ends_with(&format!(".{key}")) || path == key {
                    return path;
                }
                return format!("{path}.{key}");
            }
        }
    }
    path
}
