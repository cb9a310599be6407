use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("closed-form moment requires a centered measure")]
    NonCenteredMeasure,

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("Gauss–Hermite tensor quadrature supports dimension <= {max}, got {dim}")]
    QuadratureDimension { dim: usize, max: usize },

    #[error("|f(x)| = {value} exceeds declared sup bound {bound}")]
    SupBoundExceeded { value: f64, bound: f64 },

    #[error("g(x) = {value} is below the ellipticity floor {floor}")]
    BelowFloor { value: f64, floor: f64 },

    #[error("C(x) = {value} > 0 in the contractive regime")]
    PositivePotential { value: f64 },

    #[error("domain too narrow: half-width {half_width} on axis {axis} leaves no interior beyond margin {margin}")]
    TruncationMargin {
        axis: usize,
        half_width: f64,
        margin: f64,
    },

    #[error("empty probe grid")]
    EmptyGrid,

    #[error("input field has zero sup-norm")]
    ZeroField,

    #[error("regime violation: {0}")]
    Regime(&'static str),

    #[error("explicit scheme unstable: dt = {dt} exceeds {limit}")]
    Unstable { dt: f64, limit: f64 },

    #[error("singular linear system at row {row}")]
    SingularSystem { row: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
