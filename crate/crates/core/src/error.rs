use thiserror::Error;

/// Errors raised by depth computations.
///
/// Every variant maps to a stable upper-case code (see [`DepthError::code`]) used by
/// the command-line front end for machine-parsable error lines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DepthError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("scatter matrix is singular (cloud is not of full dimension)")]
    SingularScatter,

    #[error("regions are not nested between alpha={lower} and alpha={upper}")]
    NestingViolation { lower: f64, upper: f64 },

    #[error("alpha must lie in (0, 1], got {0}")]
    InvalidAlpha(f64),

    #[error("projection has zero median absolute deviation")]
    ZeroMad,

    #[error("enumeration of {count} subsets exceeds the cap of {cap}")]
    TooLarge { count: u128, cap: u128 },

    #[error("unknown depth '{0}'")]
    UnknownDepth(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("alpha grids or depth names of the two lifts differ")]
    GridMismatch,

    #[error("region is empty")]
    EmptyRegion,

    #[error("set of argument indices is empty")]
    EmptyT,

    #[error("functional '{0}' is not linear")]
    NonlinearFunctional(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("linear program failed: {0}")]
    Solver(String),
}

impl DepthError {
    pub fn code(&self) -> &'static str {
        match self {
            DepthError::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            DepthError::SingularScatter => "SINGULAR_SCATTER",
            DepthError::NestingViolation { .. } => "NESTING_VIOLATION",
            DepthError::InvalidAlpha(_) => "INVALID_ALPHA",
            DepthError::ZeroMad => "ZERO_MAD",
            DepthError::TooLarge { .. } => "TOO_LARGE",
            DepthError::UnknownDepth(_) => "UNKNOWN_DEPTH",
            DepthError::Unsupported(_) => "UNSUPPORTED",
            DepthError::GridMismatch => "GRID_MISMATCH",
            DepthError::EmptyRegion => "EMPTY_REGION",
            DepthError::EmptyT => "EMPTY_T",
            DepthError::NonlinearFunctional(_) => "NONLINEAR_FUNCTIONAL",
            DepthError::InvalidData(_) => "INVALID_DATA",
            DepthError::Solver(_) => "SOLVER_ERROR",
        }
    }
}

pub type Result<T> = std::result::Result<T, DepthError>;

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(DepthError::InvalidAlpha(alpha))
    }
}
