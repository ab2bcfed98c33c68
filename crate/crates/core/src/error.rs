use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
///
/// Every variant names the operation that failed so that callers (the CLI in
/// particular) can report it without extra context.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{op}: dimension mismatch (expected {expected}, got {got})")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{op}: invalid argument: {msg}")]
    InvalidArgument { op: &'static str, msg: String },

    #[error("{op}: matrix is singular (|det| = {det:e})")]
    Singular { op: &'static str, det: f64 },

    #[error("{op}: off-diagonal product b_{index}·c_{index} = {product} is not positive")]
    NotSymmetrizable {
        op: &'static str,
        index: usize,
        product: f64,
    },

    #[error("{op}: non-finite value at sample {index}")]
    NonFinite { op: &'static str, index: usize },

    #[error(
        "{op}: eigenvalue iteration did not converge for index {index} after {iterations} sweeps"
    )]
    NoConvergence {
        op: &'static str,
        index: usize,
        iterations: usize,
    },

    #[error("{op}: integrand mass on the outer grid ring is {ratio:e}; enlarge the grid")]
    GridTooSmall { op: &'static str, ratio: f64 },

    #[error("contour_correction: radius {radius} is within {distance:e} of the reference eigenvalue λ_{index}")]
    RadiusCollision {
        radius: f64,
        index: usize,
        distance: f64,
    },

    #[error("{op}: step too large, ‖G‖·dt = {value} exceeds {limit}")]
    StabilityGuard {
        op: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("{op}: configuration not admissible: {msg}")]
    NotAdmissible { op: &'static str, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(op: &'static str, msg: impl Into<String>) -> Self {
        Error::InvalidArgument {
            op,
            msg: msg.into(),
        }
    }

    /// True for failures of a numerical method as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::NoConvergence { .. }
                | Error::RadiusCollision { .. }
                | Error::GridTooSmall { .. }
        )
    }
}
