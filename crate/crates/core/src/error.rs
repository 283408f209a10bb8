use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A mode energy vanished, so the Bogoliubov angle is undefined at `k`.
    #[error("degenerate Bogoliubov angle at k = {k} (vanishing mode energy)")]
    DegenerateAngle { k: f64 },

    #[error(
        "quadrature did not converge: value {value:e}, error estimate {error:e} after {subdivisions} subdivisions"
    )]
    QuadratureFailure {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    /// A finite-temperature routine was handed beta = infinity.
    #[error("beta = inf has no finite-temperature evaluation; use the zero-temperature limits")]
    ZeroTemperature,

    #[error("system size {n} exceeds the dense limit of {max} sites")]
    SizeExceeded { n: usize, max: usize },

    #[error("eigenvalue gap {gap:e} is too close to the degeneracy tolerance {tolerance:e}")]
    DegeneracyAmbiguity { gap: f64, tolerance: f64 },
}
