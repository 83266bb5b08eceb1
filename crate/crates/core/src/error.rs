use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: String },

    #[error("parameters outside the validity region: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index out of bounds: {0}")]
    Bounds(String),

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds {tolerance:.3e})")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("interlacing violated by {excess:.3e} at row {row}")]
    Interlacing { row: usize, excess: f64 },

    #[error("quadrature did not converge: estimate {value:e}, error {error:e} after {evaluations} evaluations")]
    NoConvergence { value: f64, error: f64, evaluations: usize },

    #[error("degenerate importance weights: {effective} of {total} samples nonzero")]
    DegenerateWeights { effective: u64, total: u64 },

    #[error("calibration dispersion {dispersion:.3e} exceeds {limit:.1e}")]
    Calibration { dispersion: f64, limit: f64 },

    #[error("enumeration would exceed the cap of {cap} lattices")]
    Budget { cap: usize },

    #[error("partial sums not settled: doubling changed the sum by {change:.3e} (tolerance {tolerance:.1e})")]
    Convergence { change: f64, tolerance: f64 },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by the caller's parameters rather than by an engine.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::Domain(_)
                | Error::InvalidParameter(_)
                | Error::Bounds(_)
                | Error::NotHermitian { .. }
                | Error::UnknownIdentity(_)
                | Error::Unsupported(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
