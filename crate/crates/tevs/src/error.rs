//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building series, evaluating products,
/// or parsing files.
#[derive(Debug, Error)]
pub enum Error {
    /// Timestamps must strictly increase along a series; duplicates count too.
    #[error("timestamps must strictly increase: sample {index} has t = {next} after t = {prev}")]
    NonMonotoneTimestamps { index: usize, prev: f64, next: f64 },

    /// The all-zero spatial value is the suppressed null element and may not
    /// be stored in a series.
    #[error("sample {index} carries the all-zero spatial value, which is not a valid series element")]
    ZeroSpatialValue { index: usize },

    /// NaN or infinite timestamp.
    #[error("sample {index} has a non-finite timestamp")]
    NonFiniteTimestamp { index: usize },

    /// NaN or infinite spatial coordinate.
    #[error("sample {index} has a non-finite spatial coordinate")]
    NonFiniteValue { index: usize },

    /// Two operands (or a sample and its series) disagree on the spatial dimension.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A labelled dataset must carry exactly one label per series.
    #[error("label count mismatch: {series} series but {labels} labels")]
    LabelCountMismatch { series: usize, labels: usize },

    /// Scalar multiplication requires a finite scalar.
    #[error("scalar must be finite, got {value}")]
    NonFiniteScalar { value: f64 },

    /// Sanitization requires a strictly positive, finite replacement value.
    #[error("epsilon must be finite and > 0, got {value}")]
    InvalidEpsilon { value: f64 },

    /// The time stiffness must be finite and non-negative.
    #[error("time stiffness nu must be finite and >= 0, got {value}")]
    InvalidStiffness { value: f64 },

    /// The Gaussian bandwidth must be finite and non-negative.
    #[error("gaussian bandwidth gamma must be finite and >= 0, got {value}")]
    InvalidGamma { value: f64 },

    /// The exponential reference recursion only accepts small inputs.
    #[error("naive evaluation is limited to |A| + |B| <= {limit}, got {actual}")]
    SizeLimitExceeded { limit: usize, actual: usize },

    /// A self-product came out negative, so the configuration is not an inner
    /// product and no norm exists.
    #[error("self-product is negative ({value}); the configuration does not induce a norm")]
    NegativeSquare { value: f64 },

    /// The operation needs a nonempty series.
    #[error("operation requires a nonempty series")]
    EmptySeries,

    /// The operation needs a nonempty family of series.
    #[error("operation requires a nonempty family of series")]
    EmptyFamily,

    /// A generator was asked for fewer members than it can produce.
    #[error("family requires at least {required} members, got {actual}")]
    FamilyTooSmall { required: usize, actual: usize },

    /// The eigen-solver only accepts exactly symmetric matrices.
    #[error("matrix is not symmetric at ({row}, {col})")]
    AsymmetricInput { row: usize, col: usize },

    /// The Jacobi sweep loop hit its iteration cap without meeting the
    /// off-diagonal threshold.
    #[error("jacobi eigen-solver did not converge after {sweeps} sweeps")]
    EigenConvergence { sweeps: usize },

    /// The CSV format carries one scalar value per row.
    #[error("csv format supports only 1-dimensional series, dataset has d = {dim}")]
    UnsupportedCsvDimension { dim: usize },

    /// Malformed input file.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
