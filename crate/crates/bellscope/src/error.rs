//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building or evaluating a model.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands have incompatible dimensions.
    #[error("dimension mismatch: {left} vs {right} in {context}")]
    ShapeMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    /// A tensor product (or a requested construction) would exceed the
    /// supported matrix dimension.
    #[error("dimension {requested} exceeds the supported cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },

    /// Matrix dimension must be at least one.
    #[error("matrix dimension must be >= 1")]
    EmptyMatrix,

    /// A NaN or infinity showed up where a finite number is required.
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    /// Input fails the Hermiticity tolerance.
    #[error("matrix is not Hermitian: max |M - M'| = {deviation:.3e} exceeds {tolerance:.1e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    /// Observable spectrum violates its declared class.
    #[error("spectrum violates the {class} class: {detail}")]
    SpectrumViolation { class: &'static str, detail: String },

    /// Requested commutation regime contradicts the supplied operators.
    #[error("operators violate the {regime} regime: {detail}")]
    RegimeViolation {
        regime: &'static str,
        detail: String,
    },

    /// State vector is not normalized.
    #[error("state is not a unit vector: norm = {norm}")]
    NotUnitNorm { norm: f64 },

    /// Bad optimizer or estimator configuration.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A probability is outside [0, 1] or a probability list is empty.
    #[error("invalid probability input: {0}")]
    InvalidProbability(String),

    /// Joint-distribution request beyond the atom-array feasibility cap.
    #[error("event count {n} exceeds the cap of {cap} for explicit joint distributions")]
    TooManyEvents { n: usize, cap: usize },

    /// Hidden-variable model failed validation.
    #[error("hidden-variable model '{name}' failed validation: {detail}")]
    ModelValidation { name: String, detail: String },

    /// Unknown built-in model or state name.
    #[error("unknown {kind}: '{name}'")]
    UnknownName { kind: &'static str, name: String },

    /// Malformed CSV input.
    #[error("malformed CSV ({path}): {detail}")]
    CsvFormat { path: String, detail: String },

    /// Empty or inverted scan descriptor.
    #[error("scan descriptor produces no offsets: {0}")]
    EmptyScan(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
