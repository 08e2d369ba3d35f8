//! Error taxonomy shared by all modules.
//!
//! Every fallible operation returns [`Result`] with a structured error so
//! the CLI can map validation problems to exit code 2 and tolerance
//! failures to exit code 1 without string matching.

use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A symbol vanished (or nearly vanished) where it must not,
    /// e.g. on the sampling grid of a winding-number computation.
    #[error("symbol is singular: {0}")]
    SingularSymbol(String),

    /// An operation requiring winding number zero was given a symbol
    /// with nonzero winding.
    #[error("symbol has nonzero winding number {0}")]
    Winding(i64),

    /// An adaptive computation failed to reach the requested tolerance.
    #[error("accuracy target not reached: {context} (last error estimate {estimate:e})")]
    Accuracy { context: String, estimate: f64 },

    /// An evaluation point lies on (or numerically on) the unit circle
    /// where a two-sided object is discontinuous.
    #[error("evaluation point |z| = 1 within 1e-12; pick a side explicitly")]
    Boundary,

    /// Row/column index lists are invalid (out of range, duplicated,
    /// not strictly increasing, or mismatched lengths).
    #[error("invalid index data: {0}")]
    Index(String),

    /// A declared pole lies on the unit circle.
    #[error("pole at {0} lies on the unit circle")]
    PoleOnCircle(num_complex::Complex64),

    /// Family-specific parameter validation failed.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A structured-determinant spec is inconsistent (size below the
    /// kind's minimum, wrong number of borders/corners, ...).
    #[error("invalid determinant spec: {0}")]
    Spec(String),

    /// Matrix shape problem (e.g. determinant of a non-square matrix).
    #[error("shape error: {0}")]
    Shape(String),

    /// A Toeplitz determinant D_k that must be nonzero vanished.
    #[error("degenerate moment: D_{k} = 0 (required nonzero)")]
    DegenerateMoment { k: usize },

    /// A precondition stated by the source theorem fails, so the
    /// requested construction does not exist along this route.
    #[error("theorem precondition violated: {0}")]
    Precondition(String),

    /// A requested index exceeds the stored truncation order.
    #[error("index {idx} outside stored range {max}")]
    Range { idx: usize, max: usize },

    /// A frame/border specification is outside the supported closed-form
    /// families (no silent fallback).
    #[error("unsupported spec: {0}")]
    UnsupportedSpec(String),

    /// Evaluation point too close to a quadrature contour.
    #[error("point {z} within 1e-6 of contour radius {radius}")]
    ContourProximity { z: num_complex::Complex64, radius: f64 },

    /// Region-restricted evaluator called with a point outside the region.
    #[error("point not in requested region: {0}")]
    Region(String),

    /// Configuration file / CLI validation problem.
    #[error("config error: {0}")]
    Config(String),

    /// I/O problem while reading config or writing reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization problem.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
