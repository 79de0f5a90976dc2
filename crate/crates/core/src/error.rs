//! Error type shared across the crate.

use alloc::string::String;
use alloc::vec::Vec;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by dataset handling, metric computation and the solver.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A label entry is outside the +-1 domain.
    #[error("label at sample {sample}, class {class} is {value}, expected -1 or +1")]
    LabelDomain {
        sample: usize,
        class: usize,
        value: i64,
    },

    /// A feature value is NaN or infinite.
    #[error("non-finite feature value at row {row}, column {col}")]
    NonFiniteFeature { row: usize, col: usize },

    /// Matrix dimensions do not line up for the requested operation.
    #[error("shape mismatch in {context}: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    ShapeMismatch {
        context: &'static str,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    /// Vector lengths do not line up.
    #[error("length mismatch in {context}: {left} vs {right}")]
    LengthMismatch {
        context: &'static str,
        left: usize,
        right: usize,
    },

    /// The dataset violates a structural invariant.
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    /// A parameter is outside its documented range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    /// The bias row has already been appended.
    #[error("dataset already carries a bias row")]
    BiasAlreadyPresent,

    /// Split fractions are out of range.
    #[error("split fractions out of range: validation {validation}, test {test}")]
    FractionOutOfRange { validation: f64, test: f64 },

    /// A split would be empty under the requested fractions.
    #[error("split {which} would be empty with n = {n}")]
    EmptySplit { which: &'static str, n: usize },

    /// Stratified splitting is impossible because a class is too small.
    #[error("stratified split impossible: class {class} has only {count} samples (need >= 3)")]
    StratifyImpossible { class: usize, count: usize },

    /// The synthetic generator configuration cannot separate the classes.
    #[error("degenerate synthetic configuration: {0}")]
    DegenerateSynthesis(String),

    /// An F-measure is undefined because its denominator is not positive.
    #[error("undefined {measure}: denominator {denominator} is not positive")]
    UndefinedMeasure {
        measure: &'static str,
        denominator: f64,
    },

    /// The discretized value r leaves the admissible cost range.
    #[error("r = {r} outside [0, {max}] would produce a negative cost")]
    NegativeCost { r: f64, max: f64 },

    /// A class index is out of range.
    #[error("class index {index} out of range for {classes} classes")]
    ClassOutOfRange { index: usize, classes: usize },

    /// The linear system of a column update is numerically singular.
    #[error("numerically singular column system (condition estimate {condition_estimate:e})")]
    SingularSystem { condition_estimate: f64 },

    /// The objective became NaN or infinite while iterating.
    #[error("non-finite objective at iteration {iteration}")]
    NonFiniteObjective {
        iteration: usize,
        /// Objective values recorded before the failure.
        trace: Vec<f64>,
    },

    /// Every discretized r failed to produce a usable validation score.
    #[error("no sweep point produced a defined validation F-measure")]
    AllSweepPointsFailed,

    /// An operation received an empty feature selection.
    #[error("empty feature selection")]
    EmptySelection,

    /// A split contains a single class, making evaluation degenerate.
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),

    /// Two reports cannot be compared because their configurations differ.
    #[error("reports not comparable: {0}")]
    ConfigMismatch(String),
}
