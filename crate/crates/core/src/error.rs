//! Shared error type for the whole crate.

use thiserror::Error;

/// Everything that can go wrong while building models, weights,
/// certificates, or running the numerical checks.
#[derive(Debug, Error)]
pub enum Error {
    /// A rate function evaluated below zero.
    #[error("negative rate {value} at t = {t}")]
    NegativeRate { t: f64, value: f64 },

    /// A rate definition is malformed (bad breakpoints, negative period,
    /// or a sampled negative minimum).
    #[error("invalid rate definition: {0}")]
    InvalidRate(String),

    /// Vector or matrix sizes do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Preset name not recognized or used with the wrong model.
    #[error("unknown preset: {0}")]
    UnknownPreset(String),

    /// A numeric parameter is out of its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The square root in the drift-root sequence went negative.
    #[error("negative discriminant in drift sequence at k = {k}")]
    NegativeDiscriminant { k: usize },

    /// A feasibility condition failed; `condition` names which one.
    #[error("infeasible ({condition}): {detail}")]
    Infeasible {
        condition: &'static str,
        detail: String,
    },

    /// A weight sequence of the wrong kind was supplied.
    #[error("weight kind mismatch: expected {expected}, got {got}")]
    KindMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// The operation is only defined for finite state spaces.
    #[error("operation requires a finite state space")]
    RequiresFinite,

    /// The margin parameter must stay below the mean drift.
    #[error("epsilon {eps} must lie in (0, {limit})")]
    EpsilonTooLarge { eps: f64, limit: f64 },

    /// A statement hypothesis does not hold for the supplied scenario.
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    /// The adaptive integrator could not make progress.
    #[error("step size underflow at t = {t} (h = {h})")]
    StepFailure { t: f64, h: f64 },

    /// Probability mass reached the truncation band.
    #[error("truncation boundary reached: mass {mass:.3e} in top band at t = {t}")]
    TruncationLoss { t: f64, mass: f64 },

    /// A time or index argument is outside the valid range.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// Initial vectors are not componentwise ordered on states >= 1.
    #[error("initial vectors are not ordered on states >= 1")]
    OrderViolation,

    /// Run configuration could not be parsed or validated.
    #[error("config error: {0}")]
    Config(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
