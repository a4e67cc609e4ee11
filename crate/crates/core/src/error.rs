use thiserror::Error;

/// Errors raised by the simulation core.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type used
/// for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("discord target {target} is unreachable; attainable maximum is {max}")]
    DiscordOutOfRange { target: f64, max: f64 },

    #[error("discord is not strictly increasing in xi near xi = {xi}")]
    NonMonotoneDiscord { xi: f64 },

    #[error("closed-form discord and basis sweep disagree by {difference:e} bits")]
    DiscordMismatch { difference: f64 },

    #[error("population inversion: emission rate {r1} >= absorption rate {r2}")]
    PopulationInversion { r1: f64, r2: f64 },

    #[error("Fock cutoff {dim} too small: thermal tail {tail:e} exceeds {threshold:e}; need dim >= {required}")]
    CutoffTooSmall {
        dim: usize,
        required: usize,
        tail: f64,
        threshold: f64,
    },

    #[error("master equation not converged after {steps} steps (residual {residual:e})")]
    NotConverged { steps: usize, residual: f64 },

    #[error("step refinement of the unitary stroke did not converge (last change {change:e})")]
    PropagationNotConverged { change: f64 },

    #[error("truncation leak {leak:e} in row {row} exceeds {threshold:e}")]
    TruncationLeak { row: usize, leak: f64, threshold: f64 },

    #[error("distribution leak {leak:e} exceeds {threshold:e}; need dim >= {required}")]
    DistributionLeak {
        leak: f64,
        threshold: f64,
        required: usize,
    },

    #[error("characteristic function branch cut crossed at (u, v) = ({u}, {v})")]
    BranchCut { u: f64, v: f64 },

    #[error("characteristic function not normalized: |G(0,0) - 1| = {deviation:e}")]
    Normalization { deviation: f64 },

    #[error("machine operates as {mode}, not as an engine; use the coefficient of performance <q_c>/<w> for refrigerators")]
    NotEngine { mode: String },

    #[error("entropy production must be positive, got {sigma}")]
    NonPositiveEntropyProduction { sigma: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
