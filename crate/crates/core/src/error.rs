use thiserror::Error;

/// Errors raised by the model, the trajectory analysis and the limit studies.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{field} {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    /// The amplitude D(x) vanishes (α = 1 node), so momentum and time blow up.
    #[error("singular point at x = {x}: amplitude squared {d:e} is below the node guard")]
    Singular { x: f64, d: f64 },

    #[error("wedge is unbounded for alpha = 1 (upper edge at infinity)")]
    UnboundedWedge,

    #[error("infinite velocity at turning point x = {x}")]
    InfiniteVelocity { x: f64 },

    #[error("x = {x} is not a trigger point (cos(2kx+beta) != -1); use decompose_time instead")]
    NotTriggerPoint { x: f64 },

    #[error("invalid alpha sequence: {0}")]
    InvalidSequence(String),

    #[error("turning points do not alternate between temporal maxima and minima at x = {x}")]
    MalformedTurningPoints { x: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl ModelError {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        ModelError::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for errors caused by the numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            ModelError::Singular { .. }
                | ModelError::InfiniteVelocity { .. }
                | ModelError::MalformedTurningPoints { .. }
                | ModelError::NumericalFailure(_)
        )
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
