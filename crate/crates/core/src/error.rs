use thiserror::Error;

use crate::model::GateLabel;

/// Errors raised by model construction and the certification routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate ket: zero vector cannot be normalized")]
    DegenerateKet,
    #[error("not unitary: ‖U†U − 𝟙‖ = {0:.3e}")]
    NotUnitary(f64),
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
    #[error("parameter `{name}` = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("model has no channel for label `{0}`")]
    MissingChannel(GateLabel),
    #[error("gauge-undefined measurement: M₊ eigenvalue gap {0:.3e}")]
    GaugeUndefinedMeasurement(f64),
    #[error("degenerate difference operator: eigenvalue gap {0:.3e}")]
    DegenerateDifference(f64),
    #[error("degenerate frame overlap: |⟨ψ|φ⟩| = {psi_phi:.3e}, |⟨ψ⊥|φ⟩| = {psi_perp_phi:.3e}")]
    DegenerateFrameOverlap { psi_phi: f64, psi_perp_phi: f64 },
    #[error("phase convention violated after adjustment by {0:.3e}")]
    PhaseConvention(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Invalid {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    /// True for the errors that signal a mathematically degenerate input
    /// (the frame construction has no unique answer), as opposed to malformed data.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::GaugeUndefinedMeasurement(_)
                | Error::DegenerateDifference(_)
                | Error::DegenerateFrameOverlap { .. }
                | Error::PhaseConvention(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
