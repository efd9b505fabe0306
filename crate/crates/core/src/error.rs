use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("relaxation time must be finite and positive, got {0}")]
    InvalidRelaxationTime(f64),

    #[error("invalid pulse parameter `{field}`: {reason}")]
    InvalidPulse { field: &'static str, reason: String },

    #[error("beam splitter requires r + t = 1 and r, t in [0, 1]; got r = {r}, t = {t}")]
    InvalidBeamSplitter { r: f64, t: f64 },

    #[error("scenario contract violated: {0}")]
    ScenarioContract(String),

    #[error("frequency grid must be nonempty, finite and ascending")]
    InvalidGrid,

    #[error("reference intensity must be finite and positive, got {0}")]
    InvalidReference(f64),

    #[error("optimization constraint violated: {0}")]
    Constraint(String),

    #[error("invalid quadrature settings: {0}")]
    InvalidQuadrature(String),

    #[error("quadrature imaginary residual {0:e} exceeds 1e-12")]
    ImaginaryResidual(f64),

    #[error("phasor oracle is only valid for coherent pulses (gamma = gamma_x = 0)")]
    NotCoherent,

    #[error("configuration has {} validation error(s)", .0.len())]
    Validation(Vec<crate::scenario::Issue>),
}
