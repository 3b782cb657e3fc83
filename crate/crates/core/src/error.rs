use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid element {element}: {reason}")]
    InvalidElement { element: String, reason: String },

    #[error("inverted element {element}: signed area {area:e}")]
    InvertedElement { element: String, area: f64 },

    #[error("non-conforming mesh at edge ({v0}, {v1}): {reason}")]
    Conformity { v0: usize, v1: usize, reason: String },

    #[error("mesh validation failed: {0}")]
    Validation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("mass lumping failed at {location}: {value:e}")]
    LumpingFailure { location: String, value: f64 },

    #[error("singular bubble coefficient system on triangle {0}")]
    SingularBubbleSystem(String),

    #[error("solution blew up at step {step} (t = {t})")]
    BlowUp { step: usize, t: f64 },

    #[error("invalid time step configuration: {0}")]
    TimeStep(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("verification setup error: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
