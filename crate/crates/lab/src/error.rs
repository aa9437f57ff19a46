use spectra_core::{Error as CoreError, RegularityCondition};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    /// Unreadable, malformed or out-of-range configuration.
    #[error("config error: {0}")]
    Config(String),
    /// The configured family breaks a regular-mapping rule.
    #[error("invalid family: {0}")]
    Invalid(CoreError),
    #[error("computation error: {0}")]
    Compute(#[from] CoreError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Config(_) | LabError::Invalid(_) => 2,
            LabError::Compute(_) | LabError::Io(_) => 3,
        }
    }

    /// The regularity condition a validation failure names, if any.
    pub fn condition(&self) -> Option<RegularityCondition> {
        match self {
            LabError::Invalid(CoreError::Condition { condition, .. }) => Some(*condition),
            _ => None,
        }
    }
}
