use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("jump requested outside the jump set")]
    EmptyJumpSet,
    #[error("flow rate must be positive, got {0}")]
    NonPositiveRate(f64),
    #[error("verdict is not an equilibrium")]
    NotAnEquilibrium,
    #[error("unknown figure preset `{0}` (expected one of s1, s3, s5, s7)")]
    UnknownPreset(String),
    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = CoreError> = std::result::Result<T, E>;
