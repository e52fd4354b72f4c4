use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `exp(-z^2)` would overflow at this orbit step.
    #[error("orbit saturated at step {step}")]
    SaturatedOrbit { step: usize },

    /// An orbit point needed for an a-priori bound is outside the sector `S`.
    #[error("orbit left the sector S at step {step}")]
    OrbitLeftS { step: usize },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
