use thiserror::Error;

use crate::ordinal_space::Ordinal;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseOrdinalError {
    #[error("cannot parse ordinal term `{0}`")]
    Syntax(String),
    #[error("terms are not in Cantor normal form")]
    NotNormal,
    #[error("exponent {0} is outside the supported range")]
    ExponentTooLarge(u32),
}

/// Errors shared by every analysis in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseOrdinalError),
    #[error("point {0} is outside the space")]
    OutsideSpace(Ordinal),
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid ideal function: {0}")]
    InvalidFunction(String),
    #[error("negative value at {0}")]
    NegativeValue(Ordinal),
    #[error("function is not lower semicontinuous at {0}")]
    NotSemicontinuous(Ordinal),
    #[error("level set {{f >= {level}}} is not clopen; boundary point {witness}")]
    NotContinuous { level: u64, witness: Ordinal },
    #[error("point {0} of V(f) is n-critical")]
    CriticalObstruction(Ordinal),
    #[error("point {0} of V(f) is omega-critical")]
    OmegaCriticalObstruction(Ordinal),
    #[error("function is unbounded")]
    Unbounded,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("window too small: elements {0} and {1} agree on every window point")]
    WindowTooSmall(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
