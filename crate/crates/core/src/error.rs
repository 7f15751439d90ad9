use thiserror::Error;

/// Errors raised by the law, path and simulation routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("parts sum to {got}, expected {expected}")]
    PartsMismatch { expected: u64, got: u64 },

    #[error("path length {n} exceeds the enumeration cap of {cap} steps")]
    TooLarge { n: u64, cap: u64 },

    #[error("{0} is unreachable: time and height differences have different parity")]
    Unreachable(String),

    #[error("invalid lattice points: {0}")]
    InvalidPoints(String),

    #[error("invalid step {0}: steps must be +1 or -1")]
    InvalidStep(i64),

    #[error("{law} is only established for the fair walk (p = 1/2), got p = {p}")]
    BiasedUnsupported { law: &'static str, p: String },

    #[error("index {index} outside [0, {max}]")]
    IndexRange { index: i64, max: u64 },

    #[error("argument {value} outside the domain {domain}")]
    DomainRange { value: String, domain: &'static str },

    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProb(String),

    #[error("cannot parse {0:?} as an exact rational (expected a/b)")]
    Parse(String),

    #[error("p = {0} is not 1/2; use the biased formulas")]
    NotUnbiased(String),

    #[error("p = {0} is degenerate; use ruin_degenerate")]
    DegenerateP(String),

    #[error("start offset {0} is only supported for the unbiased walk")]
    StartUnsupported(i64),

    #[error("barriers must be positive and start within [-B, A]: {0}")]
    InvalidSpec(String),

    #[error("rho = 1 is the unbiased walk; use ruin_unbiased")]
    RhoOne,

    #[error("p = 1/2: escape probability from 1 to N is 1/N")]
    NotBiased,

    #[error("dimension {0} is not supported (expected 1, 2 or 3)")]
    UnsupportedDimension(u32),
}

pub type Result<T> = std::result::Result<T, WalkError>;
