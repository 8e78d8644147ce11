use thiserror::Error;

use crate::rootfind::{RootError, TrackError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("operation requires a nonconstant polynomial")]
    ConstantPolynomial,

    #[error("resultant with respect to z2 needs at least one input of positive z2-degree")]
    Z2Free,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("monomial norm table has no entry for exponent ({a}, {b})")]
    MissingNorm { a: u32, b: u32 },

    #[error("point ({0}, {1}) does not lie in the open domain")]
    OutsideDomain(String, String),

    #[error("kernel series did not reach tolerance within {shells} degree shells")]
    KernelTruncation { shells: usize },

    #[error("root finding failed: {0}")]
    Root(#[from] RootError),

    #[error("path tracking failed: {0}")]
    Track(#[from] TrackError),

    #[error(
        "generators share a curve: every resultant vanishes identically; \
         re-extract the gcd before zero-dimensional solving"
    )]
    PositiveDimensional,

    #[error("zero-dimensional solving needs at least two generators")]
    TooFewGenerators,

    #[error("at least one generator must be nonzero")]
    AllGeneratorsZero,

    #[error("no admissible base point found after {tries} attempts: {reason}")]
    BasePoint { tries: usize, reason: String },

    #[error("no fiber circle clears the tolerance; best min modulus {best_min_modulus:e} at a = {a}, b = {b}")]
    NoAdmissibleRotation {
        best_min_modulus: f64,
        a: String,
        b: String,
    },
}

impl Error {
    /// Message without the variant prefix, for nesting parse errors.
    pub(crate) fn parse_detail(self) -> String {
        match self {
            Error::Parse(m) => m,
            other => other.to_string(),
        }
    }
}
