use num_bigint::BigInt;
use thiserror::Error;

use crate::eval::LimitEstimate;

/// Everything that can go wrong while building, transforming or checking a
/// continued fraction.
///
/// Index-carrying variants report the first offending (1-based) position so a
/// caller can truncate its input and retry.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rational function has a pole at n = {n}")]
    PoleAtArgument { n: BigInt },
    #[error("the zero rational function has no leading coefficient")]
    ZeroFunction,
    #[error("rational function denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("parse error: {0}")]
    Parse(String),

    #[error("continued fraction has no term at position {index}")]
    NoSuchTerm { index: usize },
    #[error("partial numerator a_{index} is zero")]
    ZeroPartialNumerator { index: usize },
    #[error("similarity factor r_{index} is zero")]
    ZeroScaleFactor { index: usize },
    #[error("similarity factors must start with r_0 = 1")]
    LeadingScaleNotOne,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no convergence after {} terms", estimate.terms_used)]
    DidNotConverge { estimate: Box<LimitEstimate> },
    #[error("sequence needs {needed} entries, got {available}")]
    InsufficientTerms { needed: usize, available: usize },

    #[error("K_{index} equals K_{}", index - 1)]
    RepeatedValue { index: usize },
    #[error("series/product term {index} is zero")]
    ZeroTerm { index: usize },
    #[error("product factor {index} equals 1")]
    UnitTerm { index: usize },
    #[error("perturbed term {index} is degenerate (zero increment)")]
    DegenerateTerm { index: usize },
    #[error("even contraction needs b_{index} != 0")]
    ZeroEvenDenominator { index: usize },
    #[error("odd contraction needs b_{index} != 0")]
    ZeroOddDenominator { index: usize },
    #[error("Bauer-Muir transform does not exist: a_{index} - w_{}(b_{index} + w_{index}) = 0", index - 1)]
    TransformDoesNotExist { index: usize },
    #[error("extension requires w_0 = 0")]
    NonzeroW0,
    #[error("extension requires w_{index} != 0")]
    ZeroW { index: usize },

    #[error("hypothesis violated: {name}")]
    HypothesisViolation { name: String },
    #[error("term {index} is not an integer")]
    NonIntegerTerms { index: usize },
    #[error("empty range")]
    EmptyRange,
    #[error("unsupported constant: {0}")]
    UnsupportedConstant(String),
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
}

impl Error {
    /// Short machine-readable name, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::PoleAtArgument { .. } => "PoleAtArgument",
            Error::ZeroFunction => "ZeroFunction",
            Error::ZeroDenominator => "ZeroDenominator",
            Error::Parse(_) => "Parse",
            Error::NoSuchTerm { .. } => "NoSuchTerm",
            Error::ZeroPartialNumerator { .. } => "ZeroPartialNumerator",
            Error::ZeroScaleFactor { .. } => "ZeroScaleFactor",
            Error::LeadingScaleNotOne => "LeadingScaleNotOne",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::DidNotConverge { .. } => "DidNotConverge",
            Error::InsufficientTerms { .. } => "InsufficientTerms",
            Error::RepeatedValue { .. } => "RepeatedValue",
            Error::ZeroTerm { .. } => "ZeroTerm",
            Error::UnitTerm { .. } => "UnitTerm",
            Error::DegenerateTerm { .. } => "DegenerateTerm",
            Error::ZeroEvenDenominator { .. } => "ZeroEvenDenominator",
            Error::ZeroOddDenominator { .. } => "ZeroOddDenominator",
            Error::TransformDoesNotExist { .. } => "TransformDoesNotExist",
            Error::NonzeroW0 => "NonzeroW0",
            Error::ZeroW { .. } => "ZeroW",
            Error::HypothesisViolation { .. } => "HypothesisViolation",
            Error::NonIntegerTerms { .. } => "NonIntegerTerms",
            Error::EmptyRange => "EmptyRange",
            Error::UnsupportedConstant(_) => "UnsupportedConstant",
            Error::UnknownPreset(_) => "UnknownPreset",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
