use alloc::string::String;

/// Errors raised by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("unsupported prime {0}")]
    UnsupportedPrime(u32),
    #[error("invalid field description: {0}")]
    InvalidField(String),
    #[error("generators are p-dependent")]
    DependentGenerators,
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("symbol entry is zero")]
    ZeroEntry,
    #[error("element is not a unit of the model ring")]
    NonUnit,
    #[error("level {level} outside 1..={max}")]
    LevelOutOfRange { level: usize, max: usize },
    #[error("class has a nonzero graded datum below level {0}")]
    NotInLevel(usize),
    #[error("class is not in br_1: {0}")]
    NotInBr1(String),
    #[error("could not resolve a k2 relation among residue symbols: {0}")]
    UnresolvedK2(String),
    #[error("bad specialization: {0}")]
    BadSpecialization(String),
    #[error("symbol expansion exceeded its step budget")]
    ExpansionBudget,
    #[error("mismatched operands: {0}")]
    Mismatch(String),
}

pub type Result<T> = core::result::Result<T, Error>;
