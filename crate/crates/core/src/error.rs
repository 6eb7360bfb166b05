use thiserror::Error;

use crate::coefficient::RingKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingKind, right: RingKind },

    #[error("exponent overflow")]
    ExponentOverflow,

    #[error("division by zero")]
    DivisionByZero,

    #[error("constant term undetermined: {operand} coefficients z^{lo}..=z^{hi} are unknown")]
    UndeterminedPairing { operand: &'static str, lo: i64, hi: i64 },

    #[error("cannot evaluate a truncated series at z = 1 (terms beyond z^{0} unknown)")]
    TruncatedEvaluation(i64),

    #[error("series is not divisible by (1 - z)")]
    NotDivisible,

    #[error("vanishing recursion determinant {which} at n = {n}, j = {j}, nu = {nu}")]
    DegenerateDeterminant { which: &'static str, n: usize, j: usize, nu: String },

    #[error("superpotential truncated at K = {available}, but υ_{needed} is required")]
    InsufficientTruncation { needed: usize, available: usize },

    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: usize, found: usize },

    #[error("sector mismatch")]
    SectorMismatch,

    #[error("missing level {0}")]
    MissingLevel(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("tolerance {tol:e} is unreachable in f64 (value {value:e})")]
    ToleranceUnreachable { tol: f64, value: f64 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
