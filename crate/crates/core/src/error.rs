//! Error type shared across the crate.
//!
//! Every failure carries a stable `code()` used by the CLI report format, so
//! callers can match on the kind of violation without parsing messages.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group descriptor: {0}")]
    InvalidGroupSpec(String),

    #[error("invalid metacyclic parameters ({pa}, {q}, {r}): {reason}")]
    InvalidMetacyclic { pa: u64, q: u64, r: u64, reason: String },

    #[error("permutation closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("group is not abelian")]
    NonAbelian,

    #[error("character table validation failed: {relation}")]
    TableValidation { relation: String },

    #[error("non-integral restriction multiplicity at class {class}: {value}")]
    NonIntegralMultiplicity { class: usize, value: String },

    #[error("operation requires a Cayley-table-backed character table")]
    GroupTableRequired,

    #[error("{k} is not coprime to {modulus}")]
    NonCoprime { k: i64, modulus: u64 },

    #[error("kappa declared at modulus {kappa} but the group has exponent {exponent}")]
    ExponentMismatch { kappa: u64, exponent: u64 },

    #[error("invalid kappa descriptor: {0}")]
    InvalidKappaSpec(String),

    #[error("malformed document: {0}")]
    Document(String),
}

impl Error {
    /// Stable machine-readable code for CLI error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidGroupSpec(_) => "bad-group-spec",
            Error::InvalidMetacyclic { .. } => "bad-metacyclic",
            Error::ClosureCapExceeded { .. } => "closure-cap",
            Error::InvalidPermutation(_) => "bad-permutation",
            Error::NonAbelian => "non-abelian",
            Error::TableValidation { .. } => "table-validation",
            Error::NonIntegralMultiplicity { .. } => "non-integral-multiplicity",
            Error::GroupTableRequired => "group-table-required",
            Error::NonCoprime { .. } => "non-coprime",
            Error::ExponentMismatch { .. } => "kappa-exponent-mismatch",
            Error::InvalidKappaSpec(_) => "bad-kappa-spec",
            Error::Document(_) => "bad-document",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
