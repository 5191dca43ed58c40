//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building or checking identities.
///
/// Variants are grouped by the exit code the command-line front end maps
/// them to: mathematical failures ([`Error::VerificationFailed`],
/// [`Error::ReductionUnavailable`], ...) exit 1, resource guards
/// ([`Error::BudgetExceeded`]) exit 2, and usage or format errors exit 3.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must share an arity do not.
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: u32, found: u32 },

    /// A slot index fell outside `1..=arity`.
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: u32, arity: u32 },

    /// Power sums are indexed by n >= 1 only.
    #[error("power sum index must be >= 1, got {0}")]
    PowerSumIndex(u32),

    /// Weight vectors are indexed from 1 and bounded by the arity.
    #[error("weight index {index} out of range for arity {arity}")]
    WeightIndexOutOfRange { index: u32, arity: u32 },

    /// Numeric weight vectors must have every entry nonzero.
    #[error("weight vector entry {position} is zero")]
    ZeroWeightEntry { position: usize },

    /// A weight vector must have at least one entry.
    #[error("weight vector must be nonempty")]
    EmptyWeightVector,

    /// An operation needed concrete rational weights.
    #[error("{operation} requires a numeric weight vector")]
    NumericWeightsRequired { operation: &'static str },

    /// A lift index fell outside `1..=arity+1`.
    #[error("lift index {index} out of range 1..={limit}")]
    LiftIndexOutOfRange { index: u32, limit: u32 },

    /// A polynomial could not be collected into identity form.
    #[error("not an identity polynomial: {0}")]
    MalformedIdentity(String),

    /// A partition literal violated the weakly-decreasing-positive invariant.
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    /// A Hankel specification violated its shape constraints.
    #[error("invalid Hankel spec: {0}")]
    InvalidHankelSpec(String),

    /// A claimed zero-sum subset does not actually sum to zero.
    #[error("subset {subset:?} does not sum to zero for the given weights")]
    NotAZeroSumSubset { subset: Vec<u32> },

    /// Power reduction needs the identity's top coefficient to be nonzero at
    /// the given weights; the offending coefficient is reported verbatim.
    #[error("power reduction unavailable: leading coefficient {coefficient} vanishes at d = {weights}")]
    ReductionUnavailable {
        coefficient: String,
        weights: String,
    },

    /// The requested exponent is not above the relation's weight, so the
    /// rewriting rule does not apply.
    #[error("cannot reduce p_{exponent}: need exponent > relation weight {weight}")]
    ReductionOutOfRange { exponent: u32, weight: u32 },

    /// A resource guard tripped (arity cap, term budget, variable budget).
    #[error("resource budget exceeded: {what} ({used} > {limit})")]
    BudgetExceeded {
        what: String,
        used: u64,
        limit: u64,
    },

    /// An identity that was expected to verify did not.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// Text in the polynomial grammar failed to parse.
    #[error("parse error: {0}")]
    Parse(String),

    /// A serialized document was structurally valid JSON but not a valid
    /// identity or cache document.
    #[error("invalid document: {0}")]
    InvalidDocument(String),

    /// Command-line usage error.
    #[error("usage: {0}")]
    Usage(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end: 1 for mathematical
    /// failures, 2 for resource guards, 3 for usage/format errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::VerificationFailed(_)
            | Error::ReductionUnavailable { .. }
            | Error::NotAZeroSumSubset { .. } => 1,
            Error::BudgetExceeded { .. } => 2,
            _ => 3,
        }
    }
}
