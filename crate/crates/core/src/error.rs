use thiserror::Error;

use crate::structure::Element;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature mismatch: {left:?} vs {right:?}")]
    SignatureMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("signature must be non-empty with every arity >= 1, got {0:?}")]
    InvalidSignature(Vec<usize>),

    #[error("domain size must be at least 1")]
    EmptyDomain,

    #[error("{context}: element {element} outside 1..={domain}")]
    ElementOutOfRange {
        context: String,
        element: Element,
        domain: u32,
    },

    #[error("{context}: tuple of length {found}, expected arity {expected}")]
    ArityMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("map covers {found} elements but the source domain has {expected}")]
    MapLength { expected: usize, found: usize },

    #[error("element {element} bound twice (to {first} and {second})")]
    ConflictingBinding {
        element: Element,
        first: Element,
        second: Element,
    },

    #[error("invalid random model: {0}")]
    InvalidModel(String),

    #[error("tuple space {domain}^{arity} exceeds enumeration capacity of {limit} tuples")]
    TupleSpaceTooLarge {
        domain: u32,
        arity: usize,
        limit: u64,
    },

    #[error("search space of {space} candidate maps exceeds the cap of {cap}")]
    TooLarge { space: String, cap: u64 },

    #[error("forcing vertex list is empty")]
    EmptyForcingSet,

    #[error("expected a 3-element vertex set, got {0} elements")]
    NotATriple(usize),

    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("format error: {0}")]
    Format(String),
}
