use alloc::string::String;

use thiserror::Error;

use crate::eval::ValueKind;
use crate::term::DiracChar;
use crate::workspace::Label;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite component at index {0}")]
    NonFinite(usize),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("invalid label `{0}`")]
    InvalidLabel(String),

    #[error("alternation violation: `{left}` followed by `{right}`")]
    AlternationViolation { left: DiracChar, right: DiracChar },

    #[error("empty character sequence")]
    EmptySequence,

    #[error("sequence of {len} characters exceeds enumeration cap {cap}")]
    CapExceeded { len: usize, cap: usize },

    #[error("position {position} holds a bra, not a ket")]
    NotAKet { position: usize },

    #[error("position {position} out of range for a term of {len} characters")]
    OutOfRange { position: usize, len: usize },

    #[error("ket at position {position} has no marking")]
    UnresolvedMarking { position: usize },

    #[error("unbound label `{0}`")]
    UnboundLabel(Label),

    #[error("incompatible kinds: {0} * {1}")]
    IncompatibleKinds(ValueKind, ValueKind),

    #[error("{0} is not a function")]
    NotAFunction(ValueKind),

    #[error("argument does not lie in the domain of {0}")]
    DomainMismatch(ValueKind),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
