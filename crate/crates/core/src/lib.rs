//! Dirac bra-ket terms over `C^n` where a ket may be read either as a vector
//! or as the map `a -> a * v` from scalars to vectors.
//!
//! The crate parses terms ([`parser`]), infers the kind of their values and
//! evaluates them ([`eval`]), and carries an independent closure-based
//! interpreter ([`oracle`]) used to cross-check the evaluator.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod oracle;
pub mod parser;
pub mod term;
pub mod workspace;

pub use error::{Error, Result};
pub use eval::{
    apply, eval, infer_kind, normal_form, resolve_markings, star, Argument, Domain, Operator,
    Strategy, Value, ValueKind,
};
pub use parser::{parse_term, render, ParseError, ParseErrorKind, SourceSpan};
pub use term::{
    all_parenthesizations, DiracChar, Marking, Term, TermView, DEFAULT_PARENTHESIZATION_CAP,
};
pub use workspace::{inner_product, scale, Label, Scalar, Tolerance, Vector, Workspace};
