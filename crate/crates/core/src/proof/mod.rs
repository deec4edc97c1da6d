//! Hilbert-style proof checking for the propositional postulates 1-15 and
//! the quantificational postulates Q1-Q7.
//!
//! Postulate 3 is modus ponens and Q1/Q4 are the generalisation rules; the
//! rest are axiom schemas matched syntactically. Relettering (Q7) is
//! available both as the axiom `A <-> B` and as a rule on an earlier line.

mod file;
mod kernel;
mod schema;

pub use file::{parse_proof, ProofFileError};
pub use kernel::{
    check_line, check_proof, CheckReport, Diagnostic, Failure, Justification, Proof, ProofLine,
};
pub use schema::{
    instantiate, match_axiom, propositional_pattern, SchemaBinding, SchemaError, SchemaId,
    UnknownSchema,
};
