//! Paraconsistent logic toolkit in the style of da Costa's C-systems.
//!
//! * [`formula`] and [`syntax`]: the formula language, derived connectives,
//!   the star translation, and concrete syntax.
//! * [`subst`]: capture-checked substitution and relettering.
//! * [`proof`]: a Hilbert-style proof checker.
//! * [`semantics`]: the bivaluation decision procedure with countermodels.
//! * [`superposition`]: superposition systems and non-explosive entailment
//!   over contradictory knowledge bases.

pub mod formula;
pub mod proof;
pub mod scenario;
pub mod selftest;
pub mod semantics;
pub mod subst;
pub mod superposition;
pub mod syntax;

pub use formula::{ball, star_translate, strong_neg, Formula, Term, Var};
pub use semantics::{decide, DecideOptions, Verdict};
pub use syntax::{parse, print, ParseError};
