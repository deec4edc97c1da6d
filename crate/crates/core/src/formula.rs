//! Abstract syntax of the formula language.
//!
//! Formulas are built from predicate atoms with the primitive connectives
//! `~`, `&`, `|`, `->` and the two quantifiers. The derived forms (the
//! well-behavedness operator, strong negation and the biconditional) exist
//! only as constructors that expand into primitive trees.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Predicate name used for membership atoms `t in u`.
pub const MEMBERSHIP: &str = "in";
/// Predicate name used for identity atoms `t = u`.
pub const IDENTITY: &str = "=";

/// An individual variable: a lowercase letter from `s` to `z`, optionally
/// followed by digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Result<Self, SyntaxClassError> {
        let name = name.into();
        if is_variable_name(&name) {
            Ok(Var(name))
        } else {
            Err(SyntaxClassError::NotAVariable(name))
        }
    }

    /// Builds a variable without checking its lexical class. Used for the
    /// canonical names produced by relettering, which deliberately lie
    /// outside the concrete grammar.
    pub(crate) fn unchecked(name: String) -> Self {
        Var(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxClassError {
    #[error("`{0}` is not a variable (variables are one of s..z followed by optional digits)")]
    NotAVariable(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
}

/// True for names in the variable class: one letter in `s..=z` followed by
/// digits only.
pub fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if ('s'..='z').contains(&c) => chars.all(|c| c.is_ascii_digit()),
        _ => false,
    }
}

/// True for names the lexer accepts as identifiers (letters, digits and
/// underscores, not starting with a digit) that are not keywords.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !matches!(name, "forall" | "exists" | "in")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum Term {
    Variable(Var),
    Constant(String),
}

impl Term {
    /// Classifies an identifier by its lexical class, the same way the
    /// parser does.
    pub fn from_identifier(name: &str) -> Result<Self, SyntaxClassError> {
        if !is_identifier(name) {
            return Err(SyntaxClassError::BadIdentifier(name.to_string()));
        }
        Ok(if is_variable_name(name) {
            Term::Variable(Var(name.to_string()))
        } else {
            Term::Constant(name.to_string())
        })
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Variable(v) => v.name(),
            Term::Constant(c) => c,
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Variable(v) => Some(v),
            Term::Constant(_) => None,
        }
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Variable(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Atom { predicate: String, args: Vec<Term> },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    /// A 0-ary predicate, i.e. a propositional letter.
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Atom {
            predicate: name.into(),
            args: Vec::new(),
        }
    }

    pub fn atom(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn member(element: Term, set: Term) -> Self {
        Formula::atom(MEMBERSHIP, vec![element, set])
    }

    pub fn equals(lhs: Term, rhs: Term) -> Self {
        Formula::atom(IDENTITY, vec![lhs, rhs])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn forall(var: Var, body: Formula) -> Self {
        Formula::ForAll(var, Box::new(body))
    }

    pub fn exists(var: Var, body: Formula) -> Self {
        Formula::Exists(var, Box::new(body))
    }

    /// `(A -> B) & (B -> A)`.
    pub fn iff(self, rhs: Formula) -> Self {
        self.clone().implies(rhs.clone()).and(rhs.implies(self))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom { .. })
    }

    /// Number of nodes in the tree. Atoms count as one node regardless of
    /// their arguments.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom { .. } => 1,
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom { .. } => 0,
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Atom { .. } => false,
            Formula::ForAll(..) | Formula::Exists(..) => true,
            Formula::Not(a) => a.has_quantifier(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_quantifier() || b.has_quantifier()
            }
        }
    }

    pub fn has_negation(&self) -> bool {
        match self {
            Formula::Atom { .. } => false,
            Formula::Not(_) => true,
            Formula::ForAll(_, a) | Formula::Exists(_, a) => a.has_negation(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.has_negation() || b.has_negation()
            }
        }
    }

    /// Variables with at least one free occurrence.
    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom { args, .. } => {
                for v in args.iter().filter_map(Term::as_var) {
                    if !bound.contains(&v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::ForAll(x, a) | Formula::Exists(x, a) => {
                bound.push(x);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_free(&self, var: &Var) -> bool {
        match self {
            Formula::Atom { args, .. } => args.iter().any(|t| t.as_var() == Some(var)),
            Formula::Not(a) => a.is_free(var),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_free(var) || b.is_free(var)
            }
            Formula::ForAll(x, a) | Formula::Exists(x, a) => x != var && a.is_free(var),
        }
    }

    /// All subformulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    pub(crate) fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if out.contains(self) {
            return;
        }
        match self {
            Formula::Atom { .. } => {}
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => {
                a.collect_subformulas(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
        }
        out.insert(self.clone());
    }

    /// Atoms occurring in the formula, in order of first occurrence.
    pub fn atoms(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Atom { .. } => {
                if !out.contains(&self) {
                    out.push(self);
                }
            }
            Formula::Not(a) | Formula::ForAll(_, a) | Formula::Exists(_, a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Predicate names used anywhere in the formula.
    pub fn predicates(&self) -> BTreeSet<&str> {
        self.atoms()
            .into_iter()
            .filter_map(|a| match a {
                Formula::Atom { predicate, .. } => Some(predicate.as_str()),
                _ => None,
            })
            .collect()
    }

    /// If the formula has the shape `~(B & ~B)`, returns `B`.
    pub fn as_ball(&self) -> Option<&Formula> {
        if let Formula::Not(inner) = self {
            if let Formula::And(b, nb) = inner.as_ref() {
                if let Formula::Not(b2) = nb.as_ref() {
                    if b == b2 {
                        return Some(b);
                    }
                }
            }
        }
        None
    }

    /// If the formula has the shape `~B & B^o`, returns `B`.
    pub fn as_strong_neg(&self) -> Option<&Formula> {
        if let Formula::And(nb, ball) = self {
            if let (Formula::Not(b), Some(b2)) = (nb.as_ref(), ball.as_ball()) {
                if b.as_ref() == b2 {
                    return Some(b2);
                }
            }
        }
        None
    }
}

/// The well-behavedness operator: `f^o` is `~(f & ~f)`.
pub fn ball(f: Formula) -> Formula {
    f.clone().and(f.not()).not()
}

/// Strong negation: `~*f` is `~f & f^o`.
pub fn strong_neg(f: Formula) -> Formula {
    f.clone().not().and(ball(f))
}

/// Replaces every weak negation by strong negation, structurally. The weak
/// negations produced by expanding `~*` are not translated again.
pub fn star_translate(f: &Formula) -> Formula {
    match f {
        Formula::Atom { .. } => f.clone(),
        Formula::Not(a) => strong_neg(star_translate(a)),
        Formula::And(a, b) => star_translate(a).and(star_translate(b)),
        Formula::Or(a, b) => star_translate(a).or(star_translate(b)),
        Formula::Implies(a, b) => star_translate(a).implies(star_translate(b)),
        Formula::ForAll(x, a) => Formula::forall(x.clone(), star_translate(a)),
        Formula::Exists(x, a) => Formula::exists(x.clone(), star_translate(a)),
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn variable_class() {
        assert!(is_variable_name("x"));
        assert!(is_variable_name("s1"));
        assert!(is_variable_name("z42"));
        assert!(!is_variable_name("a"));
        assert!(!is_variable_name("up_x"));
        assert!(!is_variable_name("xy"));
        assert!(!is_variable_name(""));
        assert!(Var::new("S").is_err());
        assert_eq!(
            Term::from_identifier("S").unwrap(),
            Term::Constant("S".into())
        );
        assert!(matches!(
            Term::from_identifier("y").unwrap(),
            Term::Variable(_)
        ));
        assert!(Term::from_identifier("forall").is_err());
    }

    #[test]
    fn ball_expands() {
        let a = Formula::prop("A");
        assert_eq!(ball(a.clone()), a.clone().and(a.clone().not()).not());
        let na = a.clone().not();
        assert_eq!(ball(na.clone()), na.clone().and(na.not()).not());
        let ab = a.clone().and(Formula::prop("B"));
        assert_eq!(ball(ab.clone()), ab.clone().and(ab.not()).not());
        assert_eq!(ball(a.clone()).as_ball(), Some(&a));
    }

    #[test]
    fn strong_neg_expands() {
        let a = Formula::prop("A");
        assert_eq!(strong_neg(a.clone()), a.clone().not().and(ball(a.clone())));
        assert_eq!(strong_neg(a.clone()), p("~A & ~(A & ~A)"));
        assert_eq!(strong_neg(a.clone().not()), p("~~A & ~(~A & ~~A)"));
        let imp = p("A -> B");
        assert_eq!(strong_neg(imp), p("~(A -> B) & ~((A -> B) & ~(A -> B))"));
        assert_eq!(strong_neg(a.clone()).as_strong_neg(), Some(&a));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star_translate(&p("A | ~A")), p("A | (~A & ~(A & ~A))"));
        assert_eq!(star_translate(&p("A")), p("A"));
        let a = Formula::prop("A");
        assert_eq!(star_translate(&p("~~A")), strong_neg(strong_neg(a.clone())));
        // hand expansion of the double recursion
        let inner = p("~A & ~(A & ~A)");
        let expected = inner
            .clone()
            .not()
            .and(inner.clone().and(inner.not()).not());
        assert_eq!(star_translate(&p("~~A")), expected);
        assert_eq!(
            star_translate(&p("forall x. ~P(x)")),
            p("forall x. (~*P(x))")
        );
    }

    #[test]
    fn free_vars_and_subformulas() {
        assert!(p("forall x. x in S").free_vars().is_empty());
        let xy: BTreeSet<Var> = [Var::new("x").unwrap(), Var::new("y").unwrap()].into();
        assert_eq!(p("x = y").free_vars(), xy);
        assert_eq!(
            p("forall x. x in y").free_vars(),
            [Var::new("y").unwrap()].into()
        );
        let subs = p("A | ~A").subformulas();
        let expected: BTreeSet<Formula> = [p("A"), p("~A"), p("A | ~A")].into();
        assert_eq!(subs, expected);
    }

    #[test]
    fn size_and_depth() {
        let f = p("~(A & B) -> C");
        assert_eq!(f.size(), 6);
        assert_eq!(f.depth(), 3);
        assert!(!f.has_quantifier());
        assert!(p("A & exists x. P(x)").has_quantifier());
    }
}
