//! Axiom schemas and syntactic matching against them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{ball, Formula, Term, Var};
use crate::subst::{is_reletter_of, substitute};
use crate::syntax::{parse, print};

/// Identifies a postulate: propositional `1..=15` or quantificational
/// `Q1..=Q7`. Propositional 3, Q1 and Q4 are rules, not axiom schemas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SchemaId {
    Prop(u8),
    Quant(u8),
}

impl SchemaId {
    pub fn is_rule(self) -> bool {
        matches!(
            self,
            SchemaId::Prop(3) | SchemaId::Quant(1) | SchemaId::Quant(4)
        )
    }

    pub fn all_axioms() -> impl Iterator<Item = SchemaId> {
        PROPOSITIONAL
            .iter()
            .map(|(k, _)| SchemaId::Prop(*k))
            .chain([2, 3, 5, 6, 7].into_iter().map(SchemaId::Quant))
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaId::Prop(k) => write!(f, "{k}"),
            SchemaId::Quant(k) => write!(f, "Q{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown postulate `{0}`")]
pub struct UnknownSchema(pub String);

impl FromStr for SchemaId {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || UnknownSchema(s.to_string());
        let (quant, digits) = match s.strip_prefix(['q', 'Q']) {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let k: u8 = digits.parse().map_err(|_| bad())?;
        match (quant, k) {
            (false, 1..=15) => Ok(SchemaId::Prop(k)),
            (true, 1..=7) => Ok(SchemaId::Quant(k)),
            _ => Err(bad()),
        }
    }
}

const PROPOSITIONAL: [(u8, &str); 14] = [
    (1, "A -> (B -> A)"),
    (2, "(A -> B) -> ((A -> (B -> C)) -> (A -> C))"),
    (4, "A & B -> A"),
    (5, "A & B -> B"),
    (6, "A -> (B -> A & B)"),
    (7, "A -> A | B"),
    (8, "B -> A | B"),
    (9, "(A -> C) -> ((B -> C) -> (A | B -> C))"),
    (10, "A | ~A"),
    (11, "~~A -> A"),
    (12, "B^o -> ((A -> B) -> ((A -> ~B) -> ~A))"),
    (13, "A^o & B^o -> (A -> B)^o"),
    (14, "A^o & B^o -> (A & B)^o"),
    (15, "A^o & B^o -> (A | B)^o"),
];

const METAVARS: [&str; 3] = ["A", "B", "C"];

fn patterns() -> &'static [(u8, Formula)] {
    static CELL: OnceLock<Vec<(u8, Formula)>> = OnceLock::new();
    CELL.get_or_init(|| {
        PROPOSITIONAL
            .iter()
            .map(|(k, text)| (*k, parse(text).expect("schema text parses")))
            .collect()
    })
}

/// The propositional schema tree, with `A`, `B`, `C` as metavariables.
pub fn propositional_pattern(k: u8) -> Option<&'static Formula> {
    patterns().iter().find(|(j, _)| *j == k).map(|(_, f)| f)
}

fn metavar(f: &Formula) -> Option<&'static str> {
    match f {
        Formula::Atom { predicate, args } if args.is_empty() => {
            METAVARS.iter().copied().find(|m| m == predicate)
        }
        _ => None,
    }
}

/// Metavariable assignment witnessing a schema instance. Formula
/// metavariables are `A`, `B`, `C`; term metavariables are `x` (the
/// quantified variable) and `t`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SchemaBinding {
    pub formulas: BTreeMap<String, Formula>,
    pub terms: BTreeMap<String, Term>,
}

impl SchemaBinding {
    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty() && self.terms.is_empty()
    }

    pub fn formula(&self, key: &str) -> Result<&Formula, SchemaError> {
        self.formulas
            .get(key)
            .ok_or_else(|| SchemaError::Missing(key.to_string()))
    }

    pub fn term(&self, key: &str) -> Result<&Term, SchemaError> {
        self.terms
            .get(key)
            .ok_or_else(|| SchemaError::Missing(key.to_string()))
    }

    fn var(&self) -> Result<Var, SchemaError> {
        self.term("x")?
            .as_var()
            .cloned()
            .ok_or_else(|| SchemaError::NotAVariable(self.terms["x"].to_string()))
    }

    fn bind_formula(&mut self, key: &str, f: &Formula) -> bool {
        match self.formulas.get(key) {
            Some(existing) => existing == f,
            None => {
                self.formulas.insert(key.to_string(), f.clone());
                true
            }
        }
    }
}

impl fmt::Display for SchemaBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .formulas
            .iter()
            .map(|(k, v)| format!("{k}={}", print(v)))
            .chain(self.terms.iter().map(|(k, v)| format!("{k}={v}")))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("binding has no value for `{0}`")]
    Missing(String),
    #[error("`{0}` is bound to x but is not a variable")]
    NotAVariable(String),
    #[error("postulate {0} is a rule, not an axiom schema")]
    Rule(SchemaId),
    #[error(transparent)]
    Capture(#[from] crate::subst::SubstError),
    #[error("`{0}` and `{1}` are not relettering variants")]
    NotReletter(String, String),
}

/// Builds the instance of schema `id` under `binding`.
pub fn instantiate(id: SchemaId, binding: &SchemaBinding) -> Result<Formula, SchemaError> {
    match id {
        SchemaId::Prop(k) => {
            let pattern = propositional_pattern(k).ok_or(SchemaError::Rule(id))?;
            fill(pattern, binding)
        }
        SchemaId::Quant(2) => {
            let (a, x, t) = (binding.formula("A")?, binding.var()?, binding.term("t")?);
            Ok(Formula::forall(x.clone(), a.clone()).implies(substitute(a, &x, t)?))
        }
        SchemaId::Quant(3) => {
            let (a, x, t) = (binding.formula("A")?, binding.var()?, binding.term("t")?);
            Ok(substitute(a, &x, t)?.implies(Formula::exists(x, a.clone())))
        }
        SchemaId::Quant(5) | SchemaId::Quant(6) => {
            let (a, x) = (binding.formula("A")?, binding.var()?);
            let rhs = if id == SchemaId::Quant(5) {
                Formula::forall(x.clone(), a.clone())
            } else {
                Formula::exists(x.clone(), a.clone())
            };
            Ok(Formula::forall(x, ball(a.clone())).implies(ball(rhs)))
        }
        SchemaId::Quant(7) => {
            let (a, b) = (binding.formula("A")?, binding.formula("B")?);
            if !is_reletter_of(a, b) {
                return Err(SchemaError::NotReletter(print(a), print(b)));
            }
            Ok(a.clone().iff(b.clone()))
        }
        SchemaId::Quant(_) => Err(SchemaError::Rule(id)),
    }
}

fn fill(pattern: &Formula, binding: &SchemaBinding) -> Result<Formula, SchemaError> {
    if let Some(m) = metavar(pattern) {
        return binding.formula(m).cloned();
    }
    Ok(match pattern {
        Formula::Not(a) => fill(a, binding)?.not(),
        Formula::And(a, b) => fill(a, binding)?.and(fill(b, binding)?),
        Formula::Or(a, b) => fill(a, binding)?.or(fill(b, binding)?),
        Formula::Implies(a, b) => fill(a, binding)?.implies(fill(b, binding)?),
        _ => unreachable!("schema patterns are propositional over A, B, C"),
    })
}

fn unify(pattern: &Formula, f: &Formula, binding: &mut SchemaBinding) -> bool {
    if let Some(m) = metavar(pattern) {
        return binding.bind_formula(m, f);
    }
    match (pattern, f) {
        (Formula::Not(p), Formula::Not(g)) => unify(p, g, binding),
        (Formula::And(p1, p2), Formula::And(g1, g2))
        | (Formula::Or(p1, p2), Formula::Or(g1, g2))
        | (Formula::Implies(p1, p2), Formula::Implies(g1, g2)) => {
            unify(p1, g1, binding) && unify(p2, g2, binding)
        }
        _ => false,
    }
}

/// Finds the term `t` with `instance = matrix[x := t]`, walking both trees
/// in parallel. `Ok(None)` means `x` has no free occurrence.
fn instance_term(
    matrix: &Formula,
    x: &Var,
    instance: &Formula,
    shadowed: bool,
    found: &mut Option<Term>,
) -> bool {
    match (matrix, instance) {
        (
            Formula::Atom {
                predicate: p,
                args: ma,
            },
            Formula::Atom {
                predicate: q,
                args: ia,
            },
        ) => {
            p == q
                && ma.len() == ia.len()
                && ma.iter().zip(ia).all(|(m, i)| {
                    if !shadowed && m.as_var() == Some(x) {
                        match found {
                            Some(t) => t == i,
                            None => {
                                *found = Some(i.clone());
                                true
                            }
                        }
                    } else {
                        m == i
                    }
                })
        }
        (Formula::Not(a), Formula::Not(b)) => instance_term(a, x, b, shadowed, found),
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            instance_term(a1, x, b1, shadowed, found) && instance_term(a2, x, b2, shadowed, found)
        }
        (Formula::ForAll(y, a), Formula::ForAll(z, b))
        | (Formula::Exists(y, a), Formula::Exists(z, b)) => {
            y == z && instance_term(a, x, b, shadowed || y == x, found)
        }
        _ => false,
    }
}

fn quantifier_instance(matrix: &Formula, x: &Var, instance: &Formula) -> Option<SchemaBinding> {
    let mut found = None;
    if !instance_term(matrix, x, instance, false, &mut found) {
        return None;
    }
    let t = found.unwrap_or_else(|| Term::Variable(x.clone()));
    // re-derive through substitution, which also rejects capture
    if substitute(matrix, x, &t).ok().as_ref() != Some(instance) {
        return None;
    }
    let mut binding = SchemaBinding::default();
    binding.formulas.insert("A".into(), matrix.clone());
    binding.terms.insert("x".into(), Term::Variable(x.clone()));
    binding.terms.insert("t".into(), t);
    Some(binding)
}

/// Every schema `f` instantiates, with a witnessing binding.
pub fn match_axiom(f: &Formula) -> Vec<(SchemaId, SchemaBinding)> {
    let mut out = Vec::new();
    for (k, pattern) in patterns() {
        let mut binding = SchemaBinding::default();
        if unify(pattern, f, &mut binding) {
            out.push((SchemaId::Prop(*k), binding));
        }
    }
    match f {
        Formula::Implies(lhs, rhs) => {
            if let Formula::ForAll(x, matrix) = lhs.as_ref() {
                if let Some(b) = quantifier_instance(matrix, x, rhs) {
                    out.push((SchemaId::Quant(2), b));
                }
                if let Some(a) = matrix.as_ball() {
                    let mut binding = SchemaBinding::default();
                    binding.formulas.insert("A".into(), a.clone());
                    binding.terms.insert("x".into(), Term::Variable(x.clone()));
                    let forall = Formula::forall(x.clone(), a.clone());
                    let exists = Formula::exists(x.clone(), a.clone());
                    if **rhs == ball(forall) {
                        out.push((SchemaId::Quant(5), binding.clone()));
                    }
                    if **rhs == ball(exists) {
                        out.push((SchemaId::Quant(6), binding));
                    }
                }
            }
            if let Formula::Exists(x, matrix) = rhs.as_ref() {
                if let Some(b) = quantifier_instance(matrix, x, lhs) {
                    out.push((SchemaId::Quant(3), b));
                }
            }
        }
        Formula::And(l, r) => {
            if let (Formula::Implies(a, b), Formula::Implies(b2, a2)) = (l.as_ref(), r.as_ref()) {
                if a == a2 && b == b2 && is_reletter_of(a, b) {
                    let mut binding = SchemaBinding::default();
                    binding.formulas.insert("A".into(), (**a).clone());
                    binding.formulas.insert("B".into(), (**b).clone());
                    out.push((SchemaId::Quant(7), binding));
                }
            }
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn ids(f: &str) -> Vec<SchemaId> {
        match_axiom(&p(f)).into_iter().map(|(k, _)| k).collect()
    }

    #[test]
    fn matches_named_schemas() {
        assert_eq!(ids("A | ~A"), vec![SchemaId::Prop(10)]);
        assert_eq!(ids("~~A -> A"), vec![SchemaId::Prop(11)]);
        assert_eq!(ids("(p^o & q^o) -> (p & q)^o"), vec![SchemaId::Prop(14)]);
        assert!(ids("A -> A").is_empty());
        assert!(ids("A -> ~~A").is_empty());
    }

    #[test]
    fn one_formula_can_match_several_schemas() {
        // A -> (A -> A) is schema 1 with B := A
        let found = ids("p -> (p -> p)");
        assert_eq!(found, vec![SchemaId::Prop(1)]);
        // (p & p) -> p is both 4 and 5
        assert_eq!(
            ids("p & p -> p"),
            vec![SchemaId::Prop(4), SchemaId::Prop(5)]
        );
    }

    #[test]
    fn binding_reproduces_instance() {
        let f = p("(~q)^o -> ((p -> ~q) -> ((p -> ~~q) -> ~p))");
        let matches = match_axiom(&f);
        assert_eq!(matches.len(), 1);
        let (id, binding) = &matches[0];
        assert_eq!(*id, SchemaId::Prop(12));
        assert_eq!(binding.formulas["B"], p("~q"));
        assert_eq!(instantiate(*id, binding).unwrap(), f);
    }

    #[test]
    fn quantifier_instances() {
        let f = p("(forall x. x in S) -> s1 in S");
        let m = match_axiom(&f);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].0, SchemaId::Quant(2));
        assert_eq!(m[0].1.terms["t"], Term::from_identifier("s1").unwrap());
        assert_eq!(instantiate(SchemaId::Quant(2), &m[0].1).unwrap(), f);

        assert_eq!(ids("P(c) -> exists y. P(y)"), vec![SchemaId::Quant(3)]);
        // inconsistent witness
        assert!(ids("(forall x. R(x, x)) -> R(a, b)").is_empty());
        // capture: y would be bound at the substituted position
        assert!(ids("(forall x. exists y. R(x, y)) -> exists y. R(y, y)").is_empty());
        // vacuous: t is free, defaults to x
        assert_eq!(ids("(forall x. A) -> A"), vec![SchemaId::Quant(2)]);
    }

    #[test]
    fn ball_quantifier_schemas() {
        let q5 = instantiate(
            SchemaId::Quant(5),
            &SchemaBinding {
                formulas: [("A".to_string(), p("P(x)"))].into(),
                terms: [("x".to_string(), Term::from_identifier("x").unwrap())].into(),
            },
        )
        .unwrap();
        assert_eq!(q5, p("(forall x. P(x)^o) -> (forall x. P(x))^o"));
        assert_eq!(ids(&print(&q5)), vec![SchemaId::Quant(5)]);
        assert_eq!(
            ids("(forall x. P(x)^o) -> (exists x. P(x))^o"),
            vec![SchemaId::Quant(6)]
        );
    }

    #[test]
    fn relettering_axiom() {
        assert_eq!(
            ids("(forall x. x in S) <-> (forall y. y in S)"),
            vec![SchemaId::Quant(7)]
        );
        assert!(ids("(forall x. x in S) <-> (forall y. x in S)").is_empty());
    }

    #[test]
    fn schema_ids_parse() {
        assert_eq!("10".parse::<SchemaId>().unwrap(), SchemaId::Prop(10));
        assert_eq!("q2".parse::<SchemaId>().unwrap(), SchemaId::Quant(2));
        assert_eq!("Q7".parse::<SchemaId>().unwrap(), SchemaId::Quant(7));
        assert!("16".parse::<SchemaId>().is_err());
        assert!("q8".parse::<SchemaId>().is_err());
        assert!(SchemaId::Prop(3).is_rule());
        assert!(SchemaId::Quant(4).is_rule());
        assert_eq!(SchemaId::all_axioms().count(), 19);
    }

    #[test]
    fn missing_binding_is_an_error() {
        let b = SchemaBinding {
            formulas: [("A".to_string(), p("p"))].into(),
            terms: BTreeMap::new(),
        };
        assert_eq!(
            instantiate(SchemaId::Prop(1), &b),
            Err(SchemaError::Missing("B".into()))
        );
        assert_eq!(
            instantiate(SchemaId::Prop(3), &b),
            Err(SchemaError::Rule(SchemaId::Prop(3)))
        );
    }
}
