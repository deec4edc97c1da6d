use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::formula::Formula;
use crate::semantics::closure::ClosureSet;
use crate::semantics::SemanticsError;
use crate::syntax::print;

/// A two-valued assignment over a closure set. Compound values are stored,
/// not recomputed, because weak negation is not truth-functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bivaluation {
    closure: Arc<ClosureSet>,
    values: Vec<bool>,
}

impl Bivaluation {
    pub fn new(closure: Arc<ClosureSet>, values: Vec<bool>) -> Self {
        assert_eq!(closure.len(), values.len(), "one value per closure member");
        Bivaluation { closure, values }
    }

    pub fn closure(&self) -> &ClosureSet {
        &self.closure
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn get(&self, f: &Formula) -> Option<bool> {
        self.closure.index_of(f).map(|i| self.values[i])
    }

    /// Returns a copy with the value of `f` replaced. Panics if `f` is not
    /// in the domain.
    pub fn with_value(&self, f: &Formula, value: bool) -> Self {
        let mut values = self.values.clone();
        values[self.closure.index_of(f).expect("formula in domain")] = value;
        Bivaluation {
            closure: Arc::clone(&self.closure),
            values,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Formula, bool)> {
        self.closure
            .members()
            .iter()
            .zip(self.values.iter().copied())
    }

    /// One `formula = 0|1` line per member, in closure order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (f, v) in self.iter() {
            out.push_str(&format!("{} = {}\n", print(f), u8::from(v)));
        }
        out
    }
}

impl fmt::Display for Bivaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Entry<'a>(&'a Formula, bool);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Entry", 2)?;
        st.serialize_field("formula", &print(self.0))?;
        st.serialize_field("value", &u8::from(self.1))?;
        st.end()
    }
}

impl Serialize for Bivaluation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.values.len()))?;
        for (f, v) in self.iter() {
            seq.serialize_element(&Entry(f, v))?;
        }
        seq.end()
    }
}

/// Reads the stored value of `f`.
pub fn evaluate(f: &Formula, v: &Bivaluation) -> Result<bool, SemanticsError> {
    v.get(f)
        .ok_or_else(|| SemanticsError::MissingFormula(print(f)))
}

/// The admissibility clause a bivaluation violates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseViolation {
    pub clause: &'static str,
    pub formula: String,
}

impl fmt::Display for ClauseViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {} fails at {}", self.clause, self.formula)
    }
}

/// Checks every admissibility clause whose formulas all lie in the domain of
/// `v`, directly on the formula shapes, and reports the first violation.
pub fn first_violation(v: &Bivaluation) -> Option<ClauseViolation> {
    let val = |f: &Formula| v.get(f);
    let fail = |clause: &'static str, f: &Formula| {
        Some(ClauseViolation {
            clause,
            formula: print(f),
        })
    };
    for (f, value) in v.iter() {
        match f {
            Formula::And(a, b) => {
                if let (Some(x), Some(y)) = (val(a), val(b)) {
                    if value != (x && y) {
                        return fail("(c-and)", f);
                    }
                }
            }
            Formula::Or(a, b) => {
                if let (Some(x), Some(y)) = (val(a), val(b)) {
                    if value != (x || y) {
                        return fail("(c-or)", f);
                    }
                }
            }
            Formula::Implies(a, b) => {
                if let (Some(x), Some(y)) = (val(a), val(b)) {
                    if value != (!x || y) {
                        return fail("(c-imp)", f);
                    }
                }
            }
            Formula::Not(a) => {
                if val(a) == Some(false) && !value {
                    return fail("(c-not)", f);
                }
                if let Formula::Not(inner) = a.as_ref() {
                    if value && val(inner) == Some(false) {
                        return fail("(c-notnot)", f);
                    }
                }
            }
            _ => {}
        }
        if let Some(b) = f.as_ball() {
            if value {
                let nb = b.clone().not();
                if val(b) == Some(true) && val(&nb) == Some(true) {
                    return fail("(c-ball')", f);
                }
                // (c-ball): B^o, A -> B, A -> ~B all true forces A false
                for (g, gv) in v.iter() {
                    if let Formula::Implies(a, b2) = g {
                        if gv && b2.as_ref() == b && val(a) == Some(true) {
                            let a_nb = (**a).clone().implies(nb.clone());
                            if val(&a_nb) == Some(true) {
                                return fail("(c-ball)", f);
                            }
                        }
                    }
                }
            } else if let Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) = b {
                let lb = crate::formula::ball((**l).clone());
                let rb = crate::formula::ball((**r).clone());
                if val(&lb) == Some(true) && val(&rb) == Some(true) {
                    return fail("(c-prop)", f);
                }
            }
        }
    }
    None
}

/// True iff every clause holds in `v`.
pub fn is_admissible(v: &Bivaluation) -> bool {
    first_violation(v).is_none()
}

/// True iff `v` is admissible, covers the formulas, gives every premise 1
/// and gives `f` 0.
pub fn verify_countermodel(f: &Formula, premises: &[Formula], v: &Bivaluation) -> bool {
    is_admissible(v) && premises.iter().all(|p| v.get(p) == Some(true)) && v.get(f) == Some(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn single_atom(values: [bool; 4]) -> Bivaluation {
        // A, ~A, A & ~A, ~(A & ~A)
        let cs = ClosureSet::build(&[parse("A").unwrap()], 1, 24).unwrap();
        Bivaluation::new(Arc::new(cs), values.to_vec())
    }

    #[test]
    fn evaluate_reads_stored_values() {
        let v = single_atom([true, true, true, false]);
        assert!(evaluate(&parse("A & ~A").unwrap(), &v).unwrap());
        assert!(!evaluate(&parse("~(A & ~A)").unwrap(), &v).unwrap());
        assert!(matches!(
            evaluate(&parse("B").unwrap(), &v),
            Err(SemanticsError::MissingFormula(_))
        ));
    }

    #[test]
    fn evaluate_implication_with_false_antecedent() {
        let cs = ClosureSet::build(&[parse("A -> B").unwrap()], 0, 24).unwrap();
        // order: A, B, A -> B
        let v = Bivaluation::new(Arc::new(cs), vec![false, false, true]);
        assert!(is_admissible(&v));
        assert!(evaluate(&parse("A -> B").unwrap(), &v).unwrap());
    }

    #[test]
    fn single_atom_admissibility_by_hand() {
        let admissible: Vec<[bool; 4]> = (0..16u8)
            .map(|bits| std::array::from_fn(|i| bits & (8 >> i) != 0))
            .filter(|vals: &[bool; 4]| is_admissible(&single_atom(*vals)))
            .collect();
        assert_eq!(
            admissible,
            vec![
                [false, true, false, true],
                [true, false, false, true],
                [true, true, true, false],
            ]
        );
    }

    #[test]
    fn countermodel_for_ball_is_verified() {
        let f = parse("~(A & ~A)").unwrap();
        let v = single_atom([true, true, true, false]);
        assert!(verify_countermodel(&f, &[], &v));
        let lem = parse("A | ~A").unwrap();
        let cs = ClosureSet::build(std::slice::from_ref(&lem), 1, 24).unwrap();
        let ones = Bivaluation::new(Arc::new(cs.clone()), vec![true; cs.len()]);
        assert!(!verify_countermodel(&lem, &[], &ones));
    }

    #[test]
    fn violations_are_named() {
        // A = 0 and ~A = 0 breaks (c-not)
        let v = single_atom([false, false, false, true]);
        assert_eq!(first_violation(&v).unwrap().clause, "(c-not)");
        assert!(!verify_countermodel(&parse("A").unwrap(), &[], &v));
        // A = ~A = 1 with A^o = 1 breaks (c-ball')
        let v = single_atom([true, true, true, true]);
        assert_eq!(first_violation(&v).unwrap().clause, "(c-ball')");
    }

    #[test]
    fn render_lines() {
        let v = single_atom([true, true, true, false]);
        assert_eq!(v.render(), "A = 1\n~A = 1\nA & ~A = 1\n~(A & ~A) = 0\n");
    }
}
