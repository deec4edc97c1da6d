//! Bivaluation semantics for the propositional fragment.
//!
//! A bivaluation assigns 0 or 1 to each member of a finite closure set.
//! Conjunction, disjunction and implication are classical; weak negation
//! is constrained only by the admissibility clauses:
//!
//! * `(c-not)` if v(A) = 0 then v(~A) = 1
//! * `(c-notnot)` if v(~~A) = 1 then v(A) = 1
//! * `(c-ball)` if v(B^o) = v(A -> B) = v(A -> ~B) = 1 then v(A) = 0
//! * `(c-ball')` if v(B^o) = 1 then not both v(B) = 1 and v(~B) = 1
//! * `(c-prop)` if v(A^o) = v(B^o) = 1 then v((A # B)^o) = 1
//!
//! A clause is enforced whenever all of its formulas are in the closure.

mod classical;
mod closure;
mod search;
mod valuation;

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;

pub use classical::classical_valid;
pub use closure::ClosureSet;
pub use search::{enumerate_valuations, Valuations};
pub use valuation::{
    evaluate, first_violation, is_admissible, verify_countermodel, Bivaluation, ClauseViolation,
};

use search::{ClauseDb, Search};

pub const DEFAULT_DEPTH: usize = 1;
pub const DEFAULT_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("`{0}` contains a quantifier; quantified claims go through the proof checker")]
    QuantifierPresent(String),
    #[error("closure set has {size} formulas, above the cap of {cap}")]
    ClosureTooLarge { size: usize, cap: usize },
    #[error("`{0}` is not in the domain of the valuation")]
    MissingFormula(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideOptions {
    /// Closure depth.
    pub depth: usize,
    /// Largest closure set the procedure will enumerate.
    pub cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            depth: DEFAULT_DEPTH,
            cap: DEFAULT_CAP,
        }
    }
}

impl DecideOptions {
    pub fn with_cap(cap: usize) -> Self {
        DecideOptions {
            cap,
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "countermodel")]
pub enum Verdict {
    Valid,
    Invalid(Bivaluation),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }

    pub fn countermodel(&self) -> Option<&Bivaluation> {
        match self {
            Verdict::Valid => None,
            Verdict::Invalid(v) => Some(v),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Valid => "Valid",
            Verdict::Invalid(_) => "Invalid",
        }
    }
}

struct Problem {
    closure: Arc<ClosureSet>,
    db: Arc<ClauseDb>,
    goals: Vec<(usize, bool)>,
}

impl Problem {
    fn new(f: &Formula, premises: &[Formula], opts: DecideOptions) -> Result<Self, SemanticsError> {
        let mut all = premises.to_vec();
        all.push(f.clone());
        let closure = Arc::new(ClosureSet::build(&all, opts.depth, opts.cap)?);
        let db = Arc::new(ClauseDb::compile(&closure));
        let mut goals: Vec<(usize, bool)> = premises
            .iter()
            .map(|p| (closure.index_of(p).unwrap(), true))
            .collect();
        goals.push((closure.index_of(f).unwrap(), false));
        Ok(Problem { closure, db, goals })
    }

    fn verdict(
        &self,
        f: &Formula,
        premises: &[Formula],
        found: Option<Vec<Option<bool>>>,
    ) -> Verdict {
        match found {
            None => Verdict::Valid,
            Some(assignment) => {
                let values = assignment.into_iter().map(|v| v.unwrap()).collect();
                let v = Bivaluation::new(Arc::clone(&self.closure), values);
                assert!(
                    verify_countermodel(f, premises, &v),
                    "search produced an unverified countermodel"
                );
                Verdict::Invalid(v)
            }
        }
    }
}

/// Valid iff every admissible valuation giving 1 to all premises gives 1 to
/// `f`; otherwise Invalid with the first countermodel in enumeration order.
pub fn decide(
    f: &Formula,
    premises: &[Formula],
    opts: DecideOptions,
) -> Result<Verdict, SemanticsError> {
    let problem = Problem::new(f, premises, opts)?;
    let mut search = Search::new(
        Arc::clone(&problem.db),
        &problem.goals,
        problem.closure.len(),
    );
    let found = search.next_assignment();
    Ok(problem.verdict(f, premises, found))
}

/// Same result as [`decide`], with the search split across rayon workers by
/// branch prefix. The prefixes are produced in enumeration order and the
/// first one that has a countermodel wins, so the reported countermodel is
/// the same one the sequential search finds.
pub fn decide_parallel(
    f: &Formula,
    premises: &[Formula],
    opts: DecideOptions,
    prefix_len: usize,
) -> Result<Verdict, SemanticsError> {
    let problem = Problem::new(f, premises, opts)?;
    let n = problem.closure.len();
    let mut splitter = Search::new(Arc::clone(&problem.db), &problem.goals, prefix_len.min(n));
    let mut prefixes = Vec::new();
    while let Some(prefix) = splitter.next_assignment() {
        prefixes.push(prefix);
    }
    let found = prefixes.par_iter().find_map_first(|prefix| {
        let mut assumptions = problem.goals.clone();
        assumptions.extend(
            prefix
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|b| (i, b))),
        );
        Search::new(Arc::clone(&problem.db), &assumptions, n).next_assignment()
    });
    Ok(problem.verdict(f, premises, found))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn decide_text(s: &str) -> Verdict {
        decide(&p(s), &[], DecideOptions::default()).unwrap()
    }

    #[test]
    fn theorem_items_valid() {
        for text in ["A | ~A", "~~A -> A", "(A & ~*A) -> B"] {
            assert!(decide_text(text).is_valid(), "{text}");
        }
    }

    #[test]
    fn non_theorem_items_invalid() {
        for text in ["(A & ~A) -> B", "A -> ~~A", "~(A & ~A)"] {
            let f = p(text);
            let v = decide_text(text);
            let cm = v
                .countermodel()
                .unwrap_or_else(|| panic!("{text} should be invalid"));
            assert!(verify_countermodel(&f, &[], cm));
        }
    }

    #[test]
    fn countermodels_have_the_expected_shape() {
        let a = p("A");
        let na = p("~A");
        let cm = decide_text("~(A & ~A)");
        let cm = cm.countermodel().unwrap();
        assert_eq!(cm.get(&a), Some(true));
        assert_eq!(cm.get(&na), Some(true));

        let cm = decide_text("(A & ~A) -> B");
        let cm = cm.countermodel().unwrap();
        assert_eq!(cm.get(&a), Some(true));
        assert_eq!(cm.get(&na), Some(true));
        assert_eq!(cm.get(&p("B")), Some(false));
    }

    #[test]
    fn premises_are_respected() {
        let premises = [p("A"), p("A -> B")];
        assert!(decide(&p("B"), &premises, DecideOptions::default())
            .unwrap()
            .is_valid());
        let v = decide(&p("C"), &premises, DecideOptions::default()).unwrap();
        let cm = v.countermodel().unwrap();
        assert!(verify_countermodel(&p("C"), &premises, cm));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            decide(&p("forall x. P(x)"), &[], DecideOptions::default()),
            Err(SemanticsError::QuantifierPresent(_))
        ));
        assert!(matches!(
            decide(
                &p("((A -> B) -> C) -> ((C -> A) -> (B | ~C))"),
                &[],
                DecideOptions::with_cap(24)
            ),
            Err(SemanticsError::ClosureTooLarge { cap: 24, .. })
        ));
    }

    #[test]
    fn parallel_agrees_with_sequential() {
        let opts = DecideOptions::with_cap(200);
        for text in [
            "A | ~A",
            "(A & ~A) -> B",
            "~(A & ~A)",
            "(A -> B) -> (~B -> ~A)",
            "(A^o & B^o) -> ((A -> B) -> (~B -> ~A))",
            "~~(A & B) -> ~~A",
        ] {
            let f = p(text);
            let seq = decide(&f, &[], opts).unwrap();
            for k in [0, 1, 3, 6] {
                assert_eq!(
                    decide_parallel(&f, &[], opts, k).unwrap(),
                    seq,
                    "{text} k={k}"
                );
            }
        }
    }
}
