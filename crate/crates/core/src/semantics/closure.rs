use std::collections::{BTreeSet, HashMap};

use crate::formula::Formula;
use crate::semantics::SemanticsError;
use crate::syntax::print;

/// Finite carrier for valuation enumeration.
///
/// Level 0 is every subformula of the inputs. Each further level adds
/// `~p`, `p & ~p` and `~(p & ~p)` for every member `p` of the previous
/// level. Members are ordered by size, then by printed form, so every
/// member comes after its subformulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureSet {
    members: Vec<Formula>,
    index: HashMap<Formula, usize>,
}

impl ClosureSet {
    /// Builds the closure of `formulas` to `depth`, refusing once the set
    /// grows beyond `cap` members.
    pub fn build(formulas: &[Formula], depth: usize, cap: usize) -> Result<Self, SemanticsError> {
        if let Some(f) = formulas.iter().find(|f| f.has_quantifier()) {
            return Err(SemanticsError::QuantifierPresent(print(f)));
        }
        let mut set = BTreeSet::new();
        for f in formulas {
            f.collect_subformulas(&mut set);
        }
        let check = |n: usize| {
            if n > cap {
                Err(SemanticsError::ClosureTooLarge { size: n, cap })
            } else {
                Ok(())
            }
        };
        check(set.len())?;
        let mut frontier: Vec<Formula> = set.iter().cloned().collect();
        for _ in 0..depth {
            let mut next = Vec::new();
            for psi in &frontier {
                let neg = psi.clone().not();
                let contradiction = psi.clone().and(neg.clone());
                let ball = contradiction.clone().not();
                for g in [neg, contradiction, ball] {
                    if set.insert(g.clone()) {
                        next.push(g);
                    }
                }
                check(set.len())?;
            }
            frontier.extend(next);
        }
        Ok(Self::from_members(set))
    }

    fn from_members(set: BTreeSet<Formula>) -> Self {
        let mut keyed: Vec<(usize, String, Formula)> =
            set.into_iter().map(|f| (f.size(), print(&f), f)).collect();
        keyed.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let members: Vec<Formula> = keyed.into_iter().map(|(_, _, f)| f).collect();
        let index = members
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        ClosureSet { members, index }
    }

    pub fn members(&self) -> &[Formula] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.index.contains_key(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn single_atom_depth_one() {
        let cs = ClosureSet::build(&[parse("A").unwrap()], 1, 24).unwrap();
        let printed: Vec<String> = cs.members().iter().map(print).collect();
        assert_eq!(printed, ["A", "~A", "A & ~A", "~(A & ~A)"]);
    }

    #[test]
    fn depth_zero_is_subformulas() {
        let f = parse("A | ~A").unwrap();
        let cs = ClosureSet::build(std::slice::from_ref(&f), 0, 24).unwrap();
        assert_eq!(cs.len(), 3);
        assert_eq!(cs.index_of(&f), Some(2));
    }

    #[test]
    fn members_follow_their_subformulas() {
        let f = parse("(A -> ~B) | ~(A & B)").unwrap();
        let cs = ClosureSet::build(&[f], 1, 200).unwrap();
        for (i, m) in cs.members().iter().enumerate() {
            for s in m.subformulas() {
                assert!(cs.index_of(&s).unwrap() <= i);
            }
        }
    }

    #[test]
    fn cap_and_quantifier_errors() {
        let f = parse("(A -> B) -> (C -> D)").unwrap();
        assert!(matches!(
            ClosureSet::build(&[f], 1, 10),
            Err(SemanticsError::ClosureTooLarge { cap: 10, .. })
        ));
        let q = parse("forall x. P(x)").unwrap();
        assert!(matches!(
            ClosureSet::build(&[q], 1, 24),
            Err(SemanticsError::QuantifierPresent(_))
        ));
    }

    #[test]
    fn empty_input() {
        let cs = ClosureSet::build(&[], 1, 24).unwrap();
        assert!(cs.is_empty());
    }
}
