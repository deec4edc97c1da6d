use crate::formula::Formula;
use crate::semantics::SemanticsError;
use crate::syntax::print;

/// Two-valued truth-table validity with truth-functional negation.
pub fn classical_valid(f: &Formula) -> Result<bool, SemanticsError> {
    if f.has_quantifier() {
        return Err(SemanticsError::QuantifierPresent(print(f)));
    }
    let atoms = f.atoms();
    let n = atoms.len();
    assert!(n < 32, "truth table over {n} atoms");
    Ok((0u32..1 << n).all(|row| {
        let lookup = |a: &Formula| {
            let i = atoms.iter().position(|x| *x == a).unwrap();
            row & (1 << i) != 0
        };
        eval(f, &lookup)
    }))
}

fn eval(f: &Formula, lookup: &dyn Fn(&Formula) -> bool) -> bool {
    match f {
        Formula::Atom { .. } => lookup(f),
        Formula::Not(a) => !eval(a, lookup),
        Formula::And(a, b) => eval(a, lookup) && eval(b, lookup),
        Formula::Or(a, b) => eval(a, lookup) || eval(b, lookup),
        Formula::Implies(a, b) => !eval(a, lookup) || eval(b, lookup),
        Formula::ForAll(..) | Formula::Exists(..) => unreachable!("checked above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn examples() {
        assert!(classical_valid(&parse("A | ~A").unwrap()).unwrap());
        assert!(classical_valid(&parse("~(A & ~A)").unwrap()).unwrap());
        assert!(!classical_valid(&parse("A -> B").unwrap()).unwrap());
        assert!(classical_valid(&parse("A -> ~~A").unwrap()).unwrap());
        assert!(classical_valid(&parse("K(S, s1) | ~K(S, s1)").unwrap()).unwrap());
        assert!(classical_valid(&parse("forall x. P(x)").unwrap()).is_err());
    }
}
