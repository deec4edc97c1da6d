//! Capture-checked substitution and bound-variable relettering.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::formula::{Formula, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("substituting {term} for {var} is captured by the binder `{binder}`")]
    Capture { var: Var, term: Term, binder: Var },
}

/// Replaces every free occurrence of `var` in `f` by `term`, failing if a
/// free occurrence sits under a binder of `term`.
pub fn substitute(f: &Formula, var: &Var, term: &Term) -> Result<Formula, SubstError> {
    let mut binders = Vec::new();
    subst_rec(f, var, term, &mut binders)
}

fn subst_rec<'a>(
    f: &'a Formula,
    var: &Var,
    term: &Term,
    binders: &mut Vec<&'a Var>,
) -> Result<Formula, SubstError> {
    Ok(match f {
        Formula::Atom { predicate, args } => {
            let mut out = Vec::with_capacity(args.len());
            for t in args {
                if t.as_var() == Some(var) {
                    if let Some(captured) = term.as_var().filter(|y| binders.contains(y)) {
                        return Err(SubstError::Capture {
                            var: var.clone(),
                            term: term.clone(),
                            binder: captured.clone(),
                        });
                    }
                    out.push(term.clone());
                } else {
                    out.push(t.clone());
                }
            }
            Formula::atom(predicate.clone(), out)
        }
        Formula::Not(a) => subst_rec(a, var, term, binders)?.not(),
        Formula::And(a, b) => {
            subst_rec(a, var, term, binders)?.and(subst_rec(b, var, term, binders)?)
        }
        Formula::Or(a, b) => {
            subst_rec(a, var, term, binders)?.or(subst_rec(b, var, term, binders)?)
        }
        Formula::Implies(a, b) => {
            subst_rec(a, var, term, binders)?.implies(subst_rec(b, var, term, binders)?)
        }
        Formula::ForAll(x, _) | Formula::Exists(x, _) if x == var => f.clone(),
        Formula::ForAll(x, a) => {
            binders.push(x);
            let body = subst_rec(a, var, term, binders);
            binders.pop();
            Formula::forall(x.clone(), body?)
        }
        Formula::Exists(x, a) => {
            binders.push(x);
            let body = subst_rec(a, var, term, binders);
            binders.pop();
            Formula::exists(x.clone(), body?)
        }
    })
}

/// True when `term` can replace the free occurrences of `var` in `f`
/// without capture.
pub fn is_free_for(f: &Formula, var: &Var, term: &Term) -> bool {
    substitute(f, var, term).is_ok()
}

/// Canonical representative of the relettering class of `f`: void
/// quantifiers are dropped and the remaining binders are renamed `x₀`, `x₁`,
/// ... in left-to-right order. The subscripted names are outside the
/// concrete grammar, so they never collide with a free variable.
pub fn canonical_form(f: &Formula) -> Formula {
    let mut counter = 0;
    canon(f, &mut HashMap::new(), &mut counter)
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    let mut s: Vec<char> = n
        .to_string()
        .chars()
        .map(|d| DIGITS[d.to_digit(10).unwrap() as usize])
        .collect();
    s.insert(0, 'x');
    s.into_iter().collect()
}

fn canon(f: &Formula, env: &mut HashMap<Var, Vec<Var>>, counter: &mut usize) -> Formula {
    match f {
        Formula::Atom { predicate, args } => Formula::atom(
            predicate.clone(),
            args.iter()
                .map(
                    |t| match t.as_var().and_then(|v| env.get(v)).and_then(|s| s.last()) {
                        Some(renamed) => Term::Variable(renamed.clone()),
                        None => t.clone(),
                    },
                )
                .collect(),
        ),
        Formula::Not(a) => canon(a, env, counter).not(),
        Formula::And(a, b) => {
            let a = canon(a, env, counter);
            a.and(canon(b, env, counter))
        }
        Formula::Or(a, b) => {
            let a = canon(a, env, counter);
            a.or(canon(b, env, counter))
        }
        Formula::Implies(a, b) => {
            let a = canon(a, env, counter);
            a.implies(canon(b, env, counter))
        }
        Formula::ForAll(x, a) | Formula::Exists(x, a) => {
            if !a.is_free(x) {
                return canon(a, env, counter);
            }
            let fresh = Var::unchecked(subscript(*counter));
            *counter += 1;
            env.entry(x.clone()).or_default().push(fresh.clone());
            let body = canon(a, env, counter);
            env.get_mut(x).unwrap().pop();
            if matches!(f, Formula::ForAll(..)) {
                Formula::forall(fresh, body)
            } else {
                Formula::exists(fresh, body)
            }
        }
    }
}

/// True when `g` can be obtained from `f` by capture-avoiding renaming of
/// bound variables and by removing or inserting void quantifiers.
pub fn is_reletter_of(f: &Formula, g: &Formula) -> bool {
    canonical_form(f) == canonical_form(g)
}

/// One-step relettering variants of `f`: each binder renamed to each
/// candidate variable where this is capture-free, and each void quantifier
/// removed. The candidates are the variables occurring in `f` plus one fresh
/// variable.
pub fn reletter(f: &Formula) -> BTreeSet<Formula> {
    let mut pool: BTreeSet<Var> = BTreeSet::new();
    collect_vars(f, &mut pool);
    let fresh = ["x", "y", "z", "u", "v", "w", "s", "t"]
        .into_iter()
        .map(String::from)
        .chain((0..).map(|i| format!("v{i}")))
        .map(|name| Var::new(name).unwrap())
        .find(|v| !pool.contains(v))
        .unwrap();
    pool.insert(fresh);
    let mut out = BTreeSet::new();
    variants(f, &pool, &mut |g| {
        out.insert(g);
    });
    out.retain(|g| g != f && is_reletter_of(f, g));
    out
}

fn collect_vars(f: &Formula, out: &mut BTreeSet<Var>) {
    match f {
        Formula::Atom { args, .. } => out.extend(args.iter().filter_map(Term::as_var).cloned()),
        Formula::Not(a) => collect_vars(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Formula::ForAll(x, a) | Formula::Exists(x, a) => {
            out.insert(x.clone());
            collect_vars(a, out);
        }
    }
}

/// Calls `emit` with every formula obtained by one local rewrite of `f`.
fn variants(f: &Formula, pool: &BTreeSet<Var>, emit: &mut dyn FnMut(Formula)) {
    match f {
        Formula::Atom { .. } => {}
        Formula::Not(a) => variants(a, pool, &mut |g| emit(g.not())),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let rebuild = |l: Formula, r: Formula| match f {
                Formula::And(..) => l.and(r),
                Formula::Or(..) => l.or(r),
                _ => l.implies(r),
            };
            variants(a, pool, &mut |g| emit(rebuild(g, (**b).clone())));
            variants(b, pool, &mut |g| emit(rebuild((**a).clone(), g)));
        }
        Formula::ForAll(x, a) | Formula::Exists(x, a) => {
            let universal = matches!(f, Formula::ForAll(..));
            let requant = |v: Var, body: Formula| {
                if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            };
            if !a.is_free(x) {
                emit((**a).clone());
            }
            for y in pool.iter().filter(|y| *y != x) {
                // y must not already be free in the body, and must be free for x
                if a.is_free(y) {
                    continue;
                }
                if let Ok(body) = substitute(a, x, &Term::Variable(y.clone())) {
                    emit(requant(y.clone(), body));
                }
            }
            variants(a, pool, &mut |g| emit(requant(x.clone(), g)));
        }
    }
}
