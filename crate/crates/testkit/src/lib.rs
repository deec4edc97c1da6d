//! Test support shared by the paracon suites: seeded formula generators and
//! a brute-force bivaluation oracle that shares no code with the decision
//! procedure beyond the formula type and the printer.

use std::collections::{BTreeSet, HashMap};

use paracon_core::proof::{instantiate, parse_proof, Proof, SchemaBinding, SchemaId};
use paracon_core::{ball, print, Formula};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn props(names: &[&str]) -> Vec<Formula> {
    names.iter().map(|n| Formula::prop(*n)).collect()
}

/// A random propositional formula over `atoms` with depth at most
/// `max_depth`, built from `~`, `&`, `|` and `->`.
pub fn random_formula<R: Rng>(rng: &mut R, max_depth: usize, atoms: &[Formula]) -> Formula {
    if max_depth == 0 || rng.gen_bool(0.3) {
        return atoms[rng.gen_range(0..atoms.len())].clone();
    }
    let d = max_depth - 1;
    match rng.gen_range(0..4) {
        0 => random_formula(rng, d, atoms).not(),
        1 => random_formula(rng, d, atoms).and(random_formula(rng, d, atoms)),
        2 => random_formula(rng, d, atoms).or(random_formula(rng, d, atoms)),
        _ => random_formula(rng, d, atoms).implies(random_formula(rng, d, atoms)),
    }
}

/// Like [`random_formula`] but also produces the derived `^o` and `~*`
/// shapes, which exercise the resugaring printer.
pub fn random_formula_with_derived<R: Rng>(
    rng: &mut R,
    max_depth: usize,
    atoms: &[Formula],
) -> Formula {
    if max_depth == 0 || rng.gen_bool(0.3) {
        return atoms[rng.gen_range(0..atoms.len())].clone();
    }
    let d = max_depth - 1;
    let op = rng.gen_range(0..6);
    let mut sub = || random_formula_with_derived(rng, d, atoms);
    match op {
        0 => sub().not(),
        1 => sub().and(sub()),
        2 => sub().or(sub()),
        3 => sub().implies(sub()),
        4 => ball(sub()),
        _ => paracon_core::strong_neg(sub()),
    }
}

const VARS: [&str; 4] = ["x", "y", "z", "s1"];
const CONSTS: [&str; 3] = ["a", "S", "c1"];
const PREDS: [&str; 3] = ["P", "R", "Qq"];

fn random_term<R: Rng>(rng: &mut R) -> paracon_core::Term {
    let name = if rng.gen_bool(0.6) {
        VARS[rng.gen_range(0..VARS.len())]
    } else {
        CONSTS[rng.gen_range(0..CONSTS.len())]
    };
    paracon_core::Term::from_identifier(name).unwrap()
}

/// A random first-order formula: predicate applications, membership,
/// identity, 0-ary atoms, connectives and both quantifiers.
pub fn random_first_order<R: Rng>(rng: &mut R, max_depth: usize) -> Formula {
    if max_depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 => Formula::prop(["A", "B", "p"][rng.gen_range(0..3)]),
            1 => Formula::member(random_term(rng), random_term(rng)),
            2 => Formula::equals(random_term(rng), random_term(rng)),
            _ => {
                let arity = rng.gen_range(1..=3);
                let args = (0..arity).map(|_| random_term(rng)).collect();
                Formula::atom(PREDS[rng.gen_range(0..PREDS.len())], args)
            }
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..6) {
        0 => random_first_order(rng, d).not(),
        1 => random_first_order(rng, d).and(random_first_order(rng, d)),
        2 => random_first_order(rng, d).or(random_first_order(rng, d)),
        3 => random_first_order(rng, d).implies(random_first_order(rng, d)),
        4 => {
            let x = paracon_core::Var::new(VARS[rng.gen_range(0..VARS.len())]).unwrap();
            Formula::forall(x, random_first_order(rng, d))
        }
        _ => {
            let x = paracon_core::Var::new(VARS[rng.gen_range(0..VARS.len())]).unwrap();
            Formula::exists(x, random_first_order(rng, d))
        }
    }
}

/// The propositional postulates that are axiom schemas.
pub fn propositional_axiom_ids() -> Vec<SchemaId> {
    SchemaId::all_axioms()
        .filter(|id| matches!(id, SchemaId::Prop(_)))
        .collect()
}

/// An instance of a propositional schema with metavariables bound to random
/// formulas of depth at most 3 over at most three atoms.
pub fn random_schema_instance<R: Rng>(rng: &mut R, id: SchemaId) -> Formula {
    let atoms = props(&["p", "q", "r"]);
    let mut binding = SchemaBinding::default();
    for key in ["A", "B", "C"] {
        let depth = rng.gen_range(0..=3);
        binding
            .formulas
            .insert(key.to_string(), random_formula(rng, depth, &atoms));
    }
    instantiate(id, &binding).expect("propositional schemas take A, B, C")
}

/// Every formula over `atoms` with at most `max_connectives` occurrences of
/// `~`, `&`, `|`, `->`, ordered by connective count.
pub fn exhaustive(atoms: &[Formula], max_connectives: usize) -> Vec<Formula> {
    let mut by_count: Vec<Vec<Formula>> = vec![atoms.to_vec()];
    for k in 1..=max_connectives {
        let mut level = Vec::new();
        for a in &by_count[k - 1] {
            level.push(a.clone().not());
        }
        for i in 0..k {
            let j = k - 1 - i;
            for a in &by_count[i] {
                for b in &by_count[j] {
                    level.push(a.clone().and(b.clone()));
                    level.push(a.clone().or(b.clone()));
                    level.push(a.clone().implies(b.clone()));
                }
            }
        }
        by_count.push(level);
    }
    by_count.into_iter().flatten().collect()
}

/// Truth-table validity, kept separate from the library's own.
pub fn tautology(f: &Formula) -> bool {
    let mut atoms = Vec::new();
    collect_atoms(f, &mut atoms);
    (0u32..1 << atoms.len()).all(|row| {
        let env: HashMap<&Formula, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (*a, row >> i & 1 == 1))
            .collect();
        truth(f, &env)
    })
}

fn collect_atoms<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Atom { .. } => {
            if !out.contains(&f) {
                out.push(f)
            }
        }
        Formula::Not(a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        Formula::ForAll(..) | Formula::Exists(..) => panic!("quantified formula"),
    }
}

fn truth(f: &Formula, env: &HashMap<&Formula, bool>) -> bool {
    match f {
        Formula::Atom { .. } => env[f],
        Formula::Not(a) => !truth(a, env),
        Formula::And(a, b) => truth(a, env) && truth(b, env),
        Formula::Or(a, b) => truth(a, env) || truth(b, env),
        Formula::Implies(a, b) => !truth(a, env) || truth(b, env),
        Formula::ForAll(..) | Formula::Exists(..) => unreachable!(),
    }
}

/// Draws random formulas until one is a classical tautology.
pub fn random_tautology<R: Rng>(rng: &mut R, atoms: &[Formula]) -> Formula {
    loop {
        let depth = rng.gen_range(1..=4);
        let f = random_formula(rng, depth, atoms);
        if tautology(&f) {
            return f;
        }
    }
}

/// Result of the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// Closure members in enumeration order.
    pub closure: Vec<Formula>,
    /// Number of admissible valuations of the closure.
    pub admissible: usize,
    /// First countermodel in enumeration order, as 0/1 values aligned with
    /// `closure`.
    pub countermodel: Option<Vec<bool>>,
}

impl OracleResult {
    pub fn valid(&self) -> bool {
        self.countermodel.is_none()
    }
}

enum Clause {
    // a = 0 implies ~a = 1
    Not {
        a: usize,
        na: usize,
    },
    // ~~a = 1 implies a = 1
    NotNot {
        nna: usize,
        a: usize,
    },
    // b^o = 1 forbids b = ~b = 1
    Cons {
        bo: usize,
        b: usize,
        nb: usize,
    },
    // b^o, a -> b, a -> ~b all 1 forbid a = 1
    Reductio {
        bo: usize,
        ab: usize,
        anb: usize,
        a: usize,
    },
    // a^o = b^o = 1 forces (a # b)^o = 1
    Prop {
        ao: usize,
        bo: usize,
        abo: usize,
    },
}

impl Clause {
    fn holds(&self, v: &[bool]) -> bool {
        match *self {
            Clause::Not { a, na } => v[a] || v[na],
            Clause::NotNot { nna, a } => !v[nna] || v[a],
            Clause::Cons { bo, b, nb } => !(v[bo] && v[b] && v[nb]),
            Clause::Reductio { bo, ab, anb, a } => !(v[bo] && v[ab] && v[anb] && v[a]),
            Clause::Prop { ao, bo, abo } => !(v[ao] && v[bo]) || v[abo],
        }
    }
}

fn oracle_closure(formulas: &[Formula], depth: usize) -> Vec<Formula> {
    fn subs(f: &Formula, out: &mut BTreeSet<Formula>) {
        out.insert(f.clone());
        match f {
            Formula::Atom { .. } => {}
            Formula::Not(a) => subs(a, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                subs(a, out);
                subs(b, out);
            }
            Formula::ForAll(..) | Formula::Exists(..) => panic!("quantified formula"),
        }
    }
    let mut level = BTreeSet::new();
    for f in formulas {
        subs(f, &mut level);
    }
    for _ in 0..depth {
        let mut next = level.clone();
        for psi in &level {
            let n = psi.clone().not();
            let c = psi.clone().and(n.clone());
            next.insert(n);
            next.insert(c.clone());
            next.insert(c.not());
        }
        level = next;
    }
    fn size(f: &Formula) -> usize {
        match f {
            Formula::Atom { .. } => 1,
            Formula::Not(a) => 1 + size(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + size(a) + size(b)
            }
            _ => unreachable!(),
        }
    }
    let mut members: Vec<(usize, String, Formula)> = level
        .into_iter()
        .map(|f| (size(&f), print(&f), f))
        .collect();
    members.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    members.into_iter().map(|m| m.2).collect()
}

fn oracle_clauses(closure: &[Formula]) -> Vec<Clause> {
    let idx: HashMap<&Formula, usize> = closure.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let at = |f: &Formula| idx.get(f).copied();
    let mut out = Vec::new();
    for (i, f) in closure.iter().enumerate() {
        if let Formula::Not(a) = f {
            out.push(Clause::Not {
                a: idx[&**a],
                na: i,
            });
            if let Formula::Not(inner) = &**a {
                out.push(Clause::NotNot {
                    nna: i,
                    a: idx[&**inner],
                });
            }
        }
    }
    for b in closure {
        let nb = b.clone().not();
        let Some(bo) = at(&ball(b.clone())) else {
            continue;
        };
        if let Some(nb_i) = at(&nb) {
            out.push(Clause::Cons {
                bo,
                b: idx[b],
                nb: nb_i,
            });
        }
        for a in closure {
            if let (Some(ab), Some(anb)) = (
                at(&a.clone().implies(b.clone())),
                at(&a.clone().implies(nb.clone())),
            ) {
                out.push(Clause::Reductio {
                    bo,
                    ab,
                    anb,
                    a: idx[a],
                });
            }
        }
    }
    for f in closure {
        if let Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) = f {
            if let (Some(abo), Some(ao), Some(bo)) = (
                at(&ball(f.clone())),
                at(&ball((**l).clone())),
                at(&ball((**r).clone())),
            ) {
                out.push(Clause::Prop { ao, bo, abo });
            }
        }
    }
    out
}

/// Tries every 0/1 assignment to the closure of `f` and `premises`, keeps
/// the admissible ones and reports the first one (lexicographic order,
/// earliest member most significant, 0 before 1) that makes every premise 1
/// and `f` 0.
///
/// Values of `&`, `|` and `->` members are fixed by their iff clauses, so
/// only atoms and negations are enumerated as raw bits and the rest are
/// filled in; every other raw assignment would fail one of those clauses.
pub fn oracle_decide(f: &Formula, premises: &[Formula], depth: usize) -> OracleResult {
    let mut inputs = premises.to_vec();
    inputs.push(f.clone());
    let closure = oracle_closure(&inputs, depth);
    let clauses = oracle_clauses(&closure);
    let idx: HashMap<&Formula, usize> = closure.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let free: Vec<usize> = (0..closure.len())
        .filter(|&i| matches!(closure[i], Formula::Atom { .. } | Formula::Not(_)))
        .collect();
    assert!(free.len() < 32, "oracle over {} free members", free.len());
    let goal = idx[f];
    let prem: Vec<usize> = premises.iter().map(|p| idx[p]).collect();
    // operand indices of the binary members; members are sorted by size, so
    // operands always come first
    let ops: Vec<(usize, u8, usize, usize)> = closure
        .iter()
        .enumerate()
        .filter_map(|(i, g)| match g {
            Formula::And(a, b) => Some((i, 0, idx[&**a], idx[&**b])),
            Formula::Or(a, b) => Some((i, 1, idx[&**a], idx[&**b])),
            Formula::Implies(a, b) => Some((i, 2, idx[&**a], idx[&**b])),
            _ => None,
        })
        .collect();
    let mut v = vec![false; closure.len()];
    let mut admissible = 0;
    let mut countermodel = None;
    for bits in 0u32..1 << free.len() {
        for (k, &i) in free.iter().enumerate() {
            v[i] = bits >> (free.len() - 1 - k) & 1 == 1;
        }
        for &(i, op, a, b) in &ops {
            v[i] = match op {
                0 => v[a] && v[b],
                1 => v[a] || v[b],
                _ => !v[a] || v[b],
            };
        }
        if !clauses.iter().all(|c| c.holds(&v)) {
            continue;
        }
        admissible += 1;
        if countermodel.is_none() && !v[goal] && prem.iter().all(|&p| v[p]) {
            countermodel = Some(v.clone());
        }
    }
    OracleResult {
        closure,
        admissible,
        countermodel,
    }
}

/// Shipped proofs and the conclusion each one must reach.
pub const CORPUS: [(&str, &str); 5] = [
    ("lem.proof", "A | ~A"),
    ("dne.proof", "~~A -> A"),
    ("strong_explosion.proof", "(A & ~*A) -> B"),
    ("quantifier.proof", "p -> forall y. (y in S -> p)"),
    ("premises.proof", "C"),
];

pub fn corpus_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(name)
}

/// Reads and parses every corpus proof, paired with its expected conclusion.
pub fn load_corpus() -> Vec<(&'static str, Proof, Formula)> {
    CORPUS
        .iter()
        .map(|&(name, conclusion)| {
            let text = std::fs::read_to_string(corpus_path(name))
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            let proof = parse_proof(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            (name, proof, paracon_core::parse(conclusion).unwrap())
        })
        .collect()
}

/// A proof with one line's formula changed.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub source: &'static str,
    /// 1-based number of the changed line.
    pub line: usize,
    pub proof: Proof,
}

/// `count` distinct single-line mutations drawn from `corpus`. A line is
/// either wrapped in a weak negation or conjoined with an atom that occurs
/// nowhere in the corpus; neither leaves an axiom instance or a rule
/// conclusion intact.
pub fn mutations(
    corpus: &[(&'static str, Proof, Formula)],
    count: usize,
    seed: u64,
) -> Vec<Mutation> {
    let mut sites: Vec<(usize, usize, bool)> = Vec::new();
    for (p, (_, proof, _)) in corpus.iter().enumerate() {
        for line in 1..=proof.lines.len() {
            sites.push((p, line, false));
            sites.push((p, line, true));
        }
    }
    assert!(sites.len() >= count, "only {} mutation sites", sites.len());
    let mut r = rng(seed);
    rand::seq::SliceRandom::shuffle(&mut sites[..], &mut r);
    sites.truncate(count);
    sites.sort();
    sites
        .into_iter()
        .map(|(p, line, conjoin)| {
            let (source, proof, _) = &corpus[p];
            let mut proof = proof.clone();
            let f = &mut proof.lines[line - 1].formula;
            *f = if conjoin {
                f.clone().and(Formula::prop("Zz"))
            } else {
                f.clone().not()
            };
            Mutation {
                source,
                line,
                proof,
            }
        })
        .collect()
}
