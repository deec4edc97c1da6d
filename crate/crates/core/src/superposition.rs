//! Superposition systems and entailment over the contradictory knowledge
//! bases they generate.
//!
//! A system in a superposition of states `s1..sn` contributes both
//! `K(S, si)` and `~K(S, si)` for every state. Entailment is the bivaluation
//! consequence relation with the knowledge base as premises, so these
//! contradictions do not make every sentence follow.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{ball, Formula, Term};
use crate::semantics::{decide, DecideOptions, SemanticsError, Verdict};
use crate::syntax::print;

/// Name of the superposition predicate.
pub const SUPERPOSITION_PREDICATE: &str = "K";
/// Tolerance on the squared-amplitude sum.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;
/// Closure cap used for knowledge-base queries. Every state adds two
/// literals plus their closure members, so knowledge bases outgrow the
/// single-formula cap quickly.
pub const KB_DEFAULT_CAP: usize = 256;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SystemError {
    #[error("a superposition needs at least two states, got {0}")]
    TooFewStates(usize),
    #[error("state label `{0}` appears more than once")]
    DuplicateLabel(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("{amplitudes} amplitudes given for {labels} states")]
    AmplitudeCount { amplitudes: usize, labels: usize },
    #[error("amplitudes are not normalized: sum of squared moduli is {sum}")]
    NotNormalized { sum: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuperpositionSystem {
    id: String,
    labels: Vec<String>,
    #[serde(skip)]
    amplitudes: Option<Vec<Complex64>>,
}

impl SuperpositionSystem {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn amplitudes(&self) -> Option<&[Complex64]> {
        self.amplitudes.as_deref()
    }

    pub fn term(&self) -> Term {
        Term::from_identifier(&self.id).expect("validated on construction")
    }
}

fn check_identifier(name: &str) -> Result<Term, SystemError> {
    Term::from_identifier(name).map_err(|_| SystemError::BadIdentifier(name.to_string()))
}

/// Validates and builds a system in a superposition of `labels`.
pub fn create_system(
    id: &str,
    labels: &[&str],
    amplitudes: Option<&[Complex64]>,
) -> Result<SuperpositionSystem, SystemError> {
    check_identifier(id)?;
    if labels.len() < 2 {
        return Err(SystemError::TooFewStates(labels.len()));
    }
    let mut seen = HashSet::new();
    for label in labels {
        check_identifier(label)?;
        if !seen.insert(*label) {
            return Err(SystemError::DuplicateLabel(label.to_string()));
        }
    }
    if let Some(amps) = amplitudes {
        if amps.len() != labels.len() {
            return Err(SystemError::AmplitudeCount {
                amplitudes: amps.len(),
                labels: labels.len(),
            });
        }
        let sum: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(SystemError::NotNormalized { sum });
        }
    }
    Ok(SuperpositionSystem {
        id: id.to_string(),
        labels: labels.iter().map(|s| s.to_string()).collect(),
        amplitudes: amplitudes.map(<[Complex64]>::to_vec),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    Positive,
    WeakNegative,
}

/// `K(S, s)` or `~K(S, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct KFact {
    pub polarity: Polarity,
    pub system: Term,
    pub state: Term,
}

impl KFact {
    pub fn atom(&self) -> Formula {
        Formula::atom(
            SUPERPOSITION_PREDICATE,
            vec![self.system.clone(), self.state.clone()],
        )
    }

    pub fn to_formula(&self) -> Formula {
        match self.polarity {
            Polarity::Positive => self.atom(),
            Polarity::WeakNegative => self.atom().not(),
        }
    }
}

impl fmt::Display for KFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(&self.to_formula()))
    }
}

/// The K-facts a system contributes: both polarities for every state.
pub fn k_facts(sys: &SuperpositionSystem) -> Vec<KFact> {
    let system = sys.term();
    sys.labels
        .iter()
        .flat_map(|label| {
            let state = Term::from_identifier(label).expect("validated on construction");
            [Polarity::Positive, Polarity::WeakNegative].map(|polarity| KFact {
                polarity,
                system: system.clone(),
                state: state.clone(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("knowledge-base formulas must be quantifier-free: `{0}`")]
    Quantified(String),
}

/// A finite set of quantifier-free formulas.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KnowledgeBase {
    formulas: BTreeSet<Formula>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, f: Formula) -> Result<bool, KbError> {
        if f.has_quantifier() {
            return Err(KbError::Quantified(print(&f)));
        }
        Ok(self.formulas.insert(f))
    }

    pub fn with(mut self, f: Formula) -> Result<Self, KbError> {
        self.insert(f)?;
        Ok(self)
    }

    pub fn extend(&mut self, other: &KnowledgeBase) {
        self.formulas.extend(other.formulas.iter().cloned());
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.formulas.iter()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    /// The lexicographically first `_q`-prefixed predicate name not used in
    /// the knowledge base.
    pub fn fresh_atom(&self) -> Formula {
        let used: BTreeSet<&str> = self.formulas.iter().flat_map(|f| f.predicates()).collect();
        let mut name = String::from("_q");
        while used.contains(name.as_str()) {
            name.push('0');
        }
        Formula::prop(name)
    }

    fn premises(&self) -> Vec<Formula> {
        self.formulas.iter().cloned().collect()
    }
}

/// `{K(S, si), ~K(S, si) : i = 1..n}`.
pub fn inconsistency_facts(sys: &SuperpositionSystem) -> KnowledgeBase {
    KnowledgeBase {
        formulas: k_facts(sys).iter().map(KFact::to_formula).collect(),
    }
}

/// Options for knowledge-base queries; the cap defaults to
/// [`KB_DEFAULT_CAP`].
pub fn kb_options() -> DecideOptions {
    DecideOptions::with_cap(KB_DEFAULT_CAP)
}

/// Valid iff the knowledge base paraconsistently entails `query`.
pub fn entails(
    kb: &KnowledgeBase,
    query: &Formula,
    opts: DecideOptions,
) -> Result<Verdict, SemanticsError> {
    decide(query, &kb.premises(), opts)
}

/// True iff a fresh propositional letter does not follow from `kb`.
pub fn is_nontrivial(kb: &KnowledgeBase, opts: DecideOptions) -> Result<bool, SemanticsError> {
    Ok(!entails(kb, &kb.fresh_atom(), opts)?.is_valid())
}

/// Adds `a^o` for every listed formula, marking it as classically behaved.
pub fn wellbehaved_guard(kb: &KnowledgeBase, atoms: &[Formula]) -> KnowledgeBase {
    let mut out = kb.clone();
    for a in atoms {
        out.formulas.insert(ball(a.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::strong_neg;
    use crate::syntax::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn two_state() -> SuperpositionSystem {
        create_system("S", &["s1", "s2"], None).unwrap()
    }

    #[test]
    fn create_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = [Complex64::new(h, 0.0), Complex64::new(h, 0.0)];
        let sys = create_system("S", &["up_x", "down_x"], Some(&amps)).unwrap();
        assert_eq!(sys.labels(), ["up_x", "down_x"]);
        assert_eq!(sys.amplitudes().unwrap().len(), 2);

        let bad = [Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.0)];
        match create_system("S", &["s1", "s2"], Some(&bad)) {
            Err(SystemError::NotNormalized { sum }) => assert!((sum - 1.01).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            create_system("S", &["s1", "s1"], None),
            Err(SystemError::DuplicateLabel("s1".into()))
        );
        assert_eq!(
            create_system("S", &["s1"], None),
            Err(SystemError::TooFewStates(1))
        );
        assert!(matches!(
            create_system("S", &["s1", "s2"], Some(&amps[..1])),
            Err(SystemError::AmplitudeCount { .. })
        ));
        assert!(matches!(
            create_system("S", &["s 1", "s2"], None),
            Err(SystemError::BadIdentifier(_))
        ));
        // complex phases are fine as long as the moduli are normalized
        let phased = [Complex64::new(0.0, h), Complex64::new(-h, 0.0)];
        assert!(create_system("S", &["s1", "s2"], Some(&phased)).is_ok());
    }

    #[test]
    fn two_and_three_state_facts() {
        let kb = inconsistency_facts(&two_state());
        let expected: BTreeSet<Formula> = ["K(S, s1)", "~K(S, s1)", "K(S, s2)", "~K(S, s2)"]
            .iter()
            .map(|t| p(t))
            .collect();
        assert_eq!(kb.formulas, expected);
        let three = create_system("S", &["s1", "s2", "s3"], None).unwrap();
        assert_eq!(inconsistency_facts(&three).len(), 6);
        assert_eq!(k_facts(&three)[1].to_string(), "~K(S, s1)");
    }

    #[test]
    fn entailment_examples() {
        let kb = inconsistency_facts(&two_state());
        let opts = kb_options();
        assert!(entails(&kb, &p("K(S, s1)"), opts).unwrap().is_valid());
        assert!(!entails(&kb, &p("Q"), opts).unwrap().is_valid());
        let strong = strong_neg(p("K(S, s1)"));
        let verdict = entails(&kb, &strong, opts).unwrap();
        let cm = verdict
            .countermodel()
            .expect("strong negation is not entailed");
        assert_eq!(cm.get(&p("K(S, s1)")), Some(true));
        assert_eq!(cm.get(&p("~K(S, s1)")), Some(true));
        assert_eq!(cm.get(&ball(p("K(S, s1)"))), Some(false));
    }

    #[test]
    fn triviality() {
        let opts = kb_options();
        let kb = inconsistency_facts(&two_state());
        assert!(is_nontrivial(&kb, opts).unwrap());
        let exploded = kb.clone().with(strong_neg(p("K(S, s1)"))).unwrap();
        assert!(!is_nontrivial(&exploded, opts).unwrap());
        assert!(is_nontrivial(&KnowledgeBase::new(), opts).unwrap());
    }

    #[test]
    fn guards() {
        let opts = kb_options();
        let kb = KnowledgeBase::new()
            .with(p("p"))
            .unwrap()
            .with(p("~p"))
            .unwrap();
        assert!(is_nontrivial(&kb, opts).unwrap());
        let guarded = wellbehaved_guard(&kb, &[p("p")]);
        assert!(guarded.contains(&p("p^o")));
        assert!(!is_nontrivial(&guarded, opts).unwrap());
        assert_eq!(wellbehaved_guard(&kb, &[]), kb);

        let sup = inconsistency_facts(&two_state());
        assert!(!is_nontrivial(&wellbehaved_guard(&sup, &[p("K(S, s1)")]), opts).unwrap());
    }

    #[test]
    fn fresh_atom_skips_used_names() {
        let kb = KnowledgeBase::new().with(p("_q & _q0")).unwrap();
        assert_eq!(kb.fresh_atom(), p("_q00"));
        assert_eq!(KnowledgeBase::new().fresh_atom(), p("_q"));
    }

    #[test]
    fn quantified_formulas_rejected() {
        assert!(KnowledgeBase::new().with(p("forall x. P(x)")).is_err());
    }
}
