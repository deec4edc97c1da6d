use num_complex::Complex64;
use paracon_core::superposition::{
    create_system, entails, inconsistency_facts, is_nontrivial, kb_options, wellbehaved_guard,
    KnowledgeBase, SuperpositionSystem,
};
use paracon_core::{parse, strong_neg, Formula};
use paracon_testkit::{oracle_decide, rng};
use rand::Rng;

fn p(s: &str) -> Formula {
    parse(s).unwrap()
}

fn system(id: &str, n: usize) -> SuperpositionSystem {
    let labels: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
    create_system(id, &labels, None).unwrap()
}

fn premises(kb: &KnowledgeBase) -> Vec<Formula> {
    kb.formulas().cloned().collect()
}

#[test]
fn stacking_systems_never_trivialises() {
    let mut kb = KnowledgeBase::new();
    for (i, id) in ["S", "T", "U"].iter().enumerate() {
        kb.extend(&inconsistency_facts(&system(id, 2 + i % 2)));
        assert!(is_nontrivial(&kb, kb_options()).unwrap(), "after {id}");
    }
}

#[test]
fn entailment_is_reflexive_and_monotone() {
    let kb = inconsistency_facts(&system("S", 2));
    let extra = [p("K(S, s1) -> R"), p("R | T"), p("~R")];
    for f in kb.formulas() {
        assert!(entails(&kb, f, kb_options()).unwrap().is_valid());
    }
    let queries = [
        p("K(S, s1) | R"),
        p("R"),
        p("~K(S, s2)"),
        p("K(S, s1) & ~K(S, s2)"),
    ];
    let mut grown = kb.clone();
    for g in extra {
        let before: Vec<bool> = queries
            .iter()
            .map(|q| entails(&grown, q, kb_options()).unwrap().is_valid())
            .collect();
        grown.insert(g).unwrap();
        for (q, was) in queries.iter().zip(before) {
            if was {
                assert!(entails(&grown, q, kb_options()).unwrap().is_valid());
            }
        }
    }
    assert!(entails(&grown, &p("R"), kb_options()).unwrap().is_valid());
}

#[test]
fn disjunction_with_a_fresh_letter_follows() {
    for n in 2..=4 {
        let sys = system("S", n);
        let kb = inconsistency_facts(&sys);
        let q = kb.fresh_atom();
        for label in sys.labels() {
            let k = p(&format!("K(S, {label})"));
            assert!(entails(&kb, &k.or(q.clone()), kb_options())
                .unwrap()
                .is_valid());
        }
    }
}

#[test]
fn amplitudes_do_not_change_verdicts() {
    let mut r = rng(21);
    let queries = [
        p("K(S, s1)"),
        p("Q"),
        p("~*K(S, s1)"),
        p("K(S, s2) | Q"),
        p("~K(S, s3)"),
    ];
    let blind = inconsistency_facts(&system("S", 3));
    for _ in 0..20 {
        let raw: Vec<Complex64> = (0..3)
            .map(|_| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)))
            .collect();
        let norm = raw.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = raw.iter().map(|a| a / norm).collect();
        let sys = create_system("S", &["s1", "s2", "s3"], Some(&amps)).unwrap();
        let kb = inconsistency_facts(&sys);
        assert_eq!(kb, blind);
        for q in &queries {
            assert_eq!(
                entails(&kb, q, kb_options()).unwrap(),
                entails(&blind, q, kb_options()).unwrap()
            );
        }
    }
}

#[test]
fn strong_negation_query_fails_with_the_expected_witness() {
    let kb = inconsistency_facts(&system("S", 2));
    let k = p("K(S, s1)");
    let query = strong_neg(k.clone());
    let verdict = entails(&kb, &query, kb_options()).unwrap();
    let cm = verdict
        .countermodel()
        .expect("weak contradiction is not strong");
    assert_eq!(cm.get(&k), Some(true));
    assert_eq!(cm.get(&k.clone().not()), Some(true));
    assert_eq!(cm.get(&paracon_core::ball(k)), Some(false));
    let oracle = oracle_decide(&query, &premises(&kb), 1);
    assert_eq!(oracle.countermodel.as_deref(), Some(cm.values()));
}

#[test]
fn guarded_contradictions_explode() {
    let mut kb = KnowledgeBase::new();
    kb.insert(p("p")).unwrap();
    kb.insert(p("~p")).unwrap();
    let guarded = wellbehaved_guard(&kb, &[p("p")]);
    assert!(is_nontrivial(&kb, kb_options()).unwrap());
    assert!(!is_nontrivial(&guarded, kb_options()).unwrap());
    // no admissible valuation satisfies the guarded base at all
    let oracle = oracle_decide(&guarded.fresh_atom(), &premises(&guarded), 1);
    assert!(oracle.valid());
    assert_eq!(wellbehaved_guard(&kb, &[]), kb);

    let sup = inconsistency_facts(&system("S", 2));
    let guarded = wellbehaved_guard(&sup, &[p("K(S, s1)")]);
    assert!(!is_nontrivial(&guarded, kb_options()).unwrap());
    assert!(oracle_decide(&guarded.fresh_atom(), &premises(&guarded), 1).valid());
}
