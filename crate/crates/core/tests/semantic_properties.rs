use paracon_core::semantics::{classical_valid, verify_countermodel, DEFAULT_DEPTH};
use paracon_core::{ball, decide, print, star_translate, DecideOptions, Formula};
use paracon_testkit::{
    exhaustive, propositional_axiom_ids, props, random_formula, random_schema_instance,
    random_tautology, rng, tautology,
};
use rand::Rng;

fn wide() -> DecideOptions {
    DecideOptions::with_cap(400)
}

fn valid(f: &Formula, premises: &[Formula]) -> bool {
    decide(f, premises, wide()).unwrap().is_valid()
}

#[test]
fn library_truth_tables_agree_with_testkit() {
    for f in exhaustive(&props(&["p", "q"]), 3) {
        assert_eq!(classical_valid(&f).unwrap(), tautology(&f), "{}", print(&f));
    }
}

#[test]
fn classical_collapse_under_well_behaved_atoms() {
    let guard = ball(Formula::prop("p")).and(ball(Formula::prop("q")));
    for f in exhaustive(&props(&["p", "q"]), 3) {
        let guarded = guard.clone().implies(f.clone());
        assert_eq!(valid(&guarded, &[]), tautology(&f), "{}", print(&f));
    }
}

#[test]
fn star_translation_of_tautologies_is_valid() {
    let mut r = rng(6);
    let atoms = props(&["p", "q"]);
    for _ in 0..200 {
        let f = random_tautology(&mut r, &atoms);
        assert!(valid(&star_translate(&f), &[]), "{}", print(&f));
    }
}

#[test]
fn axiom_instances_are_valid() {
    let mut r = rng(3);
    for id in propositional_axiom_ids() {
        for _ in 0..200 {
            let f = random_schema_instance(&mut r, id);
            assert!(valid(&f, &[]), "schema {id}: {}", print(&f));
        }
    }
}

#[test]
fn modus_ponens_preserves_validity() {
    let mut r = rng(33);
    let atoms = props(&["p", "q", "r"]);
    let ids = propositional_axiom_ids();
    let mut checked = 0;
    while checked < 1000 {
        // valid antecedents come from schema instances; consequents are a
        // mix of weakenings of it and unrelated formulas
        let id = ids[r.gen_range(0..ids.len())];
        let a = random_schema_instance(&mut r, id);
        let c = random_formula(&mut r, 2, &atoms);
        let b = match r.gen_range(0..4) {
            0 => a.clone().or(c),
            1 => c.implies(a.clone()),
            2 => a.clone().and(c.clone().implies(c)),
            _ => c,
        };
        if valid(&a, &[]) && valid(&a.clone().implies(b.clone()), &[]) {
            assert!(valid(&b, &[]), "{} then {}", print(&a), print(&b));
            checked += 1;
        }
    }
}

#[test]
fn modus_ponens_as_premises() {
    let mut r = rng(34);
    let atoms = props(&["p", "q", "r"]);
    for _ in 0..1000 {
        let a = random_formula(&mut r, 2, &atoms);
        let b = random_formula(&mut r, 2, &atoms);
        assert!(valid(&b, &[a.clone(), a.implies(b.clone())]));
    }
}

#[test]
fn every_countermodel_certifies_itself() {
    let mut r = rng(8);
    let atoms = props(&["p", "q", "r"]);
    for _ in 0..500 {
        let f = random_formula(&mut r, 3, &atoms);
        let premises: Vec<Formula> = (0..r.gen_range(0..3))
            .map(|_| random_formula(&mut r, 2, &atoms))
            .collect();
        if let Some(cm) = decide(&f, &premises, wide()).unwrap().countermodel() {
            assert!(verify_countermodel(&f, &premises, cm), "{}", print(&f));
        }
    }
}

#[test]
fn adding_premises_keeps_validity() {
    let mut r = rng(9);
    let atoms = props(&["p", "q"]);
    let mut kept = 0;
    while kept < 300 {
        let f = random_formula(&mut r, 3, &atoms);
        let premises: Vec<Formula> = (0..r.gen_range(0..2))
            .map(|_| random_formula(&mut r, 2, &atoms))
            .collect();
        if !valid(&f, &premises) {
            continue;
        }
        let g = random_formula(&mut r, 2, &atoms);
        let mut more = premises.clone();
        more.push(g.clone());
        assert!(valid(&f, &more), "{} after adding {}", print(&f), print(&g));
        kept += 1;
    }
}

#[test]
fn valid_verdicts_survive_a_deeper_closure() {
    let deeper = DecideOptions {
        depth: DEFAULT_DEPTH + 1,
        cap: 2000,
    };
    for f in exhaustive(&props(&["p", "q"]), 2) {
        if valid(&f, &[]) {
            assert!(decide(&f, &[], deeper).unwrap().is_valid(), "{}", print(&f));
        }
    }
    for text in ["A | ~A", "~~A -> A", "(A & ~*A) -> B"] {
        let f = paracon_core::parse(text).unwrap();
        assert!(decide(&f, &[], deeper).unwrap().is_valid(), "{text}");
    }
}
