mod common;

use std::collections::BTreeSet;

use bql_core::model_ops::generated_submodel;
use bql_core::semantics::{forces, Assignment, Evaluator};
use bql_core::syntax::{fragment_check, free_vars, substitute, Connective};
use bql_core::{Formula, Term};
use common::{model, open_formula, sentence};
use proptest::prelude::*;

fn subformulas(f: &Formula, out: &mut Vec<Formula>) {
    out.push(f.clone());
    match f {
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => subformulas(b, out),
        _ => {}
    }
}

fn connectives() -> impl Strategy<Value = BTreeSet<Connective>> {
    proptest::sample::subsequence(
        vec![Connective::And, Connective::Or, Connective::Arrow, Connective::Forall, Connective::Exists],
        0..=5,
    )
    .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn substituting_an_absent_variable_is_identity(f in open_formula(4)) {
        prop_assume!(!free_vars(&f).contains("z"));
        prop_assert_eq!(substitute(&f, "z", &Term::constant("c")).unwrap(), f);
    }

    #[test]
    fn substitution_removes_exactly_the_variable(f in open_formula(4), pick in any::<prop::sample::Index>()) {
        let before = free_vars(&f);
        prop_assume!(!before.is_empty());
        let v = before.iter().nth(pick.index(before.len())).unwrap().clone();
        let after = free_vars(&substitute(&f, &v, &Term::constant("c")).unwrap());
        let mut expected = before.clone();
        expected.remove(&v);
        prop_assert_eq!(after, expected);
    }

    #[test]
    fn fragment_check_is_hereditary(f in sentence(5), banned in connectives()) {
        prop_assume!(fragment_check(&f, &banned));
        let mut subs = Vec::new();
        subformulas(&f, &mut subs);
        for g in subs {
            prop_assert!(fragment_check(&g, &banned), "{}", g);
        }
    }

    #[test]
    fn arrows_are_vacuous_at_dead_ends(m in model(3, 2), a in sentence(3), b in sentence(3)) {
        let f = Formula::arrow(a, b);
        let mut ev = Evaluator::new(&m);
        for w in (0..m.worlds.len()).filter(|&w| m.successors(w).next().is_none()) {
            prop_assert!(ev.forces_sentence(w, &f).unwrap());
        }
    }

    #[test]
    fn forcing_depends_only_on_free_variables(
        m in model(3, 3),
        f in open_formula(4),
        picks in proptest::collection::vec(0usize..3, 4),
    ) {
        let d = m.domain.len();
        let fv = free_vars(&f);
        let mut a = Assignment::new();
        let mut b = Assignment::new();
        for (i, v) in ["x", "y"].into_iter().enumerate() {
            a.insert(v.into(), picks[i] % d);
            let other = if fv.contains(v) { picks[i] % d } else { picks[i + 2] % d };
            b.insert(v.into(), other);
        }
        b.insert("z".into(), 0);
        for w in 0..m.worlds.len() {
            prop_assert_eq!(forces(&m, w, &f, &a).unwrap(), forces(&m, w, &f, &b).unwrap());
        }
    }

    #[test]
    fn constant_domain_validates_cd(m in model(3, 2), phi in sentence(2), psi in open_formula(2)) {
        let psi = bql_core::syntax::substitute(&psi, "y", &Term::constant("c")).unwrap();
        let premise = Formula::forall("x", Formula::or(phi.clone(), psi.clone()));
        let conclusion = Formula::or(phi, Formula::forall("x", psi));
        let mut ev = Evaluator::new(&m);
        for w in 0..m.worlds.len() {
            prop_assert!(!ev.forces_sentence(w, &premise).unwrap() || ev.forces_sentence(w, &conclusion).unwrap());
        }
    }

    #[test]
    fn generated_submodels_preserve_forcing(m in model(3, 2), f in sentence(4)) {
        for w in 0..m.worlds.len() {
            let sub = generated_submodel(&m, w).unwrap();
            let at = sub.world_index(&m.worlds[w]).unwrap();
            prop_assert_eq!(
                Evaluator::new(&m).forces_sentence(w, &f).unwrap(),
                Evaluator::new(&sub).forces_sentence(at, &f).unwrap()
            );
        }
    }
}
