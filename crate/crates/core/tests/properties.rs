mod common;

use bql_core::proofs::corpus::{corpus_signature, relative_family, script_corpus};
use bql_core::proofs::{check_proof, check_relative_proof, Proof, ProofErrorKind, Rule};
use bql_core::semantics::{validate_model, Evaluator};
use bql_core::syntax::{alpha_eq, parse_formula};
use bql_core::{Formula, Term};
use common::{model, reference_forces, sentence, sig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_parse_round_trip(f in sentence(4)) {
        let printed = f.to_string();
        let back = parse_formula(&printed, &sig()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn generated_models_are_valid(m in model(3, 3)) {
        prop_assert!(validate_model(&m).is_empty());
    }

    #[test]
    fn evaluator_matches_reference(m in model(4, 2), f in sentence(4)) {
        let mut ev = Evaluator::new(&m);
        for w in 0..m.worlds.len() {
            prop_assert_eq!(ev.forces_sentence(w, &f).unwrap(), reference_forces(&m, w, &f, &mut Vec::new()));
        }
    }

    #[test]
    fn persistence(m in model(3, 3), f in sentence(4)) {
        let forced = Evaluator::new(&m).forced_worlds(&f).unwrap();
        for &(w, u) in &m.order {
            prop_assert!(!forced[w] || forced[u], "{} at {} but not at {}", f, w, u);
        }
    }

    #[test]
    fn weakening_the_theory_keeps_relative_proofs(extra in proptest::collection::vec(sentence(2), 0..4)) {
        let sig = corpus_signature();
        for e in relative_family(&f("P"), &f("Q"), &f("R")) {
            let before = check_relative_proof(&e.proof, &e.sigma_prime, &sig).unwrap();
            let mut wider = e.sigma_prime.clone();
            wider.extend(extra.iter().cloned());
            let after = check_relative_proof(&e.proof, &wider, &sig).unwrap();
            prop_assert_eq!(before, after);
        }
    }

    #[test]
    fn reusing_a_witness_in_an_assumption_is_rejected(pick in any::<prop::sample::Index>(), g in sentence(1)) {
        let sig = corpus_signature();
        let mut sites = Vec::new();
        for s in script_corpus().into_values().filter(|s| s.sigma.is_none()) {
            collect_sites(&s.proof, &mut Vec::new(), &mut sites, &s.proof);
        }
        prop_assume!(!sites.is_empty());
        let (root, path) = &sites[pick.index(sites.len())];
        assert!(check_proof(root, &sig).is_ok());
        let mutated = inject(root, path, &g);
        let e = check_proof(&mutated, &sig).unwrap_err();
        prop_assert!(matches!(*e.kind, ProofErrorKind::Freshness { .. }), "{}", e);
    }
}

fn f(s: &str) -> Formula {
    parse_formula(s, &corpus_signature()).unwrap()
}

/// Paths to every `ForallInt`/`ExistsElim` node.
fn collect_sites(p: &Proof, path: &mut Vec<usize>, out: &mut Vec<(Proof, Vec<usize>)>, root: &Proof) {
    if matches!(p.rule, Rule::ForallInt | Rule::ExistsElim) {
        out.push((root.clone(), path.clone()));
    }
    for (i, c) in p.children.iter().enumerate() {
        path.push(i);
        collect_sites(c, path, out, root);
        path.pop();
    }
}

/// Conjoins an open assumption `S(@i) & g` onto the main subproof at `path`
/// and projects it away again, so only freshness can fail.
fn inject(root: &Proof, path: &[usize], g: &Formula) -> Proof {
    let mut out = root.clone();
    let mut node = &mut out;
    for &i in path {
        node = &mut node.children[i];
    }
    let i = node.witness.expect("site has a witness");
    let main = if node.rule == Rule::ForallInt { 0 } else { 1 };
    let tainted = Formula::and(Formula::atom("S", vec![Term::Witness(i)]), g.clone());
    let child = node.children[main].clone();
    node.children[main] = Proof::and_elim_l(Proof::and_int(child, Proof::assume("taint", tainted)));
    assert!(alpha_eq(&node.children[main].conclusion, &root_conclusion_at(root, path, main)));
    out
}

fn root_conclusion_at(root: &Proof, path: &[usize], main: usize) -> Formula {
    let mut node = root;
    for &i in path {
        node = &node.children[i];
    }
    node.children[main].conclusion.clone()
}
