//! Every corpus proof and every transformer output is valid on every model
//! of the small enumerations, re-evaluated by the forcing relation.

use bql_core::proofs::corpus::{corpus_signature, relative_family, script_corpus};
use bql_core::proofs::{check_proof, check_relative_proof, conj, relative_deduction};
use bql_core::search::{enumerate_models, SearchBounds};
use bql_core::semantics::{forced_everywhere, relatively_forced};
use bql_core::syntax::parse_formula;
use bql_core::{Formula, Signature};

fn f(s: &str) -> Formula {
    parse_formula(s, &corpus_signature()).unwrap()
}

/// The symbols actually used, so the enumeration stays small.
fn signature_of(fs: &[&Formula]) -> Signature {
    let mut sig = Signature::new();
    for x in fs {
        sig.absorb_formula(x).unwrap();
    }
    sig
}

fn bounds_for(sig: Signature) -> Vec<SearchBounds> {
    vec![SearchBounds::new(2, 2, sig.clone()), SearchBounds::new(3, 1, sig)]
}

#[test]
fn corpus_is_sound_on_enumerated_models() {
    let sig = corpus_signature();
    for (name, script) in script_corpus() {
        let (j, sigma) = match &script.sigma {
            None => (check_proof(&script.proof, &sig).unwrap(), vec![]),
            Some(sigma) => (check_relative_proof(&script.proof, sigma, &sig).unwrap(), sigma.clone()),
        };
        let open = j.open_formulas();
        let safe = j.safe_formulas();
        let mut all: Vec<&Formula> = open.iter().chain(&sigma).collect();
        all.push(&j.conclusion);
        for b in bounds_for(signature_of(&all)) {
            for m in enumerate_models(&b).unwrap() {
                let ok = match &script.sigma {
                    None => forced_everywhere(&m, &open, &j.conclusion).unwrap(),
                    Some(sigma) => relatively_forced(&m, sigma, &safe, &j.conclusion).unwrap(),
                };
                assert!(ok, "{name} fails on {m:?}");
            }
        }
    }
}

#[test]
fn transformed_family_is_sound() {
    let sig = corpus_signature();
    let triples = [("P", "Q", "R"), ("P & Q", "R", "S(c)"), ("exists x. S(x)", "P | Q", "forall x. S(x)")];
    for (a, b, c) in triples {
        for e in relative_family(&f(a), &f(b), &f(c)) {
            let q = relative_deduction(&e.proof, &e.sigma_prime, &e.gamma, &sig).unwrap();
            let j = check_proof(&q, &sig).unwrap();
            assert_eq!(j.conclusion, Formula::arrow(conj(&e.gamma), e.proof.conclusion.clone()));
            let open = j.open_formulas();
            let mut all: Vec<&Formula> = open.iter().collect();
            all.push(&j.conclusion);
            let b = SearchBounds::new(2, 2, signature_of(&all));
            for m in enumerate_models(&b).unwrap() {
                assert!(forced_everywhere(&m, &open, &j.conclusion).unwrap(), "{}: {a}/{b:?}", e.name);
            }
        }
    }
}

#[test]
fn two_premise_example() {
    let sig = corpus_signature();
    let p = bql_core::proofs::Proof::and_int(
        bql_core::proofs::Proof::assume("h", f("P")),
        bql_core::proofs::Proof::assume("g", f("Q")),
    );
    let q = relative_deduction(&p, &[], &[f("Q"), f("P")], &sig).unwrap();
    let j = check_proof(&q, &sig).unwrap();
    assert_eq!(j.conclusion, f("P & Q -> P & Q"));
    assert!(j.open.is_empty());
}
