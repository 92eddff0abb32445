//! Hand-written proof scripts: the distribution templates, the consequence
//! of constant domains for universal disjunctions, and one small regression
//! script per rule. All scripts use [`corpus_signature`].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::deduction::{distribution_body, infinite_distribution_body};
use super::{Proof, Rule};
use crate::syntax::{fresh_witness, parse_formula, Formula, Signature, Term};

/// `(phi & psi) | (phi & chi)` from the open assumption `h: phi & (psi | chi)`.
pub fn distribution(phi: &Formula, psi: &Formula, chi: &Formula) -> Proof {
    distribution_body(phi, psi, chi, "h", "k")
}

/// `exists v. (phi & psi)` from the open assumption `h: phi & exists v. psi`,
/// for a sentence `phi`.
pub fn infinite_distribution(phi: &Formula, v: &str, psi: &Formula) -> Proof {
    infinite_distribution_body(phi, v, psi, "h", "k")
}

/// `top -> phi | forall v. (top -> psi)` from the open assumption
/// `p: forall v. (top -> phi | psi)`, for a sentence `phi`.
pub fn cd_consequence(phi: &Formula, v: &str, psi: &Formula) -> Proof {
    let disj = Formula::or(phi.clone(), psi.clone());
    let premise = Formula::forall(v, Formula::arrow(Formula::Top, disj.clone()));
    let all = Formula::forall(v, disj);
    let all_psi = Formula::forall(v, psi.clone());
    let guarded = Formula::forall(v, Formula::arrow(Formula::Top, psi.clone()));
    let mut used = phi.witnesses();
    psi.collect_witnesses(&mut used);
    let i = fresh_witness(&used);

    let lifted = Proof::int_forall_int(Proof::assume("p", premise));
    let regen = Proof::forall_int(
        i,
        guarded.clone(),
        Proof::arrow_int_vacuous(
            Formula::Top,
            Proof::forall_elim(Proof::assume("m", all_psi.clone()), Term::Witness(i)),
        ),
    );
    let split = Proof::or_elim(
        "m",
        Proof::cd(Proof::assume("k", all.clone())),
        Proof::or_int_l(Proof::assume("m", phi.clone()), guarded.clone()),
        Proof::or_int_r(phi.clone(), regen),
    );
    Proof::int_trans(lifted, Proof::arrow_int("k", all, split))
}

/// Signature of the corpus: `P`, `Q`, `R` nullary, `S`, `T` unary, constant `c`.
pub fn corpus_signature() -> Signature {
    Signature::new()
        .with_relation("P", 0)
        .with_relation("Q", 0)
        .with_relation("R", 0)
        .with_relation("S", 1)
        .with_relation("T", 1)
        .with_constant("c")
}

/// A named script. `sigma` is `Some` for scripts of the relative calculus.
#[derive(Clone, Debug)]
pub struct Script {
    pub proof: Proof,
    pub sigma: Option<Vec<Formula>>,
}

fn f(s: &str) -> Formula {
    parse_formula(s, &corpus_signature()).expect("corpus formula")
}

fn s_of(t: Term) -> Formula {
    Formula::atom("S", vec![t])
}

fn t_of(t: Term) -> Formula {
    Formula::atom("T", vec![t])
}

fn x() -> Term {
    Term::var("x")
}

fn plain(proof: Proof) -> Script {
    Script { proof, sigma: None }
}

/// All corpus scripts by name.
pub fn script_corpus() -> BTreeMap<&'static str, Script> {
    let mut m = BTreeMap::new();
    let w0 = || Term::Witness(0);
    let c = || Term::constant("c");

    m.insert("distribution", plain(distribution(&f("P"), &f("Q"), &f("R"))));
    m.insert("infinite-distribution", plain(infinite_distribution(&f("P"), "x", &s_of(x()))));
    m.insert("cd-consequence", plain(cd_consequence(&f("P"), "x", &s_of(x()))));
    m.insert("top", plain(Proof::top_int()));
    m.insert("ex-falso", plain(Proof::bot_elim(Proof::assume("h", Formula::Bot), f("P"))));
    m.insert(
        "and-commute",
        plain(Proof::and_int(
            Proof::and_elim_r(Proof::assume("h", f("P & Q"))),
            Proof::and_elim_l(Proof::assume("h", f("P & Q"))),
        )),
    );
    m.insert(
        "or-commute",
        plain(Proof::or_elim(
            "k",
            Proof::assume("h", f("P | Q")),
            Proof::or_int_r(f("Q"), Proof::assume("k", f("P"))),
            Proof::or_int_l(Proof::assume("k", f("Q")), f("P")),
        )),
    );
    m.insert("identity", plain(Proof::arrow_int("h", f("P"), Proof::assume("h", f("P")))));
    m.insert("weakening", plain(Proof::arrow_int_vacuous(f("Q"), Proof::assume("h", f("P")))));
    m.insert("int-trans", plain(Proof::int_trans(Proof::assume("a", f("P -> Q")), Proof::assume("b", f("Q -> R")))));
    m.insert(
        "int-and-int",
        plain(Proof::int_and_int(Proof::assume("a", f("P -> Q")), Proof::assume("b", f("P -> R")))),
    );
    m.insert(
        "int-or-elim",
        plain(Proof::int_or_elim(Proof::assume("a", f("P -> R")), Proof::assume("b", f("Q -> R")))),
    );
    m.insert("int-forall-int", plain(Proof::int_forall_int(Proof::assume("h", f("forall x. (P -> S(x))")))));
    m.insert("int-exists-elim", plain(Proof::int_exists_elim(Proof::assume("h", f("forall x. (S(x) -> P)")))));
    m.insert("forall-inst", plain(Proof::forall_elim(Proof::assume("h", f("forall x. S(x)")), c())));
    m.insert("exists-intro", plain(Proof::exists_int(f("exists x. S(x)"), c(), Proof::assume("h", f("S(c)")))));
    m.insert(
        "forall-and-left",
        plain(Proof::forall_int(
            0,
            f("forall x. S(x)"),
            Proof::and_elim_l(Proof::forall_elim(Proof::assume("h", f("forall x. (S(x) & T(x))")), w0())),
        )),
    );
    m.insert(
        "exists-or",
        plain(Proof::exists_elim(
            0,
            "k",
            Proof::assume("h", f("exists x. (S(x) | T(x))")),
            Proof::or_elim(
                "m",
                Proof::assume("k", Formula::or(s_of(w0()), t_of(w0()))),
                Proof::or_int_l(
                    Proof::exists_int(f("exists x. S(x)"), w0(), Proof::assume("m", s_of(w0()))),
                    f("exists x. T(x)"),
                ),
                Proof::or_int_r(
                    f("exists x. S(x)"),
                    Proof::exists_int(f("exists x. T(x)"), w0(), Proof::assume("m", t_of(w0()))),
                ),
            ),
        )),
    );
    m.insert("cd", plain(Proof::cd(Proof::assume("h", f("forall x. (P | S(x))")))));
    m.insert(
        "detour",
        Script {
            proof: Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q"))),
            sigma: Some(vec![f("P -> Q")]),
        },
    );
    m.insert(
        "detour-chain",
        Script {
            proof: Proof::detour(
                Proof::assume("h", f("P")),
                Proof::int_trans(Proof::assume("s", f("P -> Q")), Proof::assume("t", f("Q -> R"))),
            ),
            sigma: Some(vec![f("P -> Q"), f("Q -> R")]),
        },
    );
    m.insert(
        "detour-under-arrow",
        Script {
            proof: Proof::arrow_int(
                "h",
                f("P"),
                Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q"))),
            ),
            sigma: Some(vec![f("P -> Q")]),
        },
    );
    m
}

/// A relative proof with the theory and context it is transformed against.
#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub name: &'static str,
    pub proof: Proof,
    pub sigma_prime: Vec<Formula>,
    pub gamma: Vec<Formula>,
}

/// Relative proofs built around the sentences `a`, `b`, `c` (which must not
/// mention `@0`) and the unary relation `S`, together reaching every case of
/// the relative-deduction transformation.
pub fn relative_family(a: &Formula, b: &Formula, c: &Formula) -> Vec<FamilyEntry> {
    let w0 = || Term::Witness(0);
    let (a, b, c) = (a.clone(), b.clone(), c.clone());
    let ab = Formula::arrow(a.clone(), b.clone());
    let bc = Formula::arrow(b.clone(), c.clone());
    let all_s = Formula::forall("x", s_of(x()));
    let ex_s = Formula::exists("x", s_of(x()));
    let entry =
        |name, proof, sigma_prime: Vec<Formula>, gamma: Vec<Formula>| FamilyEntry { name, proof, sigma_prime, gamma };
    let hyp = |l: &str, f: &Formula| Proof::assume(l, f.clone());

    let a_or_b = Formula::or(a.clone(), b.clone());
    let swap = |d: Proof| {
        Proof::or_elim("k", d, Proof::or_int_r(b.clone(), hyp("k", &a)), Proof::or_int_l(hyp("k", &b), a.clone()))
    };
    let s_and_c = Formula::forall("x", Formula::and(s_of(x()), c.clone()));
    let gen_with_c =
        Proof::forall_int(0, s_and_c.clone(), Proof::and_int(Proof::forall_elim(hyp("h", &all_s), w0()), hyp("g", &c)));
    let ex_s_and_a = Formula::exists("x", Formula::and(s_of(x()), a.clone()));
    let ex_s_and_b = Formula::exists("x", Formula::and(s_of(x()), b.clone()));

    vec![
        entry("top", Proof::top_int(), vec![], vec![a.clone()]),
        entry("theory-assumption", hyp("s", &ab), vec![ab.clone()], vec![c.clone()]),
        entry("context-assumption", hyp("h", &a), vec![], vec![a.clone(), b.clone()]),
        entry(
            "and-elim",
            Proof::and_elim_l(hyp("h", &Formula::and(a.clone(), b.clone()))),
            vec![],
            vec![Formula::and(a.clone(), b.clone())],
        ),
        entry("and-int", Proof::and_int(hyp("h", &a), hyp("g", &b)), vec![], vec![a.clone(), b.clone()]),
        entry("int-trans", Proof::int_trans(hyp("h", &ab), hyp("g", &bc)), vec![bc.clone()], vec![ab.clone()]),
        entry(
            "cd",
            Proof::cd(hyp("h", &Formula::forall("x", Formula::or(a.clone(), s_of(x()))))),
            vec![],
            vec![Formula::forall("x", Formula::or(a.clone(), s_of(x())))],
        ),
        entry("or-elim-empty", swap(hyp("s", &a_or_b)), vec![a_or_b.clone()], vec![]),
        entry("or-elim-context", swap(hyp("h", &a_or_b)), vec![], vec![a_or_b.clone(), c.clone()]),
        entry("arrow-int-empty", Proof::arrow_int("h", a.clone(), hyp("h", &a)), vec![], vec![]),
        entry(
            "arrow-int-context",
            Proof::arrow_int("h", a.clone(), Proof::and_int(hyp("h", &a), hyp("g", &b))),
            vec![],
            vec![b.clone()],
        ),
        entry("detour", Proof::detour(hyp("h", &a), hyp("s", &ab)), vec![ab.clone()], vec![a.clone()]),
        entry(
            "detour-chain",
            Proof::detour(hyp("h", &a), Proof::int_trans(hyp("s", &ab), hyp("t", &bc))),
            vec![ab.clone(), bc.clone()],
            vec![a.clone()],
        ),
        entry(
            "detour-under-arrow",
            Proof::arrow_int("h", a.clone(), Proof::and_int(Proof::detour(hyp("h", &a), hyp("s", &ab)), hyp("g", &c))),
            vec![ab.clone()],
            vec![c.clone()],
        ),
        entry("forall-int", gen_with_c.clone(), vec![], vec![all_s.clone(), c.clone()]),
        entry("forall-int-trimmed", gen_with_c, vec![], vec![all_s.clone(), c.clone(), b.clone()]),
        entry(
            "forall-int-closed",
            Proof::forall_int(
                0,
                Formula::forall("x", Formula::arrow(s_of(x()), s_of(x()))),
                Proof::arrow_int("h", s_of(w0()), hyp("h", &s_of(w0()))),
            ),
            vec![],
            vec![a.clone()],
        ),
        entry(
            "exists-elim-empty",
            Proof::exists_elim(
                0,
                "k",
                hyp("h", &ex_s_and_a),
                Proof::and_elim_r(hyp("k", &Formula::and(s_of(w0()), a.clone()))),
            ),
            vec![],
            vec![ex_s_and_a.clone()],
        ),
        entry(
            "exists-elim-context",
            Proof::exists_elim(
                0,
                "k",
                hyp("h", &ex_s),
                Proof::exists_int(ex_s_and_b.clone(), w0(), Proof::and_int(hyp("k", &s_of(w0())), hyp("g", &b))),
            ),
            vec![],
            vec![ex_s.clone(), b.clone()],
        ),
        entry(
            "exists-elim-theory",
            Proof::exists_elim(
                0,
                "k",
                hyp("s", &ex_s),
                Proof::exists_int(ex_s_and_b, w0(), Proof::and_int(hyp("k", &s_of(w0())), hyp("g", &b))),
            ),
            vec![ex_s],
            vec![b.clone()],
        ),
    ]
}

/// Rules exercised by the corpus, embedded proofs included.
pub fn corpus_rules() -> alloc::collections::BTreeSet<Rule> {
    script_corpus().values().flat_map(|s| s.proof.rules()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::{check_proof, check_relative_proof};
    use alloc::string::ToString;

    #[test]
    fn every_script_checks() {
        let sig = corpus_signature();
        for (name, s) in script_corpus() {
            let r = match &s.sigma {
                None => check_proof(&s.proof, &sig),
                Some(sigma) => check_relative_proof(&s.proof, sigma, &sig),
            };
            assert!(r.is_ok(), "{name}: {}", r.unwrap_err());
        }
    }

    #[test]
    fn family_checks_and_transforms() {
        use crate::proofs::{relative_deduction_traced, RdCase};
        let sig = corpus_signature();
        let mut cases = alloc::collections::BTreeSet::new();
        for e in relative_family(&f("P"), &f("Q"), &f("R")) {
            check_relative_proof(&e.proof, &e.sigma_prime, &sig).unwrap_or_else(|err| panic!("{}: {err}", e.name));
            let t = relative_deduction_traced(&e.proof, &e.sigma_prime, &e.gamma, &sig)
                .unwrap_or_else(|err| panic!("{}: {err}", e.name));
            cases.extend(t.cases);
        }
        assert_eq!(cases.len(), RdCase::ALL.len(), "{cases:?}");
    }

    #[test]
    fn corpus_covers_every_rule() {
        assert_eq!(corpus_rules().len(), Rule::ALL.len());
    }

    #[test]
    fn template_conclusions() {
        let sig = corpus_signature();
        let d = check_proof(&distribution(&f("P"), &f("Q"), &f("R")), &sig).unwrap();
        assert_eq!(d.conclusion.to_string(), "(P & Q) | (P & R)");
        assert_eq!(d.open_formulas(), vec![f("P & (Q | R)")]);
        let e = check_proof(&infinite_distribution(&f("P"), "x", &s_of(x())), &sig).unwrap();
        assert_eq!(e.conclusion, f("exists x. (P & S(x))"));
        assert_eq!(e.open_formulas(), vec![f("P & exists x. S(x)")]);
        let c = check_proof(&cd_consequence(&f("P"), "x", &s_of(x())), &sig).unwrap();
        assert_eq!(c.conclusion, f("top -> P | forall x. (top -> S(x))"));
        assert_eq!(c.open_formulas(), vec![f("forall x. (top -> P | S(x))")]);
    }
}
