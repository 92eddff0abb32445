#![allow(dead_code)]

use std::collections::BTreeSet;

use bql_core::semantics::Elem;
use bql_core::{Formula, KripkeModel, Signature, Term};
use proptest::prelude::*;

/// `P`, `Q` nullary, `S` unary, constant `c`.
pub fn sig() -> Signature {
    Signature::new().with_relation("P", 0).with_relation("Q", 0).with_relation("S", 1).with_constant("c")
}

fn formula_in(depth: u32, scope: Vec<&'static str>, positive: bool) -> BoxedStrategy<Formula> {
    let mut terms: Vec<Term> = vec![Term::constant("c")];
    terms.extend(scope.iter().map(|v| Term::var(v)));
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bot),
        Just(Formula::prop("P")),
        Just(Formula::prop("Q")),
        proptest::sample::select(terms).prop_map(|t| Formula::atom("S", vec![t])),
    ]
    .boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = formula_in(depth - 1, scope.clone(), positive);
    let kinds = if positive { 1 } else { 3 };
    let binary = (0..kinds, sub.clone(), sub).prop_map(|(k, a, b)| match k {
        0 => Formula::and(a, b),
        1 => Formula::or(a, b),
        _ => Formula::arrow(a, b),
    });
    let quant = proptest::sample::select(vec!["x", "y"]).prop_flat_map(move |v| {
        let mut inner = scope.clone();
        if !inner.contains(&v) {
            inner.push(v);
        }
        (any::<bool>(), formula_in(depth - 1, inner, positive)).prop_map(move |(all, body)| {
            if all || positive {
                Formula::forall(v, body)
            } else {
                Formula::exists(v, body)
            }
        })
    });
    prop_oneof![1 => leaf, 2 => binary, 1 => quant].boxed()
}

/// Sentences over [`sig`] of depth at most `depth`.
pub fn sentence(depth: u32) -> BoxedStrategy<Formula> {
    formula_in(depth, Vec::new(), false)
}

/// Formulas whose free variables are among `x` and `y`.
pub fn open_formula(depth: u32) -> BoxedStrategy<Formula> {
    formula_in(depth, vec!["x", "y"], false)
}

/// Sentences without `->`, `|` and `exists`.
pub fn positive_sentence(depth: u32) -> BoxedStrategy<Formula> {
    formula_in(depth, Vec::new(), true)
}

/// Valid models over [`sig`]: random order closed transitively, random
/// atomic facts closed upward.
pub fn model(max_worlds: usize, max_domain: usize) -> BoxedStrategy<KripkeModel> {
    (1..=max_domain).prop_flat_map(move |d| (0..d).prop_flat_map(move |c| model_over(max_worlds, d, c))).boxed()
}

/// Two models sharing domain size and constant, each with a chosen world.
pub fn pointed_pair(
    max_worlds: usize,
    max_domain: usize,
) -> BoxedStrategy<((KripkeModel, usize), (KripkeModel, usize))> {
    let pointed = |m: KripkeModel| {
        let n = m.worlds.len();
        (Just(m), 0..n)
    };
    (1..=max_domain)
        .prop_flat_map(move |d| (0..d).prop_map(move |c| (d, c)))
        .prop_flat_map(move |(d, c)| {
            (model_over(max_worlds, d, c).prop_flat_map(pointed), model_over(max_worlds, d, c).prop_flat_map(pointed))
        })
        .boxed()
}

fn model_over(max_worlds: usize, d: usize, c: usize) -> BoxedStrategy<KripkeModel> {
    (1..=max_worlds)
        .prop_flat_map(move |n| {
            (
                Just((n, d)),
                proptest::collection::vec(any::<bool>(), n * n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), d), n),
                Just(c),
            )
        })
        .prop_map(|((n, d), edges, p, s, c)| {
            let mut m =
                KripkeModel::new((0..n).map(|i| format!("w{i}")).collect(), (0..d).map(|i| format!("e{i}")).collect());
            for i in 0..n {
                for j in 0..n {
                    if edges[i * n + j] {
                        m.order.insert((i, j));
                    }
                }
            }
            m.close_transitively();
            m.consts.insert("c".into(), c);
            for w in 0..n {
                if p[w] {
                    m.insert(w, "P", vec![]);
                }
                for (e, &on) in s[w].iter().enumerate() {
                    if on {
                        m.insert(w, "S", vec![e]);
                    }
                }
            }
            upward_close(&mut m);
            m
        })
        .boxed()
}

pub fn upward_close(m: &mut KripkeModel) {
    let order: Vec<(usize, usize)> = m.order.iter().copied().collect();
    for (a, b) in order {
        let facts: Vec<(String, Vec<Elem>)> =
            m.rels[a].iter().flat_map(|(r, ts)| ts.iter().map(move |t| (r.clone(), t.clone()))).collect();
        for (r, t) in facts {
            m.insert(b, &r, t);
        }
    }
}

/// Direct transcription of the forcing clauses, no memoization.
pub fn reference_forces(m: &KripkeModel, w: usize, f: &Formula, env: &mut Vec<(String, Elem)>) -> bool {
    fn term(m: &KripkeModel, t: &Term, env: &[(String, Elem)]) -> Elem {
        match t {
            Term::Var(v) => env.iter().rev().find(|(x, _)| x == v).expect("bound").1,
            Term::Const(c) => m.consts[c],
            Term::Witness(i) => m.consts[&format!("@{i}")],
            Term::App(g, args) => {
                let vals: Vec<Elem> = args.iter().map(|a| term(m, a, env)).collect();
                m.funcs[g].rows[&vals]
            }
        }
    }
    match f {
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Atom(r, args) => {
            let vals: Vec<Elem> = args.iter().map(|a| term(m, a, env)).collect();
            m.rels[w].get(r).is_some_and(|ts| ts.contains(&vals))
        }
        Formula::And(a, b) => reference_forces(m, w, a, env) && reference_forces(m, w, b, env),
        Formula::Or(a, b) => reference_forces(m, w, a, env) || reference_forces(m, w, b, env),
        Formula::Arrow(a, b) => {
            let succ: BTreeSet<usize> = m.order.iter().filter(|(x, _)| *x == w).map(|(_, u)| *u).collect();
            succ.into_iter().all(|u| !reference_forces(m, u, a, env) || reference_forces(m, u, b, env))
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let all = matches!(f, Formula::Forall(..));
            let mut results = (0..m.domain.len()).map(|e| {
                env.push((v.clone(), e));
                let r = reference_forces(m, w, body, env);
                env.pop();
                r
            });
            if all {
                results.all(|r| r)
            } else {
                results.any(|r| r)
            }
        }
    }
}
