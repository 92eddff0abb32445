use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{FreshnessSite, Judgment, Proof, ProofError, ProofErrorKind, Rule};
use crate::syntax::{alpha_eq, match_instance, subst_closed, Formula, Signature, Term};

/// An open assumption occurrence. `unsafe_` marks occurrences inside an
/// embedded detour proof.
#[derive(Clone, Debug)]
pub(crate) struct Occ {
    pub label: String,
    pub formula: Formula,
    pub unsafe_: bool,
}

/// Checks a proof of the plain calculus. `Detour` is rejected.
pub fn check_proof(p: &Proof, sig: &Signature) -> Result<Judgment, ProofError> {
    let occs = Kernel { sig, sigma: None }.check(p, &mut Vec::new())?;
    Ok(judgment(p, occs))
}

/// Checks a proof of the calculus relative to `sigma`: `Detour` is admitted
/// when its embedded proof is a plain proof whose open assumptions lie in
/// `sigma`; those assumptions become unsafe occurrences.
pub fn check_relative_proof(p: &Proof, sigma: &[Formula], sig: &Signature) -> Result<Judgment, ProofError> {
    let occs = Kernel { sig, sigma: Some(sigma) }.check(p, &mut Vec::new())?;
    Ok(judgment(p, occs))
}

pub(crate) fn open_occurrences(p: &Proof, sigma: &[Formula], sig: &Signature) -> Result<Vec<Occ>, ProofError> {
    Kernel { sig, sigma: Some(sigma) }.check(p, &mut Vec::new())
}

fn judgment(p: &Proof, occs: Vec<Occ>) -> Judgment {
    let mut open: Vec<(String, Formula)> = occs.iter().map(|o| (o.label.clone(), o.formula.clone())).collect();
    let mut unsafe_: Vec<(String, Formula)> =
        occs.into_iter().filter(|o| o.unsafe_).map(|o| (o.label, o.formula)).collect();
    open.sort();
    open.dedup();
    unsafe_.sort();
    unsafe_.dedup();
    Judgment { conclusion: p.conclusion.clone(), open, unsafe_ }
}

struct Kernel<'a> {
    sig: &'a Signature,
    sigma: Option<&'a [Formula]>,
}

fn err(path: &[usize], kind: ProofErrorKind) -> ProofError {
    ProofError { path: path.to_vec(), kind: Box::new(kind) }
}

impl Kernel<'_> {
    fn check(&self, p: &Proof, path: &mut Vec<usize>) -> Result<Vec<Occ>, ProofError> {
        self.check_node_shape(p, path)?;
        let mut kids = Vec::with_capacity(p.children.len());
        for (i, c) in p.children.iter().enumerate() {
            path.push(i);
            let r = if p.rule == Rule::Detour && i == 1 { self.check_embedded(c, path) } else { self.check(c, path) };
            path.pop();
            kids.push(r?);
        }
        self.apply(p, kids, path)
    }

    fn check_embedded(&self, p: &Proof, path: &mut Vec<usize>) -> Result<Vec<Occ>, ProofError> {
        let sigma = self.sigma.unwrap_or(&[]);
        let mut occs = Kernel { sig: self.sig, sigma: None }.check(p, path)?;
        for o in &mut occs {
            if !sigma.iter().any(|s| alpha_eq(s, &o.formula)) {
                return Err(err(
                    path,
                    ProofErrorKind::DetourPremiseNotInSigma { label: o.label.clone(), formula: o.formula.clone() },
                ));
            }
            o.unsafe_ = true;
        }
        Ok(occs)
    }

    /// Conditions that only look at the node itself.
    fn check_node_shape(&self, p: &Proof, path: &[usize]) -> Result<(), ProofError> {
        let rule = p.rule;
        if rule == Rule::Detour && self.sigma.is_none() {
            return Err(err(path, ProofErrorKind::DetourNotAllowed));
        }
        if p.children.len() != rule.premises() {
            return Err(err(path, ProofErrorKind::Arity { rule, expected: rule.premises(), found: p.children.len() }));
        }
        if !p.conclusion.is_sentence() {
            return Err(err(path, ProofErrorKind::NotSentence(p.conclusion.clone())));
        }
        self.sig.check_formula(&p.conclusion).map_err(|e| err(path, ProofErrorKind::Signature(e)))?;

        let wants_label = rule == Rule::Assume || rule.discharges();
        if p.label.is_some() && !wants_label {
            return Err(err(path, ProofErrorKind::UnexpectedAnnotation { rule, annotation: "label" }));
        }
        if rule == Rule::Assume && p.label.is_none() {
            return Err(err(path, ProofErrorKind::MissingLabel(rule)));
        }
        let wants_witness = matches!(rule, Rule::ForallInt | Rule::ExistsElim);
        match (wants_witness, p.witness) {
            (true, None) => return Err(err(path, ProofErrorKind::MissingWitness(rule))),
            (false, Some(_)) => {
                return Err(err(path, ProofErrorKind::UnexpectedAnnotation { rule, annotation: "witness" }))
            }
            _ => {}
        }
        if let Some(t) = &p.term {
            if !matches!(rule, Rule::ForallElim | Rule::ExistsInt) {
                return Err(err(path, ProofErrorKind::UnexpectedAnnotation { rule, annotation: "term" }));
            }
            if !t.is_closed() {
                return Err(err(path, ProofErrorKind::TermNotClosed(t.clone())));
            }
            self.sig.check_term(t).map_err(|e| err(path, ProofErrorKind::Signature(e)))?;
        }
        Ok(())
    }

    fn apply(&self, p: &Proof, mut kids: Vec<Vec<Occ>>, path: &[usize]) -> Result<Vec<Occ>, ProofError> {
        let rule = p.rule;
        let c = &p.conclusion;
        let prem = |i: usize| &p.children[i].conclusion;
        let mismatch = |expected: String, found: &Formula| {
            err(path, ProofErrorKind::Schema { rule, expected, found: found.clone() })
        };
        let concat = |kids: Vec<Vec<Occ>>| kids.into_iter().flatten().collect::<Vec<_>>();

        match rule {
            Rule::Assume => {
                let label = p.label.clone().unwrap_or_default();
                Ok(alloc::vec![Occ { label, formula: c.clone(), unsafe_: false }])
            }
            Rule::TopInt => {
                if *c != Formula::Top {
                    return Err(mismatch("`top`".into(), c));
                }
                Ok(Vec::new())
            }
            Rule::BotElim => {
                if *prem(0) != Formula::Bot {
                    return Err(mismatch("a premise `bot`".into(), prem(0)));
                }
                Ok(concat(kids))
            }
            Rule::AndInt => {
                let ok = c.as_and().is_some_and(|(a, b)| alpha_eq(a, prem(0)) && alpha_eq(b, prem(1)));
                if !ok {
                    return Err(mismatch(format!("`({}) & ({})`", prem(0), prem(1)), c));
                }
                Ok(concat(kids))
            }
            Rule::AndElimL | Rule::AndElimR => {
                let Some((a, b)) = prem(0).as_and() else {
                    return Err(mismatch("a conjunction as premise".into(), prem(0)));
                };
                let want = if rule == Rule::AndElimL { a } else { b };
                if !alpha_eq(want, c) {
                    return Err(mismatch(format!("`{want}`"), c));
                }
                Ok(concat(kids))
            }
            Rule::OrIntL | Rule::OrIntR => {
                let ok = c.as_or().is_some_and(|(a, b)| {
                    let side = if rule == Rule::OrIntL { a } else { b };
                    alpha_eq(side, prem(0))
                });
                if !ok {
                    return Err(mismatch(format!("a disjunction with disjunct `{}`", prem(0)), c));
                }
                Ok(concat(kids))
            }
            Rule::OrElim => {
                let Some((a, b)) = prem(0).as_or() else {
                    return Err(mismatch("a disjunction as first premise".into(), prem(0)));
                };
                for i in [1, 2] {
                    if !alpha_eq(prem(i), c) {
                        return Err(mismatch(format!("`{}` as premise {i}", c), prem(i)));
                    }
                }
                let right = kids.pop().unwrap_or_default();
                let left = kids.pop().unwrap_or_default();
                let mut out = kids.pop().unwrap_or_default();
                out.extend(self.discharge(p, left, a, path, false)?);
                out.extend(self.discharge(p, right, b, path, false)?);
                Ok(out)
            }
            Rule::ArrowInt => {
                let Some((a, b)) = c.as_arrow() else {
                    return Err(mismatch("an implication".into(), c));
                };
                if !alpha_eq(b, prem(0)) {
                    return Err(mismatch(format!("a premise `{b}`"), prem(0)));
                }
                let body = kids.pop().unwrap_or_default();
                self.discharge(p, body, a, path, false)
            }
            Rule::IntTrans => {
                let ok = match (prem(0).as_arrow(), prem(1).as_arrow(), c.as_arrow()) {
                    (Some((a, b)), Some((b2, g)), Some((a2, g2))) => {
                        alpha_eq(b, b2) && alpha_eq(a, a2) && alpha_eq(g, g2)
                    }
                    _ => false,
                };
                if !ok {
                    return Err(mismatch("premises `a -> b`, `b -> c` and conclusion `a -> c`".into(), c));
                }
                Ok(concat(kids))
            }
            Rule::IntAndInt => {
                let ok = match (prem(0).as_arrow(), prem(1).as_arrow(), c.as_arrow()) {
                    (Some((a, b)), Some((a2, g)), Some((a3, bg))) => {
                        alpha_eq(a, a2)
                            && alpha_eq(a, a3)
                            && bg.as_and().is_some_and(|(b2, g2)| alpha_eq(b, b2) && alpha_eq(g, g2))
                    }
                    _ => false,
                };
                if !ok {
                    return Err(mismatch("premises `a -> b`, `a -> c` and conclusion `a -> b & c`".into(), c));
                }
                Ok(concat(kids))
            }
            Rule::IntOrElim => {
                let ok = match (prem(0).as_arrow(), prem(1).as_arrow(), c.as_arrow()) {
                    (Some((a, g)), Some((b, g2)), Some((ab, g3))) => {
                        alpha_eq(g, g2)
                            && alpha_eq(g, g3)
                            && ab.as_or().is_some_and(|(a2, b2)| alpha_eq(a, a2) && alpha_eq(b, b2))
                    }
                    _ => false,
                };
                if !ok {
                    return Err(mismatch("premises `a -> c`, `b -> c` and conclusion `a | b -> c`".into(), c));
                }
                Ok(concat(kids))
            }
            Rule::IntForallInt => {
                let expected = prem(0).as_forall().and_then(|(v, body)| {
                    body.as_arrow().map(|(a, b)| Formula::arrow(a.clone(), Formula::forall(v, b.clone())))
                });
                match expected {
                    Some(e) if alpha_eq(&e, c) => Ok(concat(kids)),
                    Some(e) => Err(mismatch(format!("`{e}` with the variable not free in the antecedent"), c)),
                    None => Err(mismatch("a premise `forall v. (a -> b)`".into(), prem(0))),
                }
            }
            Rule::IntExistsElim => {
                let expected = prem(0).as_forall().and_then(|(v, body)| {
                    body.as_arrow().map(|(a, b)| Formula::arrow(Formula::exists(v, a.clone()), b.clone()))
                });
                match expected {
                    Some(e) if alpha_eq(&e, c) => Ok(concat(kids)),
                    Some(e) => Err(mismatch(format!("`{e}` with the variable not free in the consequent"), c)),
                    None => Err(mismatch("a premise `forall v. (a -> b)`".into(), prem(0))),
                }
            }
            Rule::CD => {
                let expected = prem(0).as_forall().and_then(|(v, body)| {
                    body.as_or().map(|(a, b)| Formula::or(a.clone(), Formula::forall(v, b.clone())))
                });
                match expected {
                    Some(e) if alpha_eq(&e, c) => Ok(concat(kids)),
                    Some(e) => Err(mismatch(format!("`{e}` with the variable not free in the left disjunct"), c)),
                    None => Err(mismatch("a premise `forall v. (a | b)`".into(), prem(0))),
                }
            }
            Rule::ForallElim => {
                let Some((v, body)) = prem(0).as_forall() else {
                    return Err(mismatch("a universal premise".into(), prem(0)));
                };
                if !is_instance(body, v, c, p.term.as_ref()) {
                    return Err(mismatch(format!("an instance of `{}`", prem(0)), c));
                }
                Ok(concat(kids))
            }
            Rule::ExistsInt => {
                let Some((v, body)) = c.as_exists() else {
                    return Err(mismatch("an existential".into(), c));
                };
                if !is_instance(body, v, prem(0), p.term.as_ref()) {
                    return Err(mismatch(format!("an instance of `{c}` as premise"), prem(0)));
                }
                Ok(concat(kids))
            }
            Rule::ForallInt => {
                let i = p.witness.unwrap_or_default();
                let Some((v, body)) = c.as_forall() else {
                    return Err(mismatch("a universal".into(), c));
                };
                if c.contains_witness(i) {
                    return Err(err(path, ProofErrorKind::Freshness { witness: i, site: FreshnessSite::Conclusion }));
                }
                let inst = subst_closed(body, v, &Term::Witness(i));
                if !alpha_eq(&inst, prem(0)) {
                    return Err(mismatch(format!("a premise `{inst}`"), prem(0)));
                }
                let out = concat(kids);
                fresh_in(&out, i, path)?;
                Ok(out)
            }
            Rule::ExistsElim => {
                let i = p.witness.unwrap_or_default();
                let Some((v, body)) = prem(0).as_exists() else {
                    return Err(mismatch("an existential as first premise".into(), prem(0)));
                };
                if !alpha_eq(prem(1), c) {
                    return Err(mismatch(format!("`{c}` as second premise"), prem(1)));
                }
                if prem(0).contains_witness(i) {
                    return Err(err(path, ProofErrorKind::Freshness { witness: i, site: FreshnessSite::Matrix }));
                }
                if c.contains_witness(i) {
                    return Err(err(path, ProofErrorKind::Freshness { witness: i, site: FreshnessSite::Conclusion }));
                }
                let inst = subst_closed(body, v, &Term::Witness(i));
                let right = kids.pop().unwrap_or_default();
                let mut out = kids.pop().unwrap_or_default();
                let right = self.discharge(p, right, &inst, path, true)?;
                fresh_in(&right, i, path)?;
                out.extend(right);
                Ok(out)
            }
            Rule::Detour => {
                let ok = prem(1).as_arrow().is_some_and(|(a, b)| alpha_eq(a, prem(0)) && alpha_eq(b, c));
                if !ok {
                    return Err(mismatch(format!("an embedded proof of `({}) -> ({c})`", prem(0)), prem(1)));
                }
                Ok(concat(kids))
            }
        }
    }

    /// Removes the occurrences labelled by `p.label`, each of which must be `expected`.
    fn discharge(
        &self,
        p: &Proof,
        occs: Vec<Occ>,
        expected: &Formula,
        path: &[usize],
        witness_assumption: bool,
    ) -> Result<Vec<Occ>, ProofError> {
        let Some(label) = &p.label else { return Ok(occs) };
        let mut kept = Vec::with_capacity(occs.len());
        for o in occs {
            if o.label != *label {
                kept.push(o);
                continue;
            }
            if !alpha_eq(&o.formula, expected) {
                return Err(err(
                    path,
                    ProofErrorKind::DischargeMismatch {
                        label: label.clone(),
                        expected: expected.clone(),
                        found: o.formula,
                    },
                ));
            }
            if o.unsafe_ {
                let (label, formula) = (label.clone(), o.formula);
                let kind = if witness_assumption {
                    ProofErrorKind::UnsafeWitnessAssumption { label, formula }
                } else {
                    ProofErrorKind::UnsafeDischarge { label, formula }
                };
                return Err(err(path, kind));
            }
        }
        Ok(kept)
    }
}

fn is_instance(matrix: &Formula, v: &str, instance: &Formula, term: Option<&Term>) -> bool {
    match term {
        Some(t) => alpha_eq(&subst_closed(matrix, v, t), instance),
        None => match_instance(matrix, v, instance).is_ok(),
    }
}

fn fresh_in(occs: &[Occ], i: u32, path: &[usize]) -> Result<(), ProofError> {
    match occs.iter().find(|o| o.formula.contains_witness(i)) {
        Some(o) => Err(err(
            path,
            ProofErrorKind::Freshness { witness: i, site: FreshnessSite::Assumption(o.label.to_string()) },
        )),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use alloc::vec;

    fn sig() -> Signature {
        Signature::new()
            .with_relation("P", 0)
            .with_relation("Q", 0)
            .with_relation("R", 0)
            .with_relation("S", 1)
            .with_constant("c")
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    #[test]
    fn assume_is_open() {
        let j = check_proof(&Proof::assume("h", f("P")), &sig()).unwrap();
        assert_eq!(j.open, vec![("h".to_string(), f("P"))]);
        assert!(j.unsafe_.is_empty());
    }

    #[test]
    fn identity_discharges() {
        let p = Proof::arrow_int("h", f("P"), Proof::assume("h", f("P")));
        let j = check_proof(&p, &sig()).unwrap();
        assert_eq!(j.conclusion, f("P -> P"));
        assert!(j.open.is_empty());
    }

    #[test]
    fn discharge_mismatch() {
        let p = Proof::arrow_int("h", f("Q"), Proof::assume("h", f("P")));
        let e = check_proof(&p, &sig()).unwrap_err();
        assert!(matches!(*e.kind, ProofErrorKind::DischargeMismatch { .. }));
        assert!(e.path.is_empty());
    }

    #[test]
    fn forall_int_rejects_witness_in_assumption() {
        // Assume S(@0) and generalise over @0.
        let s0 = Formula::atom("S", vec![Term::Witness(0)]);
        let p = Proof::forall_int(0, f("forall x. S(x)"), Proof::assume("h", s0));
        let e = check_proof(&p, &sig()).unwrap_err();
        assert_eq!(*e.kind, ProofErrorKind::Freshness { witness: 0, site: FreshnessSite::Assumption("h".into()) });
    }

    #[test]
    fn exists_elim_rejects_witness_in_conclusion() {
        let s0 = Formula::atom("S", vec![Term::Witness(0)]);
        let p = Proof::exists_elim(0, "k", Proof::assume("h", f("exists x. S(x)")), Proof::assume("k", s0));
        let e = check_proof(&p, &sig()).unwrap_err();
        assert_eq!(*e.kind, ProofErrorKind::Freshness { witness: 0, site: FreshnessSite::Conclusion });
    }

    #[test]
    fn forall_elim_without_term_annotation() {
        let mut p = Proof::forall_elim(Proof::assume("h", f("forall x. S(x)")), Term::constant("c"));
        p.term = None;
        assert_eq!(check_proof(&p, &sig()).unwrap().conclusion, f("S(c)"));
        p.conclusion = f("P");
        assert!(check_proof(&p, &sig()).is_err());
    }

    #[test]
    fn detour_needs_relative_kernel() {
        let p = Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q")));
        let e = check_proof(&p, &sig()).unwrap_err();
        assert_eq!(*e.kind, ProofErrorKind::DetourNotAllowed);
        let j = check_relative_proof(&p, &[f("P -> Q")], &sig()).unwrap();
        assert_eq!(j.conclusion, f("Q"));
        assert_eq!(j.unsafe_, vec![("s".to_string(), f("P -> Q"))]);
        assert_eq!(j.safe_formulas(), vec![f("P")]);
    }

    #[test]
    fn detour_premise_must_be_in_sigma() {
        let p = Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q")));
        let e = check_relative_proof(&p, &[], &sig()).unwrap_err();
        assert!(matches!(*e.kind, ProofErrorKind::DetourPremiseNotInSigma { .. }));
        assert_eq!(e.path, vec![1]);
    }

    #[test]
    fn unsafe_occurrence_cannot_be_discharged() {
        // The only `s` sits in the embedded proof.
        let body = Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q")));
        let p = Proof::arrow_int("s", f("P -> Q"), body);
        let e = check_relative_proof(&p, &[f("P -> Q")], &sig()).unwrap_err();
        assert!(matches!(*e.kind, ProofErrorKind::UnsafeDischarge { .. }));
    }

    #[test]
    fn safe_occurrence_next_to_detour_discharges() {
        let body = Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q")));
        let p = Proof::arrow_int("h", f("P"), body);
        let j = check_relative_proof(&p, &[f("P -> Q")], &sig()).unwrap();
        assert_eq!(j.conclusion, f("P -> Q"));
        assert_eq!(j.open, j.unsafe_);
    }

    #[test]
    fn witness_assumption_may_not_be_unsafe() {
        let s0 = Formula::atom("S", vec![Term::Witness(0)]);
        let ex = f("exists x. S(x)");
        // The embedded proof assumes S(@0) under the witness label.
        let emb = Proof::arrow_int_vacuous(
            f("P"),
            Proof::exists_int(ex.clone(), Term::Witness(0), Proof::assume("k", s0.clone())),
        );
        let right = Proof::detour(Proof::assume("h", f("P")), emb);
        let p = Proof::exists_elim(0, "k", Proof::assume("e", ex), right);
        let e = check_relative_proof(&p, &[s0], &sig()).unwrap_err();
        assert!(matches!(*e.kind, ProofErrorKind::UnsafeWitnessAssumption { .. }));
    }

    #[test]
    fn arity_and_annotations() {
        let mut p = Proof::top_int();
        p.children.push(Proof::top_int());
        assert!(matches!(*check_proof(&p, &sig()).unwrap_err().kind, ProofErrorKind::Arity { .. }));
        let p = Proof::top_int().with_witness(1);
        assert!(matches!(
            *check_proof(&p, &sig()).unwrap_err().kind,
            ProofErrorKind::UnexpectedAnnotation { annotation: "witness", .. }
        ));
    }
}
