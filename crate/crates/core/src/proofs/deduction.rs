//! Relative deduction: a relative proof of `phi` from `Gamma` (with the theory
//! `Sigma'`) becomes a plain proof of `conj(Gamma) -> phi` whose open
//! assumptions all lie in `Sigma'`.
//!
//! The transformation recurses with a context: a right-nested conjunction `A`
//! of the formulas currently playing the role of `Gamma`, each reachable from
//! `A` by a path of conjunction eliminations. Every step returns a plain
//! proof of `A -> conclusion`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::kernel::{check_proof, check_relative_proof, open_occurrences};
use super::{Proof, ProofError, Rule};
use crate::syntax::{alpha_eq, fresh_witness, subst_closed, Formula, Signature, Term};

/// The cases of the transformation, for coverage accounting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RdCase {
    Top,
    TheoryAssumption,
    ContextAssumption,
    OnePremise,
    TwoPremise,
    OrElimEmpty,
    OrElimContext,
    ArrowIntEmpty,
    ArrowIntContext,
    Detour,
    ForallInt,
    ExistsElimEmpty,
    ExistsElimContext,
}

impl RdCase {
    pub const ALL: [RdCase; 13] = [
        RdCase::Top,
        RdCase::TheoryAssumption,
        RdCase::ContextAssumption,
        RdCase::OnePremise,
        RdCase::TwoPremise,
        RdCase::OrElimEmpty,
        RdCase::OrElimContext,
        RdCase::ArrowIntEmpty,
        RdCase::ArrowIntContext,
        RdCase::Detour,
        RdCase::ForallInt,
        RdCase::ExistsElimEmpty,
        RdCase::ExistsElimContext,
    ];
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DeductionError {
    #[error("input proof rejected: {0}")]
    Check(ProofError),
    #[error("open assumption `{label}`: `{formula}` is in neither the theory nor the context")]
    Uncovered { label: String, formula: Formula },
    #[error("unsafe assumption `{label}`: `{formula}` is not in the theory")]
    UnsafeOutsideTheory { label: String, formula: Formula },
    #[error("transformed proof rejected: {0}")]
    Output(ProofError),
    #[error("transformed proof concludes `{found}`, expected `{expected}`")]
    WrongConclusion { expected: Formula, found: Formula },
}

/// Output of [`relative_deduction_traced`].
#[derive(Clone, Debug)]
pub struct Transformed {
    pub proof: Proof,
    pub cases: BTreeSet<RdCase>,
}

/// Canonical conjunction: `top` for the empty list, otherwise the distinct
/// members sorted by printed form and nested to the right.
pub fn conj(gamma: &[Formula]) -> Formula {
    Ctx::of(gamma).ante
}

/// See the module documentation. `p` is checked against the relative kernel
/// with theory `sigma_prime`; its open assumptions must lie in
/// `sigma_prime ∪ gamma` and its unsafe ones in `sigma_prime`.
pub fn relative_deduction(
    p: &Proof,
    sigma_prime: &[Formula],
    gamma: &[Formula],
    sig: &Signature,
) -> Result<Proof, DeductionError> {
    relative_deduction_traced(p, sigma_prime, gamma, sig).map(|t| t.proof)
}

/// [`relative_deduction`], also reporting which cases fired.
pub fn relative_deduction_traced(
    p: &Proof,
    sigma_prime: &[Formula],
    gamma: &[Formula],
    sig: &Signature,
) -> Result<Transformed, DeductionError> {
    relative_deduction_under(p, sigma_prime, sigma_prime, gamma, sig)
}

/// [`relative_deduction_traced`] for a proof whose detours are checked
/// against `sigma` rather than `sigma_prime`. Unsafe assumptions must still
/// lie in `sigma_prime`.
pub fn relative_deduction_under(
    p: &Proof,
    sigma: &[Formula],
    sigma_prime: &[Formula],
    gamma: &[Formula],
    sig: &Signature,
) -> Result<Transformed, DeductionError> {
    let j = check_relative_proof(p, sigma, sig).map_err(DeductionError::Check)?;
    let in_theory = |f: &Formula| sigma_prime.iter().any(|s| alpha_eq(s, f));
    for (label, formula) in &j.unsafe_ {
        if !in_theory(formula) {
            return Err(DeductionError::UnsafeOutsideTheory { label: label.clone(), formula: formula.clone() });
        }
    }
    for (label, formula) in &j.open {
        if !in_theory(formula) && !gamma.iter().any(|g| alpha_eq(g, formula)) {
            return Err(DeductionError::Uncovered { label: label.clone(), formula: formula.clone() });
        }
    }

    let mut rd = Rd { sigma, sigma_prime, sig, labels: LabelGen { used: p.labels(), next: 0 }, cases: BTreeSet::new() };
    let ctx = Ctx::of(gamma);
    let proof = rd.go(p, &ctx)?;

    let out = check_proof(&proof, sig).map_err(DeductionError::Output)?;
    let expected = Formula::arrow(ctx.ante.clone(), p.conclusion.clone());
    if !alpha_eq(&out.conclusion, &expected) {
        return Err(DeductionError::WrongConclusion { expected, found: out.conclusion });
    }
    if let Some((label, formula)) = out.open.iter().find(|(_, f)| !in_theory(f)) {
        return Err(DeductionError::Uncovered { label: label.clone(), formula: formula.clone() });
    }
    Ok(Transformed { proof, cases: rd.cases })
}

/// `(phi & psi) | (phi & chi)` from the open assumption `h: phi & (psi | chi)`.
pub(crate) fn distribution_body(phi: &Formula, psi: &Formula, chi: &Formula, h: &str, k: &str) -> Proof {
    let prem = Formula::and(phi.clone(), Formula::or(psi.clone(), chi.clone()));
    let hyp = || Proof::assume(h, prem.clone());
    let left = Proof::or_int_l(
        Proof::and_int(Proof::and_elim_l(hyp()), Proof::assume(k, psi.clone())),
        Formula::and(phi.clone(), chi.clone()),
    );
    let right = Proof::or_int_r(
        Formula::and(phi.clone(), psi.clone()),
        Proof::and_int(Proof::and_elim_l(hyp()), Proof::assume(k, chi.clone())),
    );
    Proof::or_elim(k, Proof::and_elim_r(hyp()), left, right)
}

/// `phi & (psi | chi) -> (phi & psi) | (phi & chi)`.
pub(crate) fn distribution_with(phi: &Formula, psi: &Formula, chi: &Formula, h: &str, k: &str) -> Proof {
    let prem = Formula::and(phi.clone(), Formula::or(psi.clone(), chi.clone()));
    Proof::arrow_int(h, prem, distribution_body(phi, psi, chi, h, k))
}

/// `exists v. (phi & psi)` from the open assumption `h: phi & exists v. psi`;
/// the witness index is chosen fresh for `phi` and `psi`.
pub(crate) fn infinite_distribution_body(phi: &Formula, v: &str, psi: &Formula, h: &str, k: &str) -> Proof {
    let mut used = phi.witnesses();
    psi.collect_witnesses(&mut used);
    let j = fresh_witness(&used);
    let prem = Formula::and(phi.clone(), Formula::exists(v, psi.clone()));
    let hyp = || Proof::assume(h, prem.clone());
    let psi_j = subst_closed(psi, v, &Term::Witness(j));
    let target = Formula::exists(v, Formula::and(phi.clone(), psi.clone()));
    let body =
        Proof::exists_int(target, Term::Witness(j), Proof::and_int(Proof::and_elim_l(hyp()), Proof::assume(k, psi_j)));
    Proof::exists_elim(j, k, Proof::and_elim_r(hyp()), body)
}

/// `phi & exists v. psi -> exists v. (phi & psi)`.
pub(crate) fn infinite_distribution_with(phi: &Formula, v: &str, psi: &Formula, h: &str, k: &str) -> Proof {
    let prem = Formula::and(phi.clone(), Formula::exists(v, psi.clone()));
    Proof::arrow_int(h, prem, infinite_distribution_body(phi, v, psi, h, k))
}

struct LabelGen {
    used: BTreeSet<String>,
    next: usize,
}

impl LabelGen {
    fn fresh(&mut self) -> String {
        loop {
            let l = format!("rd{}", self.next);
            self.next += 1;
            if self.used.insert(l.clone()) {
                return l;
            }
        }
    }
}

/// A context: the antecedent `ante` and, for each member, its path of
/// conjunction projections (`false` = left, `true` = right).
#[derive(Clone, Debug)]
struct Ctx {
    ante: Formula,
    members: Vec<(Formula, Vec<bool>)>,
}

impl Ctx {
    fn empty() -> Ctx {
        Ctx { ante: Formula::Top, members: Vec::new() }
    }

    fn canonical(list: &[Formula]) -> Vec<Formula> {
        let mut keyed: Vec<(String, &Formula)> = list.iter().map(|f| (f.to_string(), f)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        keyed.into_iter().map(|(_, f)| f.clone()).collect()
    }

    fn of(list: &[Formula]) -> Ctx {
        let list = Ctx::canonical(list);
        let Some((last, init)) = list.split_last() else { return Ctx::empty() };
        let mut ante = last.clone();
        for f in init.iter().rev() {
            ante = Formula::and(f.clone(), ante);
        }
        let n = list.len();
        let members = list
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let mut path = alloc::vec![true; k];
                if k + 1 < n {
                    path.push(false);
                }
                (f.clone(), path)
            })
            .collect();
        Ctx { ante, members }
    }

    fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `A & f`, or just `f` when the context is empty.
    fn extend(&self, f: &Formula) -> Ctx {
        if self.is_empty() {
            return Ctx::of(core::slice::from_ref(f));
        }
        let mut members: Vec<(Formula, Vec<bool>)> = self
            .members
            .iter()
            .map(|(g, path)| {
                let mut p = alloc::vec![false];
                p.extend(path);
                (g.clone(), p)
            })
            .collect();
        members.push((f.clone(), alloc::vec![true]));
        Ctx { ante: Formula::and(self.ante.clone(), f.clone()), members }
    }

    fn find(&self, f: &Formula) -> Option<&[bool]> {
        self.members.iter().find(|(g, _)| alpha_eq(g, f)).map(|(_, p)| p.as_slice())
    }

    /// Applies the projections of `path` to a proof of the antecedent.
    fn project(path: &[bool], mut p: Proof) -> Proof {
        for &right in path {
            p = if right { Proof::and_elim_r(p) } else { Proof::and_elim_l(p) };
        }
        p
    }

    /// From a proof of this context's antecedent, a proof of `conj(list)`;
    /// every member of `list` must be a member of the context.
    fn rebuild(&self, list: &[Formula], from: &Proof) -> Proof {
        let get = |f: &Formula| Ctx::project(self.find(f).expect("member of the context"), from.clone());
        match list.split_first() {
            None => Proof::top_int(),
            Some((f, [])) => get(f),
            Some((f, rest)) => Proof::and_int(get(f), self.rebuild(rest, from)),
        }
    }
}

struct Rd<'a> {
    sigma: &'a [Formula],
    sigma_prime: &'a [Formula],
    sig: &'a Signature,
    labels: LabelGen,
    cases: BTreeSet<RdCase>,
}

impl Rd<'_> {
    /// `A -> A`.
    fn identity(&mut self, a: &Formula) -> Proof {
        let h = self.labels.fresh();
        Proof::arrow_int(h.clone(), a.clone(), Proof::assume(h, a.clone()))
    }

    /// Formulas of the safe open occurrences of `p` that belong to `ctx`,
    /// skipping occurrences labelled `skip`.
    fn context_opens(&self, p: &Proof, ctx: &Ctx, skip: Option<&str>) -> Result<Vec<Formula>, DeductionError> {
        let occs = open_occurrences(p, self.sigma, self.sig).map_err(DeductionError::Check)?;
        let found: Vec<Formula> = occs
            .into_iter()
            .filter(|o| !o.unsafe_ && Some(o.label.as_str()) != skip && ctx.find(&o.formula).is_some())
            .map(|o| o.formula)
            .collect();
        Ok(Ctx::canonical(&found))
    }

    /// `A -> conj(star)` by projections out of `A`.
    fn bridge(&mut self, ctx: &Ctx, star: &[Formula]) -> Proof {
        let h = self.labels.fresh();
        let body = ctx.rebuild(star, &Proof::assume(h.clone(), ctx.ante.clone()));
        Proof::arrow_int(h, ctx.ante.clone(), body)
    }

    fn go(&mut self, p: &Proof, ctx: &Ctx) -> Result<Proof, DeductionError> {
        let a = ctx.ante.clone();
        match p.rule {
            Rule::TopInt => {
                self.cases.insert(RdCase::Top);
                Ok(Proof::arrow_int_vacuous(a, Proof::top_int()))
            }
            Rule::Assume => {
                if let Some(path) = ctx.find(&p.conclusion) {
                    self.cases.insert(RdCase::ContextAssumption);
                    let path = path.to_vec();
                    let h = self.labels.fresh();
                    let body = Ctx::project(&path, Proof::assume(h.clone(), a.clone()));
                    Ok(Proof::arrow_int(h, a, body))
                } else if self.sigma_prime.iter().any(|s| alpha_eq(s, &p.conclusion)) {
                    self.cases.insert(RdCase::TheoryAssumption);
                    Ok(Proof::arrow_int_vacuous(a, p.clone()))
                } else {
                    Err(DeductionError::Uncovered {
                        label: p.label.clone().unwrap_or_default(),
                        formula: p.conclusion.clone(),
                    })
                }
            }
            Rule::BotElim
            | Rule::AndElimL
            | Rule::AndElimR
            | Rule::OrIntL
            | Rule::OrIntR
            | Rule::IntForallInt
            | Rule::IntExistsElim
            | Rule::ForallElim
            | Rule::CD
            | Rule::ExistsInt => {
                self.cases.insert(RdCase::OnePremise);
                let alpha = p.children[0].conclusion.clone();
                let q = self.go(&p.children[0], ctx)?;
                let h = self.labels.fresh();
                let mut step = p.clone();
                step.children = alloc::vec![Proof::assume(h.clone(), alpha.clone())];
                Ok(Proof::int_trans(q, Proof::arrow_int(h, alpha, step)))
            }
            Rule::AndInt | Rule::IntTrans | Rule::IntAndInt | Rule::IntOrElim => {
                self.cases.insert(RdCase::TwoPremise);
                let q0 = self.go(&p.children[0], ctx)?;
                let q1 = self.go(&p.children[1], ctx)?;
                let both = Formula::and(p.children[0].conclusion.clone(), p.children[1].conclusion.clone());
                let h = self.labels.fresh();
                let hyp = || Proof::assume(h.clone(), both.clone());
                let mut step = p.clone();
                step.children = alloc::vec![Proof::and_elim_l(hyp()), Proof::and_elim_r(hyp())];
                Ok(Proof::int_trans(Proof::int_and_int(q0, q1), Proof::arrow_int(h.clone(), both.clone(), step)))
            }
            Rule::OrElim => {
                let disj = &p.children[0].conclusion;
                let (alpha, beta) = disj.as_or().expect("checked or-elim");
                let qd = self.go(&p.children[0], ctx)?;
                if ctx.is_empty() {
                    self.cases.insert(RdCase::OrElimEmpty);
                    let ql = self.go(&p.children[1], &Ctx::of(core::slice::from_ref(alpha)))?;
                    let qr = self.go(&p.children[2], &Ctx::of(core::slice::from_ref(beta)))?;
                    return Ok(Proof::int_trans(qd, Proof::int_or_elim(ql, qr)));
                }
                self.cases.insert(RdCase::OrElimContext);
                let ql = self.go(&p.children[1], &ctx.extend(alpha))?;
                let qr = self.go(&p.children[2], &ctx.extend(beta))?;
                let (h, k) = (self.labels.fresh(), self.labels.fresh());
                let dist = distribution_with(&a, alpha, beta, &h, &k);
                let tail = Proof::int_trans(dist, Proof::int_or_elim(ql, qr));
                let head = Proof::int_and_int(self.identity(&a), qd);
                Ok(Proof::int_trans(head, tail))
            }
            Rule::ArrowInt => {
                let (phi, _) = p.conclusion.as_arrow().expect("checked arrow-int");
                if ctx.is_empty() {
                    self.cases.insert(RdCase::ArrowIntEmpty);
                    let q = self.go(&p.children[0], &Ctx::of(core::slice::from_ref(phi)))?;
                    return Ok(Proof::arrow_int_vacuous(a, q));
                }
                self.cases.insert(RdCase::ArrowIntContext);
                let q = self.go(&p.children[0], &ctx.extend(phi))?;
                let (h1, h2) = (self.labels.fresh(), self.labels.fresh());
                let pair = Proof::and_int(Proof::assume(h1.clone(), a.clone()), Proof::assume(h2.clone(), phi.clone()));
                let inner = Proof::arrow_int(h2, phi.clone(), pair);
                Ok(Proof::arrow_int(h1, a, Proof::int_trans(inner, q)))
            }
            Rule::Detour => {
                self.cases.insert(RdCase::Detour);
                let q = self.go(&p.children[0], ctx)?;
                Ok(Proof::int_trans(q, p.children[1].clone()))
            }
            Rule::ForallInt => {
                self.cases.insert(RdCase::ForallInt);
                let i = p.witness.expect("checked forall-int");
                let (v, body) = p.conclusion.as_forall().expect("checked forall-int");
                let star = self.context_opens(&p.children[0], ctx, None)?;
                let sub = Ctx::of(&star);
                let q = self.go(&p.children[0], &sub)?;
                let gen_concl = Formula::forall(v, Formula::arrow(sub.ante.clone(), body.clone()));
                let lifted = Proof::int_forall_int(Proof::forall_int(i, gen_concl, q));
                if alpha_eq(&sub.ante, &a) {
                    return Ok(lifted);
                }
                let bridge = self.bridge(ctx, &Ctx::canonical(&star));
                Ok(Proof::int_trans(bridge, lifted))
            }
            Rule::ExistsElim => {
                let i = p.witness.expect("checked exists-elim");
                let ex = &p.children[0].conclusion;
                let chi = &p.conclusion;
                let (v, psi) = ex.as_exists().expect("checked exists-elim");
                let psi_i = subst_closed(psi, v, &Term::Witness(i));
                let qd = self.go(&p.children[0], ctx)?;
                let star = self.context_opens(&p.children[1], ctx, p.label.as_deref())?;
                if star.is_empty() {
                    self.cases.insert(RdCase::ExistsElimEmpty);
                    let q = self.go(&p.children[1], &Ctx::of(core::slice::from_ref(&psi_i)))?;
                    let gen_concl = Formula::forall(v, Formula::arrow(psi.clone(), chi.clone()));
                    let elim = Proof::int_exists_elim(Proof::forall_int(i, gen_concl, q));
                    return Ok(Proof::int_trans(qd, elim));
                }
                self.cases.insert(RdCase::ExistsElimContext);
                let sub = Ctx::of(&star);
                let c = sub.ante.clone();
                let q = self.go(&p.children[1], &sub.extend(&psi_i))?;
                let gen_concl = Formula::forall(v, Formula::arrow(Formula::and(c.clone(), psi.clone()), chi.clone()));
                let elim = Proof::int_exists_elim(Proof::forall_int(i, gen_concl, q));
                let (h, k) = (self.labels.fresh(), self.labels.fresh());
                let dist = infinite_distribution_with(&c, v, psi, &h, &k);
                let from_c = Proof::int_trans(dist, elim);

                // A & exists v. psi -> C & exists v. psi
                let wide = Formula::and(a.clone(), ex.clone());
                let h2 = self.labels.fresh();
                let hyp = || Proof::assume(h2.clone(), wide.clone());
                let narrowed = Proof::and_int(ctx.rebuild(&star, &Proof::and_elim_l(hyp())), Proof::and_elim_r(hyp()));
                let narrow = Proof::arrow_int(h2.clone(), wide.clone(), narrowed);

                let head = Proof::int_and_int(self.identity(&a), qd);
                Ok(Proof::int_trans(head, Proof::int_trans(narrow, from_c)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use alloc::vec;

    fn sig() -> Signature {
        Signature::new().with_relation("P", 0).with_relation("Q", 0).with_relation("R", 0).with_relation("S", 1)
    }

    fn f(s: &str) -> Formula {
        parse_formula(s, &sig()).unwrap()
    }

    #[test]
    fn conj_is_canonical() {
        assert_eq!(conj(&[]), Formula::Top);
        assert_eq!(conj(&[f("Q"), f("P"), f("Q")]), f("P & Q"));
        assert_eq!(conj(&[f("R"), f("Q"), f("P")]), f("P & (Q & R)"));
    }

    #[test]
    fn ctx_paths_project_members() {
        let ctx = Ctx::of(&[f("P"), f("Q"), f("R")]).extend(&f("P -> Q"));
        for (g, path) in &ctx.members {
            let p = Ctx::project(path, Proof::assume("h", ctx.ante.clone()));
            assert_eq!(&p.conclusion, g);
        }
    }

    #[test]
    fn assumption_in_context() {
        let p = Proof::assume("h", f("Q"));
        let q = relative_deduction(&p, &[], &[f("P"), f("Q")], &sig()).unwrap();
        let j = check_proof(&q, &sig()).unwrap();
        assert_eq!(j.conclusion, f("(P & Q) -> Q"));
        assert!(j.open.is_empty());
    }

    #[test]
    fn uncovered_assumption_is_rejected() {
        let p = Proof::assume("h", f("Q"));
        let e = relative_deduction(&p, &[], &[f("P")], &sig()).unwrap_err();
        assert!(matches!(e, DeductionError::Uncovered { .. }));
    }

    #[test]
    fn detour_becomes_transitivity() {
        let p = Proof::detour(Proof::assume("h", f("P")), Proof::assume("s", f("P -> Q")));
        let t = relative_deduction_traced(&p, &[f("P -> Q")], &[f("P")], &sig()).unwrap();
        let j = check_proof(&t.proof, &sig()).unwrap();
        assert_eq!(j.conclusion, f("P -> Q"));
        assert_eq!(j.open_formulas(), vec![f("P -> Q")]);
        assert!(t.cases.contains(&RdCase::Detour));
        assert!(t.cases.contains(&RdCase::ContextAssumption));
    }

    #[test]
    fn templates_check() {
        let d = distribution_with(&f("P"), &f("Q"), &f("R"), "h", "k");
        assert_eq!(check_proof(&d, &sig()).unwrap().conclusion, f("P & (Q | R) -> (P & Q) | (P & R)"));
        let sx = Formula::atom("S", vec![Term::var("x")]);
        let d = infinite_distribution_with(&f("P"), "x", &sx, "h", "k");
        let j = check_proof(&d, &sig()).unwrap();
        assert_eq!(j.conclusion, f("P & (exists x. S(x)) -> exists x. (P & S(x))"));
        assert!(j.open.is_empty());
    }
}
