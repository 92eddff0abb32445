use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Proof, Rule};
use crate::syntax::{Formula, Term};

impl Proof {
    /// A bare node; annotations are added with the `with_*` methods.
    pub fn node(rule: Rule, conclusion: Formula, children: Vec<Proof>) -> Proof {
        Proof { rule, conclusion, children, label: None, witness: None, term: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Proof {
        self.label = Some(label.into());
        self
    }

    pub fn with_witness(mut self, i: u32) -> Proof {
        self.witness = Some(i);
        self
    }

    pub fn with_term(mut self, t: Term) -> Proof {
        self.term = Some(t);
        self
    }

    pub fn assume(label: impl Into<String>, f: Formula) -> Proof {
        Proof::node(Rule::Assume, f, vec![]).with_label(label)
    }

    pub fn top_int() -> Proof {
        Proof::node(Rule::TopInt, Formula::Top, vec![])
    }

    pub fn bot_elim(p: Proof, conclusion: Formula) -> Proof {
        Proof::node(Rule::BotElim, conclusion, vec![p])
    }

    pub fn and_int(a: Proof, b: Proof) -> Proof {
        let c = Formula::and(a.conclusion.clone(), b.conclusion.clone());
        Proof::node(Rule::AndInt, c, vec![a, b])
    }

    /// Left projection. Panics unless `p` concludes a conjunction.
    pub fn and_elim_l(p: Proof) -> Proof {
        let c = p.conclusion.as_and().expect("and-elim on a non-conjunction").0.clone();
        Proof::node(Rule::AndElimL, c, vec![p])
    }

    /// Right projection. Panics unless `p` concludes a conjunction.
    pub fn and_elim_r(p: Proof) -> Proof {
        let c = p.conclusion.as_and().expect("and-elim on a non-conjunction").1.clone();
        Proof::node(Rule::AndElimR, c, vec![p])
    }

    pub fn or_int_l(p: Proof, right: Formula) -> Proof {
        let c = Formula::or(p.conclusion.clone(), right);
        Proof::node(Rule::OrIntL, c, vec![p])
    }

    pub fn or_int_r(left: Formula, p: Proof) -> Proof {
        let c = Formula::or(left, p.conclusion.clone());
        Proof::node(Rule::OrIntR, c, vec![p])
    }

    pub fn or_elim(label: impl Into<String>, disj: Proof, left: Proof, right: Proof) -> Proof {
        let c = left.conclusion.clone();
        Proof::node(Rule::OrElim, c, vec![disj, left, right]).with_label(label)
    }

    /// `antecedent -> p.conclusion`, discharging `label`.
    pub fn arrow_int(label: impl Into<String>, antecedent: Formula, p: Proof) -> Proof {
        Proof::arrow_int_vacuous(antecedent, p).with_label(label)
    }

    /// `antecedent -> p.conclusion` without discharging anything.
    pub fn arrow_int_vacuous(antecedent: Formula, p: Proof) -> Proof {
        let c = Formula::arrow(antecedent, p.conclusion.clone());
        Proof::node(Rule::ArrowInt, c, vec![p])
    }

    /// From `a -> b` and `b -> c` to `a -> c`. Panics unless both are implications.
    pub fn int_trans(p: Proof, q: Proof) -> Proof {
        let a = p.conclusion.as_arrow().expect("int-trans on a non-implication").0.clone();
        let c = q.conclusion.as_arrow().expect("int-trans on a non-implication").1.clone();
        Proof::node(Rule::IntTrans, Formula::arrow(a, c), vec![p, q])
    }

    /// From `a -> b` and `a -> c` to `a -> b & c`.
    pub fn int_and_int(p: Proof, q: Proof) -> Proof {
        let (a, b) = p.conclusion.as_arrow().expect("int-and-int on a non-implication");
        let c = q.conclusion.as_arrow().expect("int-and-int on a non-implication").1;
        let concl = Formula::arrow(a.clone(), Formula::and(b.clone(), c.clone()));
        Proof::node(Rule::IntAndInt, concl, vec![p, q])
    }

    /// From `a -> c` and `b -> c` to `a | b -> c`.
    pub fn int_or_elim(p: Proof, q: Proof) -> Proof {
        let (a, c) = p.conclusion.as_arrow().expect("int-or-elim on a non-implication");
        let b = q.conclusion.as_arrow().expect("int-or-elim on a non-implication").0;
        let concl = Formula::arrow(Formula::or(a.clone(), b.clone()), c.clone());
        Proof::node(Rule::IntOrElim, concl, vec![p, q])
    }

    /// From `forall v. (a -> b)` to `a -> forall v. b`.
    pub fn int_forall_int(p: Proof) -> Proof {
        let (v, body) = p.conclusion.as_forall().expect("int-forall-int on a non-universal");
        let (a, b) = body.as_arrow().expect("int-forall-int on a non-implication");
        let concl = Formula::arrow(a.clone(), Formula::forall(v, b.clone()));
        Proof::node(Rule::IntForallInt, concl, vec![p])
    }

    /// From `forall v. (a -> b)` to `(exists v. a) -> b`.
    pub fn int_exists_elim(p: Proof) -> Proof {
        let (v, body) = p.conclusion.as_forall().expect("int-exists-elim on a non-universal");
        let (a, b) = body.as_arrow().expect("int-exists-elim on a non-implication");
        let concl = Formula::arrow(Formula::exists(v, a.clone()), b.clone());
        Proof::node(Rule::IntExistsElim, concl, vec![p])
    }

    /// From a proof of `phi(@i)` to `forall v. phi`.
    pub fn forall_int(i: u32, conclusion: Formula, p: Proof) -> Proof {
        Proof::node(Rule::ForallInt, conclusion, vec![p]).with_witness(i)
    }

    /// Instantiates `forall v. phi` at the closed term `t`.
    pub fn forall_elim(p: Proof, t: Term) -> Proof {
        let (v, body) = p.conclusion.as_forall().expect("forall-elim on a non-universal");
        let c = crate::syntax::subst_closed(body, v, &t);
        Proof::node(Rule::ForallElim, c, vec![p]).with_term(t)
    }

    /// From `forall v. (a | b)` to `a | forall v. b`.
    pub fn cd(p: Proof) -> Proof {
        let (v, body) = p.conclusion.as_forall().expect("cd on a non-universal");
        let (a, b) = body.as_or().expect("cd on a non-disjunction");
        let concl = Formula::or(a.clone(), Formula::forall(v, b.clone()));
        Proof::node(Rule::CD, concl, vec![p])
    }

    /// From a proof of `phi(t)` to `conclusion = exists v. phi`.
    pub fn exists_int(conclusion: Formula, t: Term, p: Proof) -> Proof {
        Proof::node(Rule::ExistsInt, conclusion, vec![p]).with_term(t)
    }

    /// From `exists v. phi` and a proof of `psi` from `phi(@i)` (under `label`) to `psi`.
    pub fn exists_elim(i: u32, label: impl Into<String>, ex: Proof, body: Proof) -> Proof {
        let c = body.conclusion.clone();
        Proof::node(Rule::ExistsElim, c, vec![ex, body]).with_witness(i).with_label(label)
    }

    /// From `phi` and an embedded proof of `phi -> psi` to `psi`.
    pub fn detour(left: Proof, embedded: Proof) -> Proof {
        let c = embedded.conclusion.as_arrow().expect("detour on a non-implication").1.clone();
        Proof::node(Rule::Detour, c, vec![left, embedded])
    }
}
