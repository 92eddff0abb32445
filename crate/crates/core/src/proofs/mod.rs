//! Natural-deduction proofs: the tree representation, the checking kernel for
//! the plain calculus and for the calculus relative to a theory Σ, the
//! relative-deduction transformation, and a corpus of checked scripts.
//!
//! Discharge is by label. A rule that discharges carries one label and removes
//! every open occurrence of that label from the relevant subproof(s); each
//! removed occurrence must be the formula the rule expects.

mod build;
pub mod corpus;
mod deduction;
mod kernel;

pub use deduction::{
    conj, relative_deduction, relative_deduction_traced, relative_deduction_under, DeductionError, RdCase, Transformed,
};
pub use kernel::{check_proof, check_relative_proof};

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::syntax::{Formula, SyntaxError, Term};

/// Inference rules. `Detour` is only admitted by the relative kernel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    TopInt,
    BotElim,
    AndInt,
    AndElimL,
    AndElimR,
    OrIntL,
    OrIntR,
    OrElim,
    ArrowInt,
    IntTrans,
    IntAndInt,
    IntOrElim,
    IntForallInt,
    IntExistsElim,
    ForallInt,
    ForallElim,
    CD,
    ExistsInt,
    ExistsElim,
    Assume,
    Detour,
}

impl Rule {
    pub const ALL: [Rule; 21] = [
        Rule::TopInt,
        Rule::BotElim,
        Rule::AndInt,
        Rule::AndElimL,
        Rule::AndElimR,
        Rule::OrIntL,
        Rule::OrIntR,
        Rule::OrElim,
        Rule::ArrowInt,
        Rule::IntTrans,
        Rule::IntAndInt,
        Rule::IntOrElim,
        Rule::IntForallInt,
        Rule::IntExistsElim,
        Rule::ForallInt,
        Rule::ForallElim,
        Rule::CD,
        Rule::ExistsInt,
        Rule::ExistsElim,
        Rule::Assume,
        Rule::Detour,
    ];

    /// Name used in the proof file format.
    pub fn name(self) -> &'static str {
        match self {
            Rule::TopInt => "top-int",
            Rule::BotElim => "bot-elim",
            Rule::AndInt => "and-int",
            Rule::AndElimL => "and-elim-l",
            Rule::AndElimR => "and-elim-r",
            Rule::OrIntL => "or-int-l",
            Rule::OrIntR => "or-int-r",
            Rule::OrElim => "or-elim",
            Rule::ArrowInt => "arrow-int",
            Rule::IntTrans => "int-trans",
            Rule::IntAndInt => "int-and-int",
            Rule::IntOrElim => "int-or-elim",
            Rule::IntForallInt => "int-forall-int",
            Rule::IntExistsElim => "int-exists-elim",
            Rule::ForallInt => "forall-int",
            Rule::ForallElim => "forall-elim",
            Rule::CD => "cd",
            Rule::ExistsInt => "exists-int",
            Rule::ExistsElim => "exists-elim",
            Rule::Assume => "assume",
            Rule::Detour => "detour",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.iter().copied().find(|r| r.name() == name)
    }

    /// Number of premises (for `Detour`: the left premise and the embedded proof).
    pub fn premises(self) -> usize {
        match self {
            Rule::TopInt | Rule::Assume => 0,
            Rule::AndInt | Rule::IntTrans | Rule::IntAndInt | Rule::IntOrElim | Rule::ExistsElim | Rule::Detour => 2,
            Rule::OrElim => 3,
            _ => 1,
        }
    }

    pub fn discharges(self) -> bool {
        matches!(self, Rule::ArrowInt | Rule::OrElim | Rule::ExistsElim)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A proof tree. `label` is the assumption label on `Assume` leaves and the
/// discharge label on `ArrowInt`/`OrElim`/`ExistsElim`; `witness` is the
/// index `i` of the constant `@i` on `ForallInt`/`ExistsElim`; `term` is the
/// optional instantiating term on `ForallElim`/`ExistsInt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub rule: Rule,
    pub conclusion: Formula,
    pub children: Vec<Proof>,
    pub label: Option<String>,
    pub witness: Option<u32>,
    pub term: Option<Term>,
}

impl Proof {
    /// Every rule occurring in the tree, embedded proofs included.
    pub fn rules(&self) -> BTreeSet<Rule> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![self];
        while let Some(p) = stack.pop() {
            out.insert(p.rule);
            stack.extend(p.children.iter());
        }
        out
    }

    /// Every label used anywhere in the tree.
    pub fn labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![self];
        while let Some(p) = stack.pop() {
            if let Some(l) = &p.label {
                out.insert(l.clone());
            }
            stack.extend(p.children.iter());
        }
        out
    }

    /// Witness indices used anywhere in the tree, in formulas or annotations.
    pub fn witnesses(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        let mut stack = alloc::vec![self];
        while let Some(p) = stack.pop() {
            p.conclusion.collect_witnesses(&mut out);
            out.extend(p.witness);
            stack.extend(p.children.iter());
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Proof::size).sum::<usize>()
    }
}

/// Result of checking: the conclusion with its open assumptions as distinct
/// `(label, formula)` pairs. `unsafe_` lists those with an occurrence inside
/// an embedded detour proof and is always a subset of `open`. Both are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub conclusion: Formula,
    pub open: Vec<(String, Formula)>,
    pub unsafe_: Vec<(String, Formula)>,
}

impl Judgment {
    /// Open assumptions as a set of formulas.
    pub fn open_formulas(&self) -> Vec<Formula> {
        let set: BTreeSet<&Formula> = self.open.iter().map(|(_, f)| f).collect();
        set.into_iter().cloned().collect()
    }

    /// Open assumptions that are not unsafe, as a set of formulas.
    pub fn safe_formulas(&self) -> Vec<Formula> {
        let mut unsafe_left: Vec<&(String, Formula)> = self.unsafe_.iter().collect();
        let mut set = BTreeSet::new();
        for occ in &self.open {
            if let Some(i) = unsafe_left.iter().position(|u| *u == occ) {
                unsafe_left.swap_remove(i);
            } else {
                set.insert(&occ.1);
            }
        }
        set.into_iter().cloned().collect()
    }
}

/// Where a freshness condition was violated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreshnessSite {
    Conclusion,
    Matrix,
    Assumption(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofErrorKind {
    Arity {
        rule: Rule,
        expected: usize,
        found: usize,
    },
    /// The node does not instantiate its rule; `expected` describes the shape.
    Schema {
        rule: Rule,
        expected: String,
        found: Formula,
    },
    NotSentence(Formula),
    Signature(SyntaxError),
    MissingLabel(Rule),
    MissingWitness(Rule),
    UnexpectedAnnotation {
        rule: Rule,
        annotation: &'static str,
    },
    TermNotClosed(Term),
    Freshness {
        witness: u32,
        site: FreshnessSite,
    },
    DischargeMismatch {
        label: String,
        expected: Formula,
        found: Formula,
    },
    DetourNotAllowed,
    DetourPremiseNotInSigma {
        label: String,
        formula: Formula,
    },
    UnsafeDischarge {
        label: String,
        formula: Formula,
    },
    UnsafeWitnessAssumption {
        label: String,
        formula: Formula,
    },
}

/// A kernel rejection, located by the child-index path from the root.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} (at node {})", PathDisplay(.path))]
pub struct ProofError {
    pub path: Vec<usize>,
    pub kind: Box<ProofErrorKind>,
}

struct PathDisplay<'a>(&'a [usize]);

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ProofErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofErrorKind::Arity { rule, expected, found } => {
                write!(f, "{rule} takes {expected} premise(s), found {found}")
            }
            ProofErrorKind::Schema { rule, expected, found } => {
                write!(f, "{rule} does not match: expected {expected}, found `{found}`")
            }
            ProofErrorKind::NotSentence(x) => write!(f, "`{x}` has free variables"),
            ProofErrorKind::Signature(e) => write!(f, "{e}"),
            ProofErrorKind::MissingLabel(r) => write!(f, "{r} needs a label"),
            ProofErrorKind::MissingWitness(r) => write!(f, "{r} needs a witness index"),
            ProofErrorKind::UnexpectedAnnotation { rule, annotation } => {
                write!(f, "{rule} does not take a {annotation} annotation")
            }
            ProofErrorKind::TermNotClosed(t) => write!(f, "term `{t}` is not closed"),
            ProofErrorKind::Freshness { witness, site } => match site {
                FreshnessSite::Conclusion => write!(f, "@{witness} occurs in the conclusion"),
                FreshnessSite::Matrix => write!(f, "@{witness} occurs in the quantified formula"),
                FreshnessSite::Assumption(l) => write!(f, "@{witness} occurs in open assumption `{l}`"),
            },
            ProofErrorKind::DischargeMismatch { label, expected, found } => {
                write!(f, "label `{label}` discharges `{found}` where `{expected}` was expected")
            }
            ProofErrorKind::DetourNotAllowed => f.write_str("detour is only allowed in relative proofs"),
            ProofErrorKind::DetourPremiseNotInSigma { label, formula } => {
                write!(f, "embedded assumption `{label}`: `{formula}` is not in the theory")
            }
            ProofErrorKind::UnsafeDischarge { label, formula } => {
                write!(f, "cannot discharge unsafe occurrence `{label}`: `{formula}`")
            }
            ProofErrorKind::UnsafeWitnessAssumption { label, formula } => {
                write!(f, "witness assumption `{label}`: `{formula}` occurs unsafely")
            }
        }
    }
}
