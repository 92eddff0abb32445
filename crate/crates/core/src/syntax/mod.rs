//! Terms, formulas and signatures of the object language, together with
//! the handful of syntactic operations the proof kernel relies on.
//!
//! Binding is by name. The calculus only ever substitutes *closed* terms for
//! variables, so substitution never has to rename a binder.

mod parse;
mod print;

pub use parse::{
    parse_formula, parse_formula_extending, parse_open_formula, parse_term, parse_term_extending, ParseError,
    ParseErrorKind,
};

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

/// Errors raised by signature bookkeeping and well-formedness checks.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("name `{0}` is already declared with a different role")]
    NameClash(String),
    #[error("function `{0}` must have arity at least 1")]
    NullaryFunction(String),
    #[error("`{name}` expects {expected} argument(s), found {found}")]
    Arity { name: String, expected: usize, found: usize },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("substituted term `{0}` is not closed")]
    OpenTerm(String),
}

/// Constants, function symbols and relation symbols with their arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    constants: BTreeSet<String>,
    functions: BTreeMap<String, usize>,
    relations: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn is_declared(&self, name: &str) -> bool {
        self.constants.contains(name) || self.functions.contains_key(name) || self.relations.contains_key(name)
    }

    pub fn add_constant(&mut self, name: &str) -> Result<(), SyntaxError> {
        if self.constants.contains(name) {
            return Ok(());
        }
        if self.is_declared(name) {
            return Err(SyntaxError::NameClash(name.to_string()));
        }
        self.constants.insert(name.to_string());
        Ok(())
    }

    pub fn add_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        if arity == 0 {
            return Err(SyntaxError::NullaryFunction(name.to_string()));
        }
        match self.functions.get(name) {
            Some(&a) if a == arity => Ok(()),
            Some(&a) => Err(SyntaxError::Arity { name: name.to_string(), expected: a, found: arity }),
            None if self.is_declared(name) => Err(SyntaxError::NameClash(name.to_string())),
            None => {
                self.functions.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    pub fn add_relation(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        match self.relations.get(name) {
            Some(&a) if a == arity => Ok(()),
            Some(&a) => Err(SyntaxError::Arity { name: name.to_string(), expected: a, found: arity }),
            None if self.is_declared(name) => Err(SyntaxError::NameClash(name.to_string())),
            None => {
                self.relations.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    /// Builder-style variant of [`Signature::add_constant`] for literals in tests and fixtures.
    pub fn with_constant(mut self, name: &str) -> Self {
        self.add_constant(name).expect("constant clashes with an existing symbol");
        self
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.add_function(name, arity).expect("invalid function declaration");
        self
    }

    pub fn with_relation(mut self, name: &str, arity: usize) -> Self {
        self.add_relation(name, arity).expect("invalid relation declaration");
        self
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(String::as_str)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    /// Union of two signatures; fails on a role or arity clash.
    pub fn merge(&mut self, other: &Signature) -> Result<(), SyntaxError> {
        for c in other.constants() {
            self.add_constant(c)?;
        }
        for (f, a) in other.functions() {
            self.add_function(f, a)?;
        }
        for (r, a) in other.relations() {
            self.add_relation(r, a)?;
        }
        Ok(())
    }

    /// Extends the signature with every symbol used in `f`. Free variables are
    /// not symbols and are left alone.
    pub fn absorb_formula(&mut self, f: &Formula) -> Result<(), SyntaxError> {
        let mut bound = Vec::new();
        self.absorb_inner(f, &mut bound)
    }

    fn absorb_inner<'a>(&mut self, f: &'a Formula, bound: &mut Vec<&'a str>) -> Result<(), SyntaxError> {
        match f {
            Formula::Top | Formula::Bot => Ok(()),
            Formula::Atom(r, args) => {
                self.add_relation(r, args.len())?;
                args.iter().try_for_each(|t| self.absorb_term(t))
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
                self.absorb_inner(a, bound)?;
                self.absorb_inner(b, bound)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v);
                let r = self.absorb_inner(body, bound);
                bound.pop();
                r
            }
        }
    }

    fn absorb_term(&mut self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) | Term::Witness(_) => Ok(()),
            Term::Const(c) => self.add_constant(c),
            Term::App(fun, args) => {
                self.add_function(fun, args.len())?;
                args.iter().try_for_each(|a| self.absorb_term(a))
            }
        }
    }

    /// Checks that every symbol of `f` is declared with the arity it is used at.
    /// Witness constants belong to every signature.
    pub fn check_formula(&self, f: &Formula) -> Result<(), SyntaxError> {
        match f {
            Formula::Top | Formula::Bot => Ok(()),
            Formula::Atom(r, args) => {
                let arity = self.relation_arity(r).ok_or_else(|| SyntaxError::UnknownSymbol(r.clone()))?;
                if arity != args.len() {
                    return Err(SyntaxError::Arity { name: r.clone(), expected: arity, found: args.len() });
                }
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
                self.check_formula(a)?;
                self.check_formula(b)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => self.check_formula(body),
        }
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SyntaxError> {
        match t {
            Term::Var(_) | Term::Witness(_) => Ok(()),
            Term::Const(c) if self.has_constant(c) => Ok(()),
            Term::Const(c) => Err(SyntaxError::UnknownSymbol(c.clone())),
            Term::App(fun, args) => {
                let arity = self.function_arity(fun).ok_or_else(|| SyntaxError::UnknownSymbol(fun.clone()))?;
                if arity != args.len() {
                    return Err(SyntaxError::Arity { name: fun.clone(), expected: arity, found: args.len() });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

/// Terms of the extended language: user constants plus the witness constants `@i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    Witness(u32),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Self {
        Term::Const(name.to_string())
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Witness(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    fn collect_witnesses(&self, out: &mut BTreeSet<u32>) {
        match self {
            Term::Witness(i) => {
                out.insert(*i);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_witnesses(out)),
            Term::Var(_) | Term::Const(_) => {}
        }
    }

    fn substitute(&self, v: &str, t: &Term) -> Term {
        match self {
            Term::Var(x) if x == v => t.clone(),
            Term::App(fun, args) => Term::App(fun.clone(), args.iter().map(|a| a.substitute(v, t)).collect()),
            other => other.clone(),
        }
    }
}

/// Formulas over `top`, `bot`, `&`, `|`, `->`, `forall`, `exists`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Bot,
    Atom(String, Vec<Term>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Arrow(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

/// The connectives that fragment checks may ban.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    And,
    Or,
    Arrow,
    Forall,
    Exists,
}

impl Formula {
    pub fn atom(rel: &str, args: Vec<Term>) -> Self {
        Formula::Atom(rel.to_string(), args)
    }

    /// A zero-arity atom.
    pub fn prop(rel: &str) -> Self {
        Formula::Atom(rel.to_string(), Vec::new())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn arrow(a: Formula, b: Formula) -> Self {
        Formula::Arrow(Box::new(a), Box::new(b))
    }

    pub fn forall(v: &str, body: Formula) -> Self {
        Formula::Forall(v.to_string(), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Self {
        Formula::Exists(v.to_string(), Box::new(body))
    }

    pub fn is_sentence(&self) -> bool {
        free_vars(self).is_empty()
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Atom(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, body) | Formula::Exists(_, body) => 1 + body.depth(),
        }
    }

    /// All subformulas, including `self`, in pre-order.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = alloc::vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            match f {
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Formula::Forall(_, body) | Formula::Exists(_, body) => stack.push(body),
                _ => {}
            }
        }
        out
    }

    /// Indices of witness constants occurring anywhere in the formula.
    pub fn witnesses(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_witnesses(&mut out);
        out
    }

    pub(crate) fn collect_witnesses(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_witnesses(out)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
                a.collect_witnesses(out);
                b.collect_witnesses(out);
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => body.collect_witnesses(out),
        }
    }

    pub fn contains_witness(&self, i: u32) -> bool {
        self.witnesses().contains(&i)
    }

    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Or(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_arrow(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_forall(&self) -> Option<(&str, &Formula)> {
        match self {
            Formula::Forall(v, body) => Some((v, body)),
            _ => None,
        }
    }

    pub fn as_exists(&self) -> Option<(&str, &Formula)> {
        match self {
            Formula::Exists(v, body) => Some((v, body)),
            _ => None,
        }
    }
}

/// Variables occurring outside any binder for them.
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    fn term(t: &Term, bound: &[&str], out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) if !bound.contains(&v.as_str()) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| term(a, bound, out)),
            _ => {}
        }
    }
    fn go<'a>(f: &'a Formula, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match f {
            Formula::Top | Formula::Bot => {}
            Formula::Atom(_, args) => args.iter().for_each(|t| term(t, bound, out)),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Arrow(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v);
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut Vec::new(), &mut out);
    out
}

/// Replaces every free occurrence of `v` in `f` by the closed term `t`.
pub fn substitute(f: &Formula, v: &str, t: &Term) -> Result<Formula, SyntaxError> {
    if !t.is_closed() {
        return Err(SyntaxError::OpenTerm(alloc::format!("{t}")));
    }
    Ok(subst_closed(f, v, t))
}

pub(crate) fn subst_closed(f: &Formula, v: &str, t: &Term) -> Formula {
    match f {
        Formula::Top => Formula::Top,
        Formula::Bot => Formula::Bot,
        Formula::Atom(r, args) => Formula::Atom(r.clone(), args.iter().map(|a| a.substitute(v, t)).collect()),
        Formula::And(a, b) => Formula::and(subst_closed(a, v, t), subst_closed(b, v, t)),
        Formula::Or(a, b) => Formula::or(subst_closed(a, v, t), subst_closed(b, v, t)),
        Formula::Arrow(a, b) => Formula::arrow(subst_closed(a, v, t), subst_closed(b, v, t)),
        Formula::Forall(x, _) | Formula::Exists(x, _) if x == v => f.clone(),
        Formula::Forall(x, body) => Formula::Forall(x.clone(), Box::new(subst_closed(body, v, t))),
        Formula::Exists(x, body) => Formula::Exists(x.clone(), Box::new(subst_closed(body, v, t))),
    }
}

/// True iff `f` uses none of the `banned` connectives and no witness constant,
/// i.e. `f` lies in the restricted fragment of the base language.
pub fn fragment_check(f: &Formula, banned: &BTreeSet<Connective>) -> bool {
    f.subformulas().into_iter().all(|g| {
        let head = match g {
            Formula::And(..) => Some(Connective::And),
            Formula::Or(..) => Some(Connective::Or),
            Formula::Arrow(..) => Some(Connective::Arrow),
            Formula::Forall(..) => Some(Connective::Forall),
            Formula::Exists(..) => Some(Connective::Exists),
            Formula::Atom(_, args) => {
                let mut w = BTreeSet::new();
                args.iter().for_each(|t| t.collect_witnesses(&mut w));
                if !w.is_empty() {
                    return false;
                }
                None
            }
            Formula::Top | Formula::Bot => None,
        };
        head.is_none_or(|c| !banned.contains(&c))
    })
}

/// Smallest witness index not in `used`.
pub fn fresh_witness(used: &BTreeSet<u32>) -> u32 {
    (0..).find(|i| !used.contains(i)).expect("witness indices exhausted")
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    fn var_eq(x: &str, y: &str, env: &[(&str, &str)]) -> bool {
        for (l, r) in env.iter().rev() {
            match (*l == x, *r == y) {
                (true, true) => return true,
                (false, false) => continue,
                _ => return false,
            }
        }
        x == y
    }
    fn term_eq(s: &Term, t: &Term, env: &[(&str, &str)]) -> bool {
        match (s, t) {
            (Term::Var(x), Term::Var(y)) => var_eq(x, y, env),
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Witness(i), Term::Witness(j)) => i == j,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
            }
            _ => false,
        }
    }
    fn go<'a>(a: &'a Formula, b: &'a Formula, env: &mut Vec<(&'a str, &'a str)>) -> bool {
        match (a, b) {
            (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => true,
            (Formula::Atom(r, xs), Formula::Atom(s, ys)) => {
                r == s && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_eq(x, y, env))
            }
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Arrow(a1, a2), Formula::Arrow(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
            (Formula::Forall(x, p), Formula::Forall(y, q)) | (Formula::Exists(x, p), Formula::Exists(y, q)) => {
                env.push((x, y));
                let r = go(p, q, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    a == b || go(a, b, &mut Vec::new())
}

/// Finds the closed term `t` with `matrix[t/v] == instance`.
///
/// Returns `Ok(None)` when `v` is not free in `matrix` and the two agree (any
/// term instantiates), `Ok(Some(t))` for the unique instantiating term, and
/// `Err(())` when `instance` is not an instance at all. Bound names must agree
/// exactly, which is how substitution of closed terms leaves them.
#[allow(clippy::result_unit_err)]
pub fn match_instance(matrix: &Formula, v: &str, instance: &Formula) -> Result<Option<Term>, ()> {
    fn bind(slot: &mut Option<Term>, t: &Term) -> Result<(), ()> {
        if !t.is_closed() {
            return Err(());
        }
        match slot {
            Some(prev) if prev != t => Err(()),
            Some(_) => Ok(()),
            None => {
                *slot = Some(t.clone());
                Ok(())
            }
        }
    }
    fn term(p: &Term, t: &Term, v: &str, shadowed: bool, slot: &mut Option<Term>) -> Result<(), ()> {
        match (p, t) {
            (Term::Var(x), _) if x == v && !shadowed => bind(slot, t),
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| term(x, y, v, shadowed, slot))
            }
            _ if p == t => Ok(()),
            _ => Err(()),
        }
    }
    fn go(p: &Formula, q: &Formula, v: &str, shadowed: bool, slot: &mut Option<Term>) -> Result<(), ()> {
        match (p, q) {
            (Formula::Top, Formula::Top) | (Formula::Bot, Formula::Bot) => Ok(()),
            (Formula::Atom(r, xs), Formula::Atom(s, ys)) if r == s && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| term(x, y, v, shadowed, slot))
            }
            (Formula::And(a1, a2), Formula::And(b1, b2))
            | (Formula::Or(a1, a2), Formula::Or(b1, b2))
            | (Formula::Arrow(a1, a2), Formula::Arrow(b1, b2)) => {
                go(a1, b1, v, shadowed, slot)?;
                go(a2, b2, v, shadowed, slot)
            }
            (Formula::Forall(x, a), Formula::Forall(y, b)) | (Formula::Exists(x, a), Formula::Exists(y, b))
                if x == y =>
            {
                go(a, b, v, shadowed || x == v, slot)
            }
            _ => Err(()),
        }
    }
    let mut slot = None;
    go(matrix, instance, v, false, &mut slot)?;
    Ok(slot)
}
