//! Finite Kripke models with a constant domain and the forcing relation.
//!
//! Frames are transitive but need not be reflexive, so an implication is
//! evaluated over *strict* successors only. A world with no successors forces
//! every implication.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::syntax::{free_vars, Formula, Term};

/// Index of a world in [`KripkeModel::worlds`].
pub type World = usize;
/// Index of an element in [`KripkeModel::domain`].
pub type Elem = usize;
/// Values of free variables.
pub type Assignment = BTreeMap<String, Elem>;

/// Interpretation of one function symbol as a table over the domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncTable {
    pub arity: usize,
    pub rows: BTreeMap<Vec<Elem>, Elem>,
}

/// A finite model. Relations are stored per world; a relation missing from a
/// world's map is empty there. Witness constants are interpreted through
/// `consts` under their printed name (`@0`, `@1`, ...).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    /// Pairs `(w, u)` with `w ≺ u`.
    pub order: BTreeSet<(World, World)>,
    pub domain: Vec<String>,
    pub consts: BTreeMap<String, Elem>,
    pub funcs: BTreeMap<String, FuncTable>,
    pub rels: Vec<BTreeMap<String, BTreeSet<Vec<Elem>>>>,
}

/// One broken model invariant.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("domain is empty")]
    EmptyDomain,
    #[error("world id `{0}` is listed twice")]
    DuplicateWorld(String),
    #[error("element `{0}` is listed twice")]
    DuplicateElement(String),
    #[error("order mentions unknown world index ({0}, {1})")]
    OrderOutOfRange(World, World),
    #[error("relation table count {found} does not match world count {expected}")]
    RelationTableCount { expected: usize, found: usize },
    #[error("transitivity: {from} ≺ {via} ≺ {to} but not {from} ≺ {to}")]
    Transitivity { from: String, via: String, to: String },
    #[error("monotonicity: {lower} ≺ {upper} but {relation}{tuple:?} holds at {lower} only")]
    Monotonicity { lower: String, upper: String, relation: String, tuple: Vec<String> },
    #[error("relation {relation} at {world} has tuples of mixed or inconsistent length")]
    RelationArity { world: String, relation: String },
    #[error("relation {relation} at {world} mentions an element outside the domain")]
    TupleOutOfRange { world: String, relation: String },
    #[error("constant {0} is interpreted outside the domain")]
    ConstOutOfRange(String),
    #[error("function {name} has no entry for {args:?}")]
    FuncIncomplete { name: String, args: Vec<String> },
    #[error("function {0} has an entry outside the domain or of the wrong arity")]
    FuncOutOfRange(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("constant `{0}` is not interpreted")]
    UnknownConstant(String),
    #[error("function `{0}` is not interpreted")]
    UnknownFunction(String),
    #[error("function `{0}` has no table entry for its arguments")]
    MissingEntry(String),
    #[error("no world with index {0}")]
    UnknownWorld(World),
}

impl KripkeModel {
    /// A model whose worlds all have empty relations and no order.
    pub fn new(worlds: Vec<String>, domain: Vec<String>) -> Self {
        let n = worlds.len();
        KripkeModel {
            worlds,
            order: BTreeSet::new(),
            domain,
            consts: BTreeMap::new(),
            funcs: BTreeMap::new(),
            rels: alloc::vec![BTreeMap::new(); n],
        }
    }

    pub fn world_index(&self, id: &str) -> Option<World> {
        self.worlds.iter().position(|w| w == id)
    }

    pub fn element_index(&self, name: &str) -> Option<Elem> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn sees(&self, w: World, u: World) -> bool {
        self.order.contains(&(w, u))
    }

    /// Strict successors of `w` (which include `w` itself when `w ≺ w`).
    pub fn successors(&self, w: World) -> impl Iterator<Item = World> + '_ {
        self.order.range((w, 0)..=(w, usize::MAX)).map(|&(_, u)| u)
    }

    pub fn relation(&self, w: World, name: &str) -> Option<&BTreeSet<Vec<Elem>>> {
        self.rels.get(w).and_then(|m| m.get(name))
    }

    pub fn holds(&self, w: World, name: &str, tuple: &[Elem]) -> bool {
        self.relation(w, name).is_some_and(|s| s.contains(tuple))
    }

    /// Adds `tuple` to `name` at `w`.
    pub fn insert(&mut self, w: World, name: &str, tuple: Vec<Elem>) {
        self.rels[w].entry(name.to_string()).or_default().insert(tuple);
    }

    /// Every relation name mentioned at any world.
    pub fn relation_names(&self) -> BTreeSet<&str> {
        self.rels.iter().flat_map(|m| m.keys().map(String::as_str)).collect()
    }

    /// Closes the order under transitivity in place.
    pub fn close_transitively(&mut self) {
        loop {
            let mut added = Vec::new();
            for &(a, b) in &self.order {
                for c in self.successors(b) {
                    if !self.order.contains(&(a, c)) {
                        added.push((a, c));
                    }
                }
            }
            if added.is_empty() {
                return;
            }
            self.order.extend(added);
        }
    }

    /// `w` and every world reachable from it.
    pub fn generated_worlds(&self, w: World) -> BTreeSet<World> {
        let mut seen = BTreeSet::new();
        seen.insert(w);
        let mut stack = alloc::vec![w];
        while let Some(x) = stack.pop() {
            for y in self.successors(x) {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        seen
    }

    pub fn element_names(&self, tuple: &[Elem]) -> Vec<String> {
        tuple.iter().map(|&e| self.domain.get(e).cloned().unwrap_or_else(|| alloc::format!("#{e}"))).collect()
    }
}

/// Lists every broken invariant of `m`; empty iff `m` is a well-formed model.
pub fn validate_model(m: &KripkeModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = m.worlds.len();
    let d = m.domain.len();
    if n == 0 {
        out.push(Violation::NoWorlds);
    }
    if d == 0 {
        out.push(Violation::EmptyDomain);
    }
    let mut seen = BTreeSet::new();
    for w in &m.worlds {
        if !seen.insert(w) {
            out.push(Violation::DuplicateWorld(w.clone()));
        }
    }
    let mut seen = BTreeSet::new();
    for e in &m.domain {
        if !seen.insert(e) {
            out.push(Violation::DuplicateElement(e.clone()));
        }
    }
    let mut order_ok = true;
    for &(a, b) in &m.order {
        if a >= n || b >= n {
            out.push(Violation::OrderOutOfRange(a, b));
            order_ok = false;
        }
    }
    if m.rels.len() != n {
        out.push(Violation::RelationTableCount { expected: n, found: m.rels.len() });
    }
    if order_ok {
        let mut missing = BTreeSet::new();
        for &(a, b) in &m.order {
            for c in m.successors(b) {
                if !m.sees(a, c) && missing.insert((a, c)) {
                    out.push(Violation::Transitivity {
                        from: m.worlds[a].clone(),
                        via: m.worlds[b].clone(),
                        to: m.worlds[c].clone(),
                    });
                }
            }
        }
    }
    let mut arities: BTreeMap<&str, usize> = BTreeMap::new();
    for (w, table) in m.rels.iter().enumerate() {
        let wname = m.worlds.get(w).cloned().unwrap_or_default();
        for (r, tuples) in table {
            let mut bad_arity = false;
            let mut bad_elem = false;
            for t in tuples {
                match arities.get(r.as_str()) {
                    Some(&a) if a != t.len() => bad_arity = true,
                    Some(_) => {}
                    None => {
                        arities.insert(r, t.len());
                    }
                }
                if t.iter().any(|&e| e >= d) {
                    bad_elem = true;
                }
            }
            if bad_arity {
                out.push(Violation::RelationArity { world: wname.clone(), relation: r.clone() });
            }
            if bad_elem {
                out.push(Violation::TupleOutOfRange { world: wname.clone(), relation: r.clone() });
            }
        }
    }
    if order_ok && m.rels.len() == n {
        for &(a, b) in &m.order {
            for (r, tuples) in &m.rels[a] {
                for t in tuples {
                    if !m.holds(b, r, t) {
                        out.push(Violation::Monotonicity {
                            lower: m.worlds[a].clone(),
                            upper: m.worlds[b].clone(),
                            relation: r.clone(),
                            tuple: m.element_names(t),
                        });
                    }
                }
            }
        }
    }
    for (c, &e) in &m.consts {
        if e >= d {
            out.push(Violation::ConstOutOfRange(c.clone()));
        }
    }
    for (name, table) in &m.funcs {
        if table.arity == 0
            || table.rows.iter().any(|(args, &v)| args.len() != table.arity || v >= d || args.iter().any(|&x| x >= d))
        {
            out.push(Violation::FuncOutOfRange(name.clone()));
            continue;
        }
        for args in tuples(d, table.arity) {
            if !table.rows.contains_key(&args) {
                out.push(Violation::FuncIncomplete { name: name.clone(), args: m.element_names(&args) });
            }
        }
    }
    out
}

/// All tuples of length `arity` over `0..d`, lexicographically ordered.
pub fn tuples(d: usize, arity: usize) -> Vec<Vec<Elem>> {
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |e| {
                    let mut t = prefix.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    out
}

/// Value of a term under an assignment.
pub fn eval_term(m: &KripkeModel, t: &Term, a: &Assignment) -> Result<Elem, EvalError> {
    let env = Env { base: a, stack: Vec::new() };
    eval_in(m, t, &env)
}

struct Env<'a, 'f> {
    base: &'a Assignment,
    stack: Vec<(&'f str, Elem)>,
}

impl Env<'_, '_> {
    fn lookup(&self, v: &str) -> Option<Elem> {
        self.stack.iter().rev().find(|(x, _)| *x == v).map(|(_, e)| *e).or_else(|| self.base.get(v).copied())
    }
}

fn eval_in(m: &KripkeModel, t: &Term, env: &Env<'_, '_>) -> Result<Elem, EvalError> {
    match t {
        Term::Var(v) => env.lookup(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
        Term::Const(c) => m.consts.get(c).copied().ok_or_else(|| EvalError::UnknownConstant(c.clone())),
        Term::Witness(i) => {
            let name = alloc::format!("@{i}");
            m.consts.get(&name).copied().ok_or(EvalError::UnknownConstant(name))
        }
        Term::App(f, args) => {
            let table = m.funcs.get(f).ok_or_else(|| EvalError::UnknownFunction(f.clone()))?;
            let vals = args.iter().map(|a| eval_in(m, a, env)).collect::<Result<Vec<_>, _>>()?;
            table.rows.get(&vals).copied().ok_or_else(|| EvalError::MissingEntry(f.clone()))
        }
    }
}

/// Forcing evaluator for one model. Successor lists are computed once; within
/// a single [`Evaluator::forces`] call, implications are memoized per
/// (node, world, values of the node's free variables).
pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    succ: Vec<Vec<World>>,
    memo: BTreeMap<(usize, World, Vec<Elem>), bool>,
    fv: BTreeMap<usize, Vec<String>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Self {
        let succ = (0..model.worlds.len()).map(|w| model.successors(w).collect()).collect();
        Evaluator { model, succ, memo: BTreeMap::new(), fv: BTreeMap::new() }
    }

    pub fn model(&self) -> &'m KripkeModel {
        self.model
    }

    pub fn forces(&mut self, w: World, f: &Formula, a: &Assignment) -> Result<bool, EvalError> {
        if w >= self.model.worlds.len() {
            return Err(EvalError::UnknownWorld(w));
        }
        self.memo.clear();
        self.fv.clear();
        let mut env = Env { base: a, stack: Vec::new() };
        let r = self.go(w, f, &mut env);
        self.memo.clear();
        self.fv.clear();
        r
    }

    /// Forcing of a sentence at `w`.
    pub fn forces_sentence(&mut self, w: World, f: &Formula) -> Result<bool, EvalError> {
        self.forces(w, f, &Assignment::new())
    }

    /// The worlds at which a sentence is forced, by index.
    pub fn forced_worlds(&mut self, f: &Formula) -> Result<Vec<bool>, EvalError> {
        (0..self.model.worlds.len()).map(|w| self.forces_sentence(w, f)).collect()
    }

    fn go<'f>(&mut self, w: World, f: &'f Formula, env: &mut Env<'_, 'f>) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Atom(r, args) => {
                let vals = args.iter().map(|t| eval_in(self.model, t, env)).collect::<Result<Vec<_>, _>>()?;
                self.model.holds(w, r, &vals)
            }
            Formula::And(a, b) => self.go(w, a, env)? && self.go(w, b, env)?,
            Formula::Or(a, b) => self.go(w, a, env)? || self.go(w, b, env)?,
            Formula::Arrow(a, b) => {
                let id = f as *const Formula as usize;
                let names = self.fv.entry(id).or_insert_with(|| free_vars(f).into_iter().collect());
                let key_vals = names
                    .iter()
                    .map(|v| env.lookup(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                let key = (id, w, key_vals);
                if let Some(&hit) = self.memo.get(&key) {
                    return Ok(hit);
                }
                let mut result = true;
                for i in 0..self.succ[w].len() {
                    let u = self.succ[w][i];
                    if self.go(u, a, env)? && !self.go(u, b, env)? {
                        result = false;
                        break;
                    }
                }
                self.memo.insert(key, result);
                result
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(f, Formula::Forall(..));
                let mut result = universal;
                for e in 0..self.model.domain.len() {
                    env.stack.push((v, e));
                    let r = self.go(w, body, env);
                    env.stack.pop();
                    if r? != universal {
                        result = !universal;
                        break;
                    }
                }
                result
            }
        })
    }
}

/// `m, w ⊩ f[a]`.
pub fn forces(m: &KripkeModel, w: World, f: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    Evaluator::new(m).forces(w, f, a)
}

/// True iff every world of `m` forcing all of `gamma` also forces `f`.
pub fn forced_everywhere(m: &KripkeModel, gamma: &[Formula], f: &Formula) -> Result<bool, EvalError> {
    let mut ev = Evaluator::new(m);
    for w in 0..m.worlds.len() {
        if all_forced(&mut ev, w, gamma)? && !ev.forces_sentence(w, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Consequence relative to a theory `sigma`: at every successor `u` of a world
/// forcing `sigma`, if `u` forces `gamma` then `u` forces `f`. This is the
/// reading under which proofs using the detour rule are sound.
pub fn relatively_forced(
    m: &KripkeModel,
    sigma: &[Formula],
    gamma: &[Formula],
    f: &Formula,
) -> Result<bool, EvalError> {
    let mut ev = Evaluator::new(m);
    let mut checked = BTreeSet::new();
    for w in 0..m.worlds.len() {
        if !all_forced(&mut ev, w, sigma)? {
            continue;
        }
        let succ: Vec<World> = m.successors(w).collect();
        for u in succ {
            if checked.insert(u) && all_forced(&mut ev, u, gamma)? && !ev.forces_sentence(u, f)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub(crate) fn all_forced(ev: &mut Evaluator<'_>, w: World, gamma: &[Formula]) -> Result<bool, EvalError> {
    for g in gamma {
        if !ev.forces_sentence(w, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}
