//! Exhaustive enumeration of small models and bounded countermodel search.
//!
//! Models are labeled structures: worlds `w0..`, elements `e0..`. The order
//! is outermost first: domain size, constant interpretations, function
//! tables, world count, transitive order, and finally one up-set per
//! (relation, tuple) giving the worlds where the tuple holds.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::model_ops::{glue_rooted_fan, ModelOpError};
use crate::semantics::{all_forced, tuples, EvalError, Evaluator, FuncTable, KripkeModel, World};
use crate::syntax::{fragment_check, Connective, Formula, Signature, SyntaxError};

/// Default limit on the number of tables per function symbol.
pub const DEFAULT_FUNC_CAP: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub max_domain: usize,
    pub signature: Signature,
    /// Only yield models with a world that sees every other world.
    pub require_rooted: bool,
    /// Witness constants `@i` to interpret alongside the signature's constants.
    pub witnesses: BTreeSet<u32>,
    /// A function symbol whose number of possible tables exceeds this is an error.
    pub func_cap: u64,
}

impl SearchBounds {
    pub fn new(max_worlds: usize, max_domain: usize, signature: Signature) -> Self {
        SearchBounds {
            max_worlds,
            max_domain,
            signature,
            require_rooted: false,
            witnesses: BTreeSet::new(),
            func_cap: DEFAULT_FUNC_CAP,
        }
    }

    pub fn rooted(mut self) -> Self {
        self.require_rooted = true;
        self
    }

    /// Adds the witness constants of `fs` to the interpreted names.
    fn covering(&self, fs: &[&Formula]) -> SearchBounds {
        let mut b = self.clone();
        for f in fs {
            f.collect_witnesses(&mut b.witnesses);
        }
        b
    }
}

/// A world refuting a sequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: KripkeModel,
    pub world: World,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    Refuted(Countermodel),
    UnknownUpTo(SearchBounds),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("bounds need at least one world and one element")]
    EmptyBounds,
    #[error("function `{symbol}` has {tables} possible tables, above the cap of {cap}")]
    FunctionCap { symbol: String, tables: String, cap: u64 },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("`{0}` is outside the fragment without ->, | and exists")]
    Fragment(Formula),
    #[error(transparent)]
    Glue(#[from] ModelOpError),
}

/// Transitive relations on `n` worlds in bitmask order (bit `i*n+j` for `i ≺ j`).
pub fn transitive_orders(n: usize) -> Vec<BTreeSet<(World, World)>> {
    assert!(n <= 4, "transitive_orders is only meant for tiny frames");
    let bits = n * n;
    (0u32..1 << bits)
        .filter_map(|mask| {
            let has = |i: usize, j: usize| mask & (1 << (i * n + j)) != 0;
            for i in 0..n {
                for j in 0..n {
                    if has(i, j) && (0..n).any(|k| has(j, k) && !has(i, k)) {
                        return None;
                    }
                }
            }
            Some((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| has(i, j)).collect())
        })
        .collect()
}

/// World sets closed upward under `order`, as bitmasks in increasing order.
pub fn up_sets(n: usize, order: &BTreeSet<(World, World)>) -> Vec<u32> {
    (0u32..1 << n).filter(|&s| order.iter().all(|&(a, b)| s & (1 << a) == 0 || s & (1 << b) != 0)).collect()
}

fn is_rooted(n: usize, order: &BTreeSet<(World, World)>) -> bool {
    (0..n).any(|r| (0..n).all(|u| u == r || order.contains(&(r, u))))
}

/// Mixed-radix counter; `bump` returns false when it wraps to all zeros.
#[derive(Clone, Debug)]
struct Odometer {
    digits: Vec<usize>,
    radices: Vec<usize>,
}

impl Odometer {
    fn new(radices: Vec<usize>) -> Self {
        Odometer { digits: vec![0; radices.len()], radices }
    }

    fn bump(&mut self) -> bool {
        for (d, r) in self.digits.iter_mut().zip(&self.radices).rev() {
            *d += 1;
            if *d < *r {
                return true;
            }
            *d = 0;
        }
        false
    }
}

/// Domain size together with constant and function interpretations; every
/// model of a base shares them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Base {
    pub domain_size: usize,
    pub consts: BTreeMap<String, usize>,
    pub funcs: BTreeMap<String, FuncTable>,
}

fn const_names(b: &SearchBounds) -> Vec<String> {
    let mut names: Vec<String> = b.signature.constants().map(String::from).collect();
    names.extend(b.witnesses.iter().map(|i| format!("@{i}")));
    names
}

fn check_bounds(b: &SearchBounds) -> Result<(), SearchError> {
    if b.max_worlds == 0 || b.max_domain == 0 {
        return Err(SearchError::EmptyBounds);
    }
    for (name, arity) in b.signature.functions() {
        let rows = (b.max_domain as u64).checked_pow(arity as u32);
        let tables = rows.and_then(|r| u32::try_from(r).ok()).and_then(|r| (b.max_domain as u64).checked_pow(r));
        match tables {
            Some(t) if t <= b.func_cap => {}
            _ => {
                return Err(SearchError::FunctionCap {
                    symbol: name.to_string(),
                    tables: tables
                        .map_or_else(|| format!("{}^{}^{}", b.max_domain, b.max_domain, arity), |t| t.to_string()),
                    cap: b.func_cap,
                })
            }
        }
    }
    Ok(())
}

/// Every base within the bounds, in enumeration order.
pub fn bases(b: &SearchBounds) -> Result<Vec<Base>, SearchError> {
    check_bounds(b)?;
    let consts = const_names(b);
    let funcs: Vec<(String, usize)> = b.signature.functions().map(|(n, a)| (n.to_string(), a)).collect();
    let mut out = Vec::new();
    for d in 1..=b.max_domain {
        let mut cs = Odometer::new(vec![d; consts.len()]);
        loop {
            let rows: Vec<(usize, Vec<usize>)> = funcs
                .iter()
                .enumerate()
                .flat_map(|(k, (_, a))| tuples(d, *a).into_iter().map(move |t| (k, t)))
                .collect();
            let mut fs = Odometer::new(vec![d; rows.len()]);
            loop {
                let mut tables: BTreeMap<String, FuncTable> =
                    funcs.iter().map(|(n, a)| (n.clone(), FuncTable { arity: *a, rows: BTreeMap::new() })).collect();
                for ((k, args), v) in rows.iter().zip(&fs.digits) {
                    tables.get_mut(&funcs[*k].0).expect("declared").rows.insert(args.clone(), *v);
                }
                out.push(Base {
                    domain_size: d,
                    consts: consts.iter().cloned().zip(cs.digits.iter().copied()).collect(),
                    funcs: tables,
                });
                if !fs.bump() {
                    break;
                }
            }
            if !cs.bump() {
                break;
            }
        }
    }
    Ok(out)
}

/// Models over one base, in enumeration order.
pub struct BaseModels {
    base: Base,
    relations: Vec<(String, usize)>,
    require_rooted: bool,
    max_worlds: usize,
    n: usize,
    orders: Vec<BTreeSet<(World, World)>>,
    order_idx: usize,
    slots: Vec<(usize, Vec<usize>)>,
    ups: Vec<u32>,
    vals: Odometer,
    done: bool,
}

impl BaseModels {
    pub fn new(base: Base, b: &SearchBounds) -> Self {
        let relations: Vec<(String, usize)> = b.signature.relations().map(|(n, a)| (n.to_string(), a)).collect();
        let slots = relations
            .iter()
            .enumerate()
            .flat_map(|(k, (_, a))| tuples(base.domain_size, *a).into_iter().map(move |t| (k, t)))
            .collect();
        let mut it = BaseModels {
            base,
            relations,
            require_rooted: b.require_rooted,
            max_worlds: b.max_worlds,
            n: 0,
            orders: Vec::new(),
            order_idx: 0,
            slots,
            ups: Vec::new(),
            vals: Odometer::new(Vec::new()),
            done: false,
        };
        it.next_world_count();
        it
    }

    /// Moves to the next world count with at least one admissible order.
    fn next_world_count(&mut self) {
        loop {
            self.n += 1;
            if self.n > self.max_worlds {
                self.done = true;
                return;
            }
            let n = self.n;
            let rooted = self.require_rooted;
            self.orders = transitive_orders(n).into_iter().filter(|o| !rooted || is_rooted(n, o)).collect();
            if !self.orders.is_empty() {
                self.order_idx = 0;
                self.load_order();
                return;
            }
        }
    }

    fn load_order(&mut self) {
        self.ups = up_sets(self.n, &self.orders[self.order_idx]);
        self.vals = Odometer::new(vec![self.ups.len(); self.slots.len()]);
    }

    fn build(&self) -> KripkeModel {
        let n = self.n;
        let mut m = KripkeModel::new(
            (0..n).map(|i| format!("w{i}")).collect(),
            (0..self.base.domain_size).map(|i| format!("e{i}")).collect(),
        );
        m.order = self.orders[self.order_idx].clone();
        m.consts = self.base.consts.clone();
        m.funcs = self.base.funcs.clone();
        for ((k, tuple), &choice) in self.slots.iter().zip(&self.vals.digits) {
            let mask = self.ups[choice];
            for w in (0..n).filter(|w| mask & (1 << w) != 0) {
                m.insert(w, &self.relations[*k].0, tuple.clone());
            }
        }
        m
    }
}

impl Iterator for BaseModels {
    type Item = KripkeModel;

    fn next(&mut self) -> Option<KripkeModel> {
        if self.done {
            return None;
        }
        let m = self.build();
        if !self.vals.bump() {
            self.order_idx += 1;
            if self.order_idx < self.orders.len() {
                self.load_order();
            } else {
                self.next_world_count();
            }
        }
        Some(m)
    }
}

/// Every model within the bounds, in enumeration order.
pub fn enumerate_models(b: &SearchBounds) -> Result<impl Iterator<Item = KripkeModel> + '_, SearchError> {
    let bases = bases(b)?;
    Ok(bases.into_iter().flat_map(move |base| BaseModels::new(base, b)))
}

fn refutes(m: &KripkeModel, gamma: &[Formula], f: &Formula) -> Result<Option<World>, SearchError> {
    let mut ev = Evaluator::new(m);
    for w in 0..m.worlds.len() {
        if all_forced(&mut ev, w, gamma)? && !ev.forces_sentence(w, f)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_sentences(sig: &Signature, fs: &[&Formula]) -> Result<(), SearchError> {
    for f in fs {
        sig.check_formula(f)?;
    }
    Ok(())
}

fn first_in_base(
    base: &Base,
    b: &SearchBounds,
    gamma: &[Formula],
    f: &Formula,
) -> Result<Option<Countermodel>, SearchError> {
    for model in BaseModels::new(base.clone(), b) {
        if let Some(world) = refutes(&model, gamma, f)? {
            return Ok(Some(Countermodel { model, world }));
        }
    }
    Ok(None)
}

/// The first (model, world) in enumeration order with the world forcing every
/// member of `gamma` and not forcing `f`.
pub fn find_countermodel(
    gamma: &[Formula],
    f: &Formula,
    b: &SearchBounds,
) -> Result<Option<Countermodel>, SearchError> {
    let mut all: Vec<&Formula> = gamma.iter().collect();
    all.push(f);
    check_sentences(&b.signature, &all)?;
    let b = b.covering(&all);
    for base in bases(&b)? {
        if let Some(c) = first_in_base(&base, &b, gamma, f)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

pub fn refute_or_unknown(f: &Formula, b: &SearchBounds) -> Result<Refutation, SearchError> {
    Ok(match find_countermodel(&[], f, b)? {
        Some(c) => Refutation::Refuted(c),
        None => Refutation::UnknownUpTo(b.clone()),
    })
}

/// Looks for countermodels to `gamma ⊨ f` and `gamma ⊨ g` over a common base
/// and glues them under a root. `gamma` must avoid `->`, `|` and `exists`,
/// so the root forces `gamma` and refutes `f | g`.
pub fn disjunction_glue_check(
    gamma: &[Formula],
    f: &Formula,
    g: &Formula,
    b: &SearchBounds,
) -> Result<Option<Countermodel>, SearchError> {
    let banned = BTreeSet::from([Connective::Arrow, Connective::Or, Connective::Exists]);
    if let Some(bad) = gamma.iter().find(|x| !fragment_check(x, &banned)) {
        return Err(SearchError::Fragment(bad.clone()));
    }
    let mut all: Vec<&Formula> = gamma.iter().collect();
    all.push(f);
    all.push(g);
    check_sentences(&b.signature, &all)?;
    let b = b.covering(&all);
    for base in bases(&b)? {
        let Some(left) = first_in_base(&base, &b, gamma, f)? else { continue };
        let Some(right) = first_in_base(&base, &b, gamma, g)? else { continue };
        let (model, world) = glue_rooted_fan(&[(left.model, left.world), (right.model, right.world)])?;
        return Ok(Some(Countermodel { model, world }));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::validate_model;
    use crate::syntax::parse_formula;

    fn sig_p() -> Signature {
        Signature::new().with_relation("P", 0)
    }

    #[test]
    fn order_counts() {
        assert_eq!(transitive_orders(1).len(), 2);
        assert_eq!(transitive_orders(2).len(), 13);
        assert_eq!(transitive_orders(3).len(), 171);
    }

    #[test]
    fn one_world_one_proposition() {
        let b = SearchBounds::new(1, 1, sig_p());
        assert_eq!(enumerate_models(&b).unwrap().count(), 4);
        let b = SearchBounds::new(1, 1, Signature::new());
        assert_eq!(enumerate_models(&b).unwrap().count(), 2);
    }

    #[test]
    fn enumerated_models_validate() {
        let sig = Signature::new().with_relation("S", 1).with_constant("c");
        let b = SearchBounds::new(2, 2, sig);
        for m in enumerate_models(&b).unwrap() {
            assert!(validate_model(&m).is_empty());
        }
    }

    #[test]
    fn modus_ponens_countermodel() {
        let sig = sig_p().with_relation("Q", 0);
        let gamma = [parse_formula("P", &sig).unwrap(), parse_formula("P -> Q", &sig).unwrap()];
        let q = parse_formula("Q", &sig).unwrap();
        let c = find_countermodel(&gamma, &q, &SearchBounds::new(1, 1, sig)).unwrap().unwrap();
        assert!(c.model.order.is_empty());
        assert!(c.model.holds(0, "P", &[]));
        assert!(!c.model.holds(0, "Q", &[]));
        assert!(!Evaluator::new(&c.model).forces_sentence(c.world, &q).unwrap());
    }

    #[test]
    fn top_arrow_bot_needs_a_successor() {
        let f = Formula::arrow(Formula::Top, Formula::Bot);
        let Refutation::Refuted(c) = refute_or_unknown(&f, &SearchBounds::new(2, 1, Signature::new())).unwrap() else {
            panic!("expected a countermodel");
        };
        assert!(c.model.successors(c.world).next().is_some());
    }

    #[test]
    fn function_cap() {
        let sig = Signature::new().with_function("f", 2);
        let e = enumerate_models(&SearchBounds::new(1, 3, sig)).err().unwrap();
        assert!(matches!(e, SearchError::FunctionCap { ref symbol, .. } if symbol == "f"));
    }

    #[test]
    fn glue_rejects_arrows_in_gamma() {
        let f = parse_formula("P -> P", &sig_p()).unwrap();
        let e = disjunction_glue_check(&[f], &Formula::Bot, &Formula::Bot, &SearchBounds::new(1, 1, sig_p()));
        assert!(matches!(e, Err(SearchError::Fragment(_))));
    }
}
