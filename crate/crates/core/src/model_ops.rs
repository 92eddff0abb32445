//! Constructions on models: generated submodels, adding a root below a set of
//! worlds, worlds-disjoint copies, and gluing a family of pointed models
//! under a common root whose relations are the intersection of the tips.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::semantics::{validate_model, Elem, KripkeModel, Violation, World};

/// How the relations at a new root are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootSpec {
    /// Copy every relation from one world.
    CopyFrom(World),
    /// Intersect every relation over a nonempty set of worlds.
    IntersectOver(BTreeSet<World>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelOpError {
    #[error("no world with index {0}")]
    UnknownWorld(World),
    #[error("root needs at least one target world")]
    EmptyTargets,
    #[error("intersection over an empty set of worlds")]
    EmptyIntersection,
    #[error("root relation {relation}{tuple:?} is missing at reachable world {world}")]
    Monotonicity { world: String, relation: String, tuple: Vec<String> },
    #[error("models do not share {0}")]
    Mismatch(&'static str),
    #[error("fan needs at least one model")]
    EmptyFan,
    #[error("input model is invalid: {0:?}")]
    Invalid(Vec<Violation>),
}

/// Restricts `m` to `w` and the worlds it reaches. World order is preserved.
pub fn generated_submodel(m: &KripkeModel, w: World) -> Result<KripkeModel, ModelOpError> {
    if w >= m.worlds.len() {
        return Err(ModelOpError::UnknownWorld(w));
    }
    let keep: Vec<World> = m.generated_worlds(w).into_iter().collect();
    let index: BTreeMap<World, World> = keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    let order = m.order.iter().filter_map(|(a, b)| Some((*index.get(a)?, *index.get(b)?))).collect();
    Ok(KripkeModel {
        worlds: keep.iter().map(|&x| m.worlds[x].clone()).collect(),
        order,
        domain: m.domain.clone(),
        consts: m.consts.clone(),
        funcs: m.funcs.clone(),
        rels: keep.iter().map(|&x| m.rels[x].clone()).collect(),
    })
}

/// First `root#<n>` not already used as a world id.
fn fresh_root_id(m: &KripkeModel) -> String {
    (0..).map(|n| format!("root#{n}")).find(|id| !m.worlds.contains(id)).expect("unbounded counter")
}

fn intersect(m: &KripkeModel, over: &BTreeSet<World>) -> BTreeMap<String, BTreeSet<Vec<Elem>>> {
    let mut it = over.iter();
    let Some(&first) = it.next() else { return BTreeMap::new() };
    let mut acc = m.rels[first].clone();
    for &w in it {
        for (r, tuples) in acc.iter_mut() {
            match m.relation(w, r) {
                Some(other) => tuples.retain(|t| other.contains(t)),
                None => tuples.clear(),
            }
        }
    }
    acc.retain(|_, t| !t.is_empty());
    acc
}

/// Adds a fresh irreflexive root seeing every target and everything the
/// targets reach. Returns the new model and the root's index (always last).
pub fn add_root(
    m: &KripkeModel,
    targets: &BTreeSet<World>,
    spec: &RootSpec,
) -> Result<(KripkeModel, World), ModelOpError> {
    if targets.is_empty() {
        return Err(ModelOpError::EmptyTargets);
    }
    let n = m.worlds.len();
    for &t in targets {
        if t >= n {
            return Err(ModelOpError::UnknownWorld(t));
        }
    }
    let rels = match spec {
        RootSpec::CopyFrom(x) => m.rels.get(*x).cloned().ok_or(ModelOpError::UnknownWorld(*x))?,
        RootSpec::IntersectOver(over) => {
            if over.is_empty() {
                return Err(ModelOpError::EmptyIntersection);
            }
            if let Some(&bad) = over.iter().find(|&&x| x >= n) {
                return Err(ModelOpError::UnknownWorld(bad));
            }
            intersect(m, over)
        }
    };
    let reach: BTreeSet<World> = targets.iter().flat_map(|&t| m.generated_worlds(t)).collect();
    for &u in &reach {
        for (r, tuples) in &rels {
            if let Some(t) = tuples.iter().find(|t| !m.holds(u, r, t)) {
                return Err(ModelOpError::Monotonicity {
                    world: m.worlds[u].clone(),
                    relation: r.clone(),
                    tuple: m.element_names(t),
                });
            }
        }
    }
    let mut out = m.clone();
    let root = n;
    out.worlds.push(fresh_root_id(m));
    out.rels.push(rels);
    out.order.extend(reach.iter().map(|&u| (root, u)));
    Ok((out, root))
}

/// Cuts `m` down to the submodel generated by `w` and adds a root below the
/// copy of `w` carrying the same relations. Returns the model and the root.
pub fn root_below(m: &KripkeModel, w: World) -> Result<(KripkeModel, World), ModelOpError> {
    let sub = generated_submodel(m, w)?;
    let at = m.generated_worlds(w).iter().position(|x| *x == w).expect("generator is in its own submodel");
    add_root(&sub, &BTreeSet::from([at]), &RootSpec::CopyFrom(at))
}

/// Renames every world `id` to `tag:id`; everything else is unchanged.
pub fn disjoint_copy(m: &KripkeModel, tag: &str) -> KripkeModel {
    let mut out = m.clone();
    out.worlds = m.worlds.iter().map(|w| copied_id(tag, w)).collect();
    out
}

/// Glues pointed models under one new root.
///
/// Each `(model, world)` is cut down to the submodel generated by `world`,
/// renamed apart with the tag `t<i>`, and the disjoint union receives a root
/// seeing every tip (and so, transitively, every world of the union) whose
/// relations are the intersection over the tips.
pub fn glue_rooted_fan(models: &[(KripkeModel, World)]) -> Result<(KripkeModel, World), ModelOpError> {
    let Some((first, _)) = models.first() else { return Err(ModelOpError::EmptyFan) };
    for (m, w) in models {
        if m.domain != first.domain {
            return Err(ModelOpError::Mismatch("a domain"));
        }
        if m.consts != first.consts {
            return Err(ModelOpError::Mismatch("constant interpretations"));
        }
        if m.funcs != first.funcs {
            return Err(ModelOpError::Mismatch("function interpretations"));
        }
        if *w >= m.worlds.len() {
            return Err(ModelOpError::UnknownWorld(*w));
        }
        let v = validate_model(m);
        if !v.is_empty() {
            return Err(ModelOpError::Invalid(v));
        }
    }
    let mut union = KripkeModel {
        worlds: Vec::new(),
        order: BTreeSet::new(),
        domain: first.domain.clone(),
        consts: first.consts.clone(),
        funcs: first.funcs.clone(),
        rels: Vec::new(),
    };
    let mut tips = BTreeSet::new();
    for (i, (m, w)) in models.iter().enumerate() {
        let sub = disjoint_copy(&generated_submodel(m, *w)?, &format!("t{i}"));
        let offset = union.worlds.len();
        let tip =
            offset + m.generated_worlds(*w).iter().position(|x| x == w).expect("generator is in its own submodel");
        tips.insert(tip);
        union.worlds.extend(sub.worlds);
        union.rels.extend(sub.rels);
        union.order.extend(sub.order.iter().map(|&(a, b)| (a + offset, b + offset)));
    }
    add_root(&union, &tips, &RootSpec::IntersectOver(tips.clone()))
}

/// Renaming used by [`disjoint_copy`], exposed for checking forcing across copies.
pub fn copied_id(tag: &str, id: &str) -> String {
    let mut s = tag.to_string();
    s.push(':');
    s.push_str(id);
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{forces, Assignment};
    use crate::syntax::{Formula, Term};
    use alloc::vec;

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn generated_submodels() {
        let one = KripkeModel::new(names(&["w"]), names(&["d"]));
        assert_eq!(generated_submodel(&one, 0).unwrap(), one);

        let mut chain = KripkeModel::new(names(&["w", "u", "v"]), names(&["d"]));
        chain.order.extend([(0, 1), (1, 2), (0, 2)]);
        let sub = generated_submodel(&chain, 1).unwrap();
        assert_eq!(sub.worlds, names(&["u", "v"]));
        assert_eq!(sub.order, [(0, 1)].into_iter().collect());

        let mut fork = KripkeModel::new(names(&["r", "w", "u"]), names(&["d"]));
        fork.order.extend([(0, 1), (0, 2)]);
        let sub = generated_submodel(&fork, 1).unwrap();
        // brute-force reachability: only w itself
        let reach: Vec<_> = (0..3).filter(|&u| u == 1 || fork.sees(1, u)).collect();
        assert_eq!(reach, vec![1]);
        assert_eq!(sub.worlds, names(&["w"]));
        assert!(validate_model(&sub).is_empty());
        assert_eq!(generated_submodel(&fork, 7), Err(ModelOpError::UnknownWorld(7)));
    }

    #[test]
    fn root_copying_a_world() {
        let mut m = KripkeModel::new(names(&["w"]), names(&["0", "1"]));
        m.insert(0, "P", vec![0]);
        let (out, root) = add_root(&m, &[0].into_iter().collect(), &RootSpec::CopyFrom(0)).unwrap();
        assert_eq!(out.worlds, names(&["w", "root#0"]));
        assert_eq!(out.rels[root], out.rels[0]);
        assert!(out.sees(root, 0) && !out.sees(root, root));
        assert!(validate_model(&out).is_empty());
    }

    fn two_tips(p0: &[usize], p1: &[usize]) -> KripkeModel {
        let mut m = KripkeModel::new(names(&["a", "b"]), names(&["0", "1"]));
        for &e in p0 {
            m.insert(0, "P", vec![e]);
        }
        for &e in p1 {
            m.insert(1, "P", vec![e]);
        }
        m
    }

    #[test]
    fn root_intersections() {
        let both: BTreeSet<_> = [0, 1].into_iter().collect();
        let m = two_tips(&[0], &[1]);
        let (out, r) = add_root(&m, &both, &RootSpec::IntersectOver(both.clone())).unwrap();
        assert!(out.relation(r, "P").is_none());

        let m = two_tips(&[0, 1], &[1]);
        let (out, r) = add_root(&m, &both, &RootSpec::IntersectOver(both.clone())).unwrap();
        let oracle: BTreeSet<Vec<usize>> =
            m.relation(0, "P").unwrap().intersection(m.relation(1, "P").unwrap()).cloned().collect();
        assert_eq!(out.relation(r, "P").unwrap(), &oracle);
        assert_eq!(oracle, [vec![1]].into_iter().collect());
    }

    #[test]
    fn root_rejects_non_monotone_copy() {
        let m = two_tips(&[0], &[1]);
        let err = add_root(&m, &[0, 1].into_iter().collect(), &RootSpec::CopyFrom(0)).unwrap_err();
        assert!(matches!(err, ModelOpError::Monotonicity { .. }));
        assert_eq!(add_root(&m, &BTreeSet::new(), &RootSpec::CopyFrom(0)), Err(ModelOpError::EmptyTargets));
    }

    #[test]
    fn root_ids_use_a_counter() {
        let m = KripkeModel::new(names(&["root#0"]), names(&["d"]));
        let (out, r) = add_root(&m, &[0].into_iter().collect(), &RootSpec::CopyFrom(0)).unwrap();
        assert_eq!(out.worlds[r], "root#1");
    }

    #[test]
    fn copies_are_disjoint_and_preserve_forcing() {
        let m = two_tips(&[0], &[1]);
        let a = disjoint_copy(&m, "x");
        let b = disjoint_copy(&m, "y");
        assert_eq!(a.worlds, vec![copied_id("x", "a"), copied_id("x", "b")]);
        let all: BTreeSet<_> = m.worlds.iter().chain(&a.worlds).chain(&b.worlds).collect();
        assert_eq!(all.len(), 6);
        let f = Formula::exists("v", Formula::atom("P", vec![Term::var("v")]));
        for w in 0..2 {
            assert_eq!(forces(&m, w, &f, &Assignment::new()), forces(&a, w, &f, &Assignment::new()));
        }
    }

    #[test]
    fn fan_of_two_points() {
        let mut left = KripkeModel::new(names(&["w"]), names(&["0"]));
        left.insert(0, "P", vec![0]);
        let right = KripkeModel::new(names(&["w"]), names(&["0"]));
        let (g, root) = glue_rooted_fan(&[(left, 0), (right, 0)]).unwrap();
        assert_eq!(g.worlds.len(), 3);
        assert!(validate_model(&g).is_empty());
        assert!(g.relation(root, "P").is_none());
        assert!(g.sees(root, 0) && g.sees(root, 1));
    }

    #[test]
    fn fan_rejects_mismatched_domains() {
        let a = KripkeModel::new(names(&["w"]), names(&["0"]));
        let b = KripkeModel::new(names(&["w"]), names(&["0", "1"]));
        assert_eq!(glue_rooted_fan(&[(a, 0), (b, 0)]), Err(ModelOpError::Mismatch("a domain")));
        assert_eq!(glue_rooted_fan(&[]), Err(ModelOpError::EmptyFan));
    }

    #[test]
    fn singleton_fan_agrees_with_copy_root() {
        let mut m = KripkeModel::new(names(&["r", "w", "u"]), names(&["0", "1"]));
        m.order.extend([(0, 1), (0, 2), (1, 2)]);
        m.insert(1, "P", vec![0]);
        m.insert(2, "P", vec![0]);
        m.insert(2, "P", vec![1]);
        let (fan, froot) = glue_rooted_fan(&[(m.clone(), 1)]).unwrap();
        let sub = generated_submodel(&m, 1).unwrap();
        let (cp, croot) = add_root(&sub, &[0].into_iter().collect(), &RootSpec::CopyFrom(0)).unwrap();
        assert_eq!(fan.rels[froot], cp.rels[croot]);
        assert_eq!(fan.order, cp.order);
    }
}
