//! Common instances, instance-disjointness, non-overlap and set equivalence.
//!
//! Two ground instances are equal when their claims coincide and their
//! assumption sets coincide as sets. Because same-predicate assumptions may
//! collapse onto one ground atom, matching an assumption list against
//! another enumerates pairs of maps `f: A → B`, `g: B → A` between
//! same-predicate atoms; the instances agree iff `a = f(a)` and `g(b) = b`
//! for every `a`, `b`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use caba_lra::{entails_dnf, is_consistent, project, split_region, Constraint, ConstraintDnf, ConstraintSet, Var, VarGen};
use serde::Serialize;
use thiserror::Error;

use crate::arguments::ConstrainedArgument;
use crate::attacks::{attack_kind, AttackKind};
use crate::framework::{Atom, Framework};

/// Largest number of same-predicate assumptions in one argument for which
/// pairings are enumerated.
pub const MAX_SAME_PREDICATE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivalenceError {
    #[error("argument {argument} has {count} assumptions on `{predicate}`; at most {MAX_SAME_PREDICATE} are supported")]
    CardinalityLimit {
        argument: String,
        predicate: String,
        count: usize,
    },
}

/// Arguments can only share instances within one shape.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ShapeKey {
    pub claim_predicate: String,
    pub assumption_predicates: BTreeSet<String>,
}

impl ShapeKey {
    pub fn of(a: &ConstrainedArgument) -> ShapeKey {
        ShapeKey {
            claim_predicate: a.claim.predicate.clone(),
            assumption_predicates: a.assumptions.iter().map(|x| x.predicate.clone()).collect(),
        }
    }
}

impl fmt::Display for ShapeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let asms: Vec<&str> = self.assumption_predicates.iter().map(String::as_str).collect();
        write!(f, "{} <= {{{}}}", self.claim_predicate, asms.join(", "))
    }
}

fn check_cardinality(a: &ConstrainedArgument) -> Result<(), EquivalenceError> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for x in &a.assumptions {
        *counts.entry(&x.predicate).or_default() += 1;
    }
    match counts.into_iter().find(|(_, n)| *n > MAX_SAME_PREDICATE) {
        Some((p, n)) => Err(EquivalenceError::CardinalityLimit {
            argument: a.id.clone(),
            predicate: p.to_string(),
            count: n,
        }),
        None => Ok(()),
    }
}

/// Relations `graph(f) ∪ graph(g)ᵀ` between the assumption lists, as sorted
/// index pairs, where `g` only maps the atoms `f` leaves uncovered. Every
/// minimal cover has this form, and a larger relation only adds equalities,
/// so the omitted ones never contribute a new instance. Empty when the
/// predicate sets differ.
fn pairings(xs: &[&Atom], ys: &[&Atom]) -> Vec<Vec<(usize, usize)>> {
    let preds_x: BTreeSet<&str> = xs.iter().map(|a| a.predicate.as_str()).collect();
    let preds_y: BTreeSet<&str> = ys.iter().map(|a| a.predicate.as_str()).collect();
    if preds_x != preds_y {
        return Vec::new();
    }
    let mut rels: Vec<BTreeSet<(usize, usize)>> = vec![BTreeSet::new()];
    for p in preds_x {
        let ix: Vec<usize> = (0..xs.len()).filter(|&i| xs[i].predicate == p).collect();
        let iy: Vec<usize> = (0..ys.len()).filter(|&j| ys[j].predicate == p).collect();
        let mut group: BTreeSet<BTreeSet<(usize, usize)>> = BTreeSet::new();
        for f in functions(ix.len(), iy.len()) {
            let uncovered: Vec<usize> = (0..iy.len()).filter(|t| !f.contains(t)).collect();
            for g in functions(uncovered.len(), ix.len()) {
                let mut r = BTreeSet::new();
                for (k, &t) in f.iter().enumerate() {
                    r.insert((ix[k], iy[t]));
                }
                for (k, &t) in g.iter().enumerate() {
                    r.insert((ix[t], iy[uncovered[k]]));
                }
                group.insert(r);
            }
        }
        let mut next = Vec::new();
        for base in &rels {
            for r in &group {
                next.push(base.union(r).cloned().collect());
            }
        }
        rels = next;
    }
    rels.into_iter().map(|r| r.into_iter().collect()).collect()
}

type Partition = BTreeSet<BTreeSet<String>>;

/// Classes of argument terms identified by a relation.
fn partition(xs: &[&Atom], ys: &[&Atom], rel: &[(usize, usize)]) -> Partition {
    let mut classes: Vec<BTreeSet<String>> = Vec::new();
    for &(i, j) in rel {
        for (s, t) in xs[i].args.iter().zip(ys[j].args.iter()) {
            let (s, t) = (s.to_string(), t.to_string());
            let hit: Vec<usize> = (0..classes.len())
                .filter(|&k| classes[k].contains(&s) || classes[k].contains(&t))
                .collect();
            let mut merged: BTreeSet<String> = [s, t].into();
            for &k in hit.iter().rev() {
                merged.extend(classes.swap_remove(k));
            }
            classes.push(merged);
        }
    }
    classes.into_iter().filter(|c| c.len() > 1).collect()
}

/// `q` identifies no more terms than `p`.
fn refines(q: &Partition, p: &Partition) -> bool {
    q.iter().all(|c| p.iter().any(|d| c.is_subset(d)))
}

/// Every map from `0..n` to `0..m`.
fn functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for f in &out {
            for t in 0..m {
                let mut g = f.clone();
                g.push(t);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

fn atom_equalities<'a>(a: &'a Atom, b: &'a Atom) -> impl Iterator<Item = Constraint> + 'a {
    a.args.iter().zip(b.args.iter()).map(|(s, t)| Constraint::eq(s.clone(), t.clone()))
}

pub(crate) fn rename_apart_from(a: &ConstrainedArgument, avoid: &BTreeSet<Var>) -> ConstrainedArgument {
    let mut gen = VarGen::new();
    let map: BTreeMap<Var, Var> = a
        .vars()
        .into_iter()
        .map(|v| {
            let w = loop {
                let w = gen.fresh();
                if !avoid.contains(&w) {
                    break w;
                }
            };
            (v, w)
        })
        .collect();
    a.rename(&map)
}

/// For each way an instance of `other` can coincide with an instance of
/// `base`, the joint constraint set over both (with `other` renamed apart).
pub(crate) fn matchings(
    base: &ConstrainedArgument,
    other: &ConstrainedArgument,
) -> Result<Vec<ConstraintSet>, EquivalenceError> {
    check_cardinality(base)?;
    check_cardinality(other)?;
    if base.claim.predicate != other.claim.predicate || base.claim.arity() != other.claim.arity() {
        return Ok(Vec::new());
    }
    let other = rename_apart_from(other, &base.vars());
    let xs: Vec<&Atom> = base.assumptions.iter().collect();
    let ys: Vec<&Atom> = other.assumptions.iter().collect();
    let mut found: BTreeMap<Partition, Vec<(usize, usize)>> = BTreeMap::new();
    for rel in pairings(&xs, &ys) {
        found.entry(partition(&xs, &ys, &rel)).or_insert(rel);
    }
    let finest: Vec<&Vec<(usize, usize)>> = found
        .iter()
        .filter(|(p, _)| !found.keys().any(|q| q != *p && refines(q, p)))
        .map(|(_, r)| r)
        .collect();
    let mut out = Vec::new();
    for rel in finest {
        let mut s = other.constraints.clone();
        s.extend(atom_equalities(&base.claim, &other.claim));
        for &(i, j) in rel {
            s.extend(atom_equalities(xs[i], ys[j]));
        }
        out.push(s);
    }
    Ok(out)
}

/// The part of `gamma`'s variable space whose instances are also instances
/// of some member of `others`.
pub fn covered_region(
    gamma: &ConstrainedArgument,
    others: &[ConstrainedArgument],
) -> Result<ConstraintDnf, EquivalenceError> {
    let keep = gamma.vars();
    let mut parts = Vec::new();
    for delta in others {
        for s in matchings(gamma, delta)? {
            if let Ok(p) = project(&s, &keep) {
                parts.extend(p.into_disjuncts());
            }
        }
    }
    Ok(ConstraintDnf::from_disjuncts(parts))
}

/// Whether `a` and `b` have a common ground instance.
pub fn common_instances(a: &ConstrainedArgument, b: &ConstrainedArgument) -> Result<bool, EquivalenceError> {
    for s in matchings(a, b)? {
        if is_consistent(&s.union(&a.constraints)) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// No two distinct members share a ground instance.
pub fn instance_disjoint(args: &[ConstrainedArgument]) -> Result<bool, EquivalenceError> {
    Ok(first_common_pair(args)?.is_none())
}

pub fn first_common_pair(args: &[ConstrainedArgument]) -> Result<Option<(usize, usize)>, EquivalenceError> {
    for i in 0..args.len() {
        for j in i + 1..args.len() {
            if common_instances(&args[i], &args[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// Every partial attack within the set, self-attacks included, is full.
pub fn non_overlapping(f: &Framework, args: &[ConstrainedArgument]) -> bool {
    args.iter()
        .all(|a| args.iter().all(|b| attack_kind(f, a, b) != Some(AttackKind::Partial)))
}

/// A region of one argument not matched by the other set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// `true` when the argument belongs to the left-hand set.
    pub left: bool,
    pub argument: String,
    pub shape: ShapeKey,
    pub region: ConstraintSet,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = if self.left { "left" } else { "right" };
        write!(
            f,
            "{side} argument {} [{}] is uncovered on {}",
            self.argument, self.shape, self.region
        )
    }
}

fn uncovered(
    gamma: &ConstrainedArgument,
    others: &[ConstrainedArgument],
) -> Result<Option<ConstraintSet>, EquivalenceError> {
    let covered = covered_region(gamma, others)?;
    if entails_dnf(&gamma.constraints, &covered) {
        return Ok(None);
    }
    let rest = split_region(&gamma.constraints, covered.disjuncts());
    Ok(rest.disjuncts().first().cloned())
}

/// `None` when both sets denote the same ground instances, otherwise a
/// region covered by one side only.
pub fn set_equiv_witness(
    g: &[ConstrainedArgument],
    d: &[ConstrainedArgument],
) -> Result<Option<Witness>, EquivalenceError> {
    for (left, xs, ys) in [(true, g, d), (false, d, g)] {
        for a in xs {
            let shape = ShapeKey::of(a);
            let group: Vec<ConstrainedArgument> = ys.iter().filter(|b| ShapeKey::of(b) == shape).cloned().collect();
            if let Some(region) = uncovered(a, &group)? {
                return Ok(Some(Witness {
                    left,
                    argument: a.id.clone(),
                    shape,
                    region,
                }));
            }
        }
    }
    Ok(None)
}

/// Whether both sets denote the same ground instances.
pub fn set_equiv(g: &[ConstrainedArgument], d: &[ConstrainedArgument]) -> Result<bool, EquivalenceError> {
    Ok(set_equiv_witness(g, d)?.is_none())
}
