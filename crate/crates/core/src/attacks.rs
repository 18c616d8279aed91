//! Full and partial attacks between constrained arguments.
//!
//! An attacker `C ⊢ c(t)` meets a target assumption `a(u)` when `c` is the
//! contrary of `a`. Both sides are rewritten against fresh variables `X`,
//! giving `C ∪ {X = t}` and `D ∪ {X = u}`. The attack is full when `D`
//! entails the projection of the attacker's region onto `X`, and partial
//! when the two regions intersect.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use caba_lra::{
    entails_dnf, entails_projected, is_consistent, project, Constraint, ConstraintDnf, ConstraintSet,
    LinearTerm, Var, VarGen,
};
use serde::Serialize;

use crate::arguments::ConstrainedArgument;
use crate::framework::{Atom, Framework};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    Partial,
    Full,
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::Partial => "partial",
            AttackKind::Full => "full",
        })
    }
}

/// Outcome of checking one target assumption.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssumptionCheck {
    pub assumption: Atom,
    pub full: bool,
    pub partial: bool,
}

/// An attacker renamed apart from the target, with its region expressed
/// over the target assumption's variables.
pub(crate) struct Aligned {
    pub assumption: Atom,
    /// `C ∪ {X = t}` with `X` fresh.
    pub attacker: ConstraintSet,
    /// `D ∪ {X = u}`.
    pub target: ConstraintSet,
    pub link: BTreeSet<Var>,
    /// `C ∪ {t = u}`, mentioning target variables through `u`.
    pub joined: ConstraintSet,
}

fn equalities(xs: &[Var], ts: &[LinearTerm]) -> ConstraintSet {
    xs.iter()
        .zip(ts)
        .map(|(x, t)| Constraint::eq(LinearTerm::var(x.clone()), t.clone()))
        .collect()
}

pub(crate) fn align(f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> Vec<Aligned> {
    let mut gen = VarGen::new();
    let avoid = b.vars();
    // `VarGen` names never clash with parsed names, but `b` may itself be a
    // renamed-apart copy; skip any collision.
    let mut fresh = || loop {
        let v = gen.fresh();
        if !avoid.contains(&v) {
            return v;
        }
    };
    let map: BTreeMap<Var, Var> = a.vars().into_iter().map(|v| (v, fresh())).collect();
    let a = a.rename(&map);
    let mut out = Vec::new();
    for u in &b.assumptions {
        if f.contrary_of(&u.predicate) != Some(a.claim.predicate.as_str()) || u.arity() != a.claim.arity() {
            continue;
        }
        let xs: Vec<Var> = (0..u.arity()).map(|_| fresh()).collect();
        let attacker = a.constraints.union(&equalities(&xs, &a.claim.args));
        let target = b.constraints.union(&equalities(&xs, &u.args));
        let joined: ConstraintSet = a
            .constraints
            .iter()
            .cloned()
            .chain(
                a.claim
                    .args
                    .iter()
                    .zip(&u.args)
                    .map(|(t, s)| Constraint::eq(t.clone(), s.clone())),
            )
            .collect();
        out.push(Aligned {
            assumption: u.clone(),
            attacker,
            target,
            link: xs.into_iter().collect(),
            joined,
        });
    }
    out
}

/// Per-assumption full and partial checks of `a` against `b`.
pub fn assumption_checks(f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> Vec<AssumptionCheck> {
    align(f, a, b)
        .into_iter()
        .map(|al| AssumptionCheck {
            full: entails_projected(&al.target, &al.attacker, &al.link),
            partial: is_consistent(&al.attacker.union(&al.target)),
            assumption: al.assumption,
        })
        .collect()
}

/// The region of `b` (over all of `b`'s variables) whose instances are
/// attacked by some instance of `a`, as a union of exclusive disjuncts.
pub(crate) fn attacked_region(f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> ConstraintDnf {
    let keep = b.vars();
    let mut parts = Vec::new();
    for al in align(f, a, b) {
        if let Ok(p) = project(&al.joined, &keep) {
            parts.extend(p.into_disjuncts());
        }
    }
    ConstraintDnf::from_disjuncts(parts)
}

/// Every instance of `b` is attacked by some instance of `a`, possibly
/// through different assumptions for different instances.
pub fn fully_attacks(f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> bool {
    let checks = assumption_checks(f, a, b);
    if checks.is_empty() || !checks.iter().any(|c| c.partial) {
        return false;
    }
    if checks.iter().any(|c| c.full) {
        return true;
    }
    checks.len() > 1 && entails_dnf(&b.constraints, &attacked_region(f, a, b))
}

/// Some instance of `a` attacks some instance of `b`.
pub fn partially_attacks(f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> bool {
    assumption_checks(f, a, b).iter().any(|c| c.partial)
}

/// Strongest pair-level attack of `a` on `b`, if any.
pub fn attack_kind(f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> Option<AttackKind> {
    if fully_attacks(f, a, b) {
        Some(AttackKind::Full)
    } else if partially_attacks(f, a, b) {
        Some(AttackKind::Partial)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackEdge {
    pub attacker: String,
    pub target: String,
    pub kind: AttackKind,
    pub assumption: String,
}

impl fmt::Display for AttackEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ={}=> {} [on {}]", self.attacker, self.kind, self.target, self.assumption)
    }
}

/// Attack edges of a set of arguments.
#[derive(Clone, Debug, Default)]
pub struct AttackGraph {
    /// One edge per (attacker, target, assumption), with that assumption's kind.
    pub edges: Vec<AttackEdge>,
    /// Pair-level kinds, keyed by argument positions.
    pub pairs: BTreeMap<(usize, usize), AttackKind>,
}

impl AttackGraph {
    pub fn kind(&self, attacker: usize, target: usize) -> Option<AttackKind> {
        self.pairs.get(&(attacker, target)).copied()
    }

    pub fn full(&self, attacker: usize, target: usize) -> bool {
        self.kind(attacker, target) == Some(AttackKind::Full)
    }
}

/// All attacks among `args`, self-attacks included.
pub fn attack_graph(f: &Framework, args: &[ConstrainedArgument]) -> AttackGraph {
    let mut g = AttackGraph::default();
    for (i, a) in args.iter().enumerate() {
        for (j, b) in args.iter().enumerate() {
            let checks = assumption_checks(f, a, b);
            for c in &checks {
                if !c.partial {
                    continue;
                }
                g.edges.push(AttackEdge {
                    attacker: a.id.clone(),
                    target: b.id.clone(),
                    kind: if c.full { AttackKind::Full } else { AttackKind::Partial },
                    assumption: c.assumption.to_string(),
                });
            }
            if let Some(k) = attack_kind(f, a, b) {
                g.pairs.insert((i, j), k);
            }
        }
    }
    g
}
