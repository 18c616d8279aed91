//! Splitting operations and the repair loop that turns a set of arguments
//! into an instance-disjoint, non-overlapping one.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use caba_lra::{is_consistent, project, simplify, split_region, ConstraintSet, Var};
use serde::Serialize;
use thiserror::Error;

use crate::arguments::ConstrainedArgument;
use crate::attacks::{align, assumption_checks, attack_kind, AttackKind};
use crate::equivalence::{common_instances, matchings, EquivalenceError};
use crate::framework::Framework;

pub const DEFAULT_MAX_ITERS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("argument splitting did not converge within {max_iters} repairs")]
    IterationLimit { max_iters: usize },
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
}

/// Compares ids so that `A2 < A10` and `A1 < A1.1 < A1.2 < A2`.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            if i == bytes.len() || bytes[i].is_ascii_digit() != bytes[start].is_ascii_digit() {
                out.push((bytes[start].is_ascii_digit(), &s[start..i]));
                start = i;
            }
        }
        out
    }
    let (xs, ys) = (chunks(a), chunks(b));
    for (x, y) in xs.iter().zip(&ys) {
        let ord = match (x, y) {
            ((true, p), (true, q)) => {
                let (p, q) = (p.trim_start_matches('0'), q.trim_start_matches('0'));
                p.len().cmp(&q.len()).then_with(|| p.cmp(q))
            }
            ((_, p), (_, q)) => p.cmp(q),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    xs.len().cmp(&ys.len()).then_with(|| a.cmp(b))
}

fn pieces(parent: &ConstrainedArgument, regions: Vec<ConstraintSet>) -> Vec<ConstrainedArgument> {
    regions
        .into_iter()
        .enumerate()
        .map(|(k, c)| ConstrainedArgument {
            id: format!("{}.{}", parent.id, k + 1),
            claim: parent.claim.clone(),
            constraints: c,
            assumptions: parent.assumptions.clone(),
            rules: parent.rules.clone(),
            derivation: None,
        })
        .collect()
}

/// `b`'s region over its claim and assumption variables.
fn visible_region(b: &ConstrainedArgument) -> Result<(BTreeSet<Var>, Vec<ConstraintSet>), SplitError> {
    let keep = b.visible_vars();
    let p = project(&b.constraints, &keep)
        .map_err(|_| SplitError::PreconditionViolated(format!("{} has inconsistent constraints", b.id)))?;
    Ok((keep, p.into_disjuncts()))
}

/// Replaces `b` by pieces covering exactly the instances of `b` that are not
/// instances of `a`.
pub fn split_ci(a: &ConstrainedArgument, b: &ConstrainedArgument) -> Result<Vec<ConstrainedArgument>, SplitError> {
    if !common_instances(a, b)? {
        return Err(SplitError::PreconditionViolated(format!(
            "{} and {} have no common instance",
            a.id, b.id
        )));
    }
    let (keep, region) = visible_region(b)?;
    let mut covered = Vec::new();
    for s in matchings(b, a)? {
        if let Ok(q) = project(&s, &keep) {
            covered.extend(q.into_disjuncts());
        }
    }
    let rest = region
        .iter()
        .flat_map(|p| split_region(p, &covered).into_disjuncts())
        .map(|c| simplify(&c))
        .collect();
    Ok(pieces(b, rest))
}

/// Splits `b` into a piece fully attacked by `a` (first) and pieces `a` does
/// not attack through the chosen assumption.
pub fn split_pa(
    f: &Framework,
    a: &ConstrainedArgument,
    b: &ConstrainedArgument,
) -> Result<Vec<ConstrainedArgument>, SplitError> {
    let checks = assumption_checks(f, a, b);
    let chosen = checks
        .iter()
        .position(|c| c.partial && !c.full)
        .or_else(|| checks.iter().position(|c| c.partial))
        .ok_or_else(|| SplitError::PreconditionViolated(format!("{} does not attack {}", a.id, b.id)))?;
    if checks[chosen].full {
        return Ok(vec![b.clone()]);
    }
    let al = align(f, a, b).swap_remove(chosen);
    let (keep, region) = visible_region(b)?;
    let attacked = project(&al.joined, &keep).map(|d| d.into_disjuncts()).unwrap_or_default();
    let mut hit = Vec::new();
    for p in &region {
        for q in &attacked {
            let both = p.union(q);
            if is_consistent(&both) {
                hit.push(simplify(&both));
            }
        }
    }
    let rest = region
        .iter()
        .flat_map(|p| split_region(p, &attacked).into_disjuncts())
        .map(|c| simplify(&c));
    hit.extend(rest);
    Ok(pieces(b, hit))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitOp {
    #[serde(rename = "split_ci")]
    CommonInstance,
    #[serde(rename = "split_pa")]
    PartialAttack,
}

impl fmt::Display for SplitOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitOp::CommonInstance => "split_ci",
            SplitOp::PartialAttack => "split_pa",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitStep {
    pub op: SplitOp,
    pub attacker: String,
    pub target: String,
    pub produced: Vec<String>,
}

impl fmt::Display for SplitStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let produced = if self.produced.is_empty() {
            "nothing".to_string()
        } else {
            self.produced.join(", ")
        };
        write!(f, "{}({}, {}) -> {}", self.op, self.attacker, self.target, produced)
    }
}

#[derive(Clone, Debug)]
pub struct SplitOutcome {
    pub arguments: Vec<ConstrainedArgument>,
    pub steps: Vec<SplitStep>,
}

/// Pair checks are cached by id; ids are never reused within a run.
#[derive(Default)]
struct Cache {
    common: HashMap<(String, String), bool>,
    attack: HashMap<(String, String), Option<AttackKind>>,
}

impl Cache {
    fn common(&mut self, a: &ConstrainedArgument, b: &ConstrainedArgument) -> Result<bool, SplitError> {
        let key = (a.id.clone(), b.id.clone());
        if let Some(&v) = self.common.get(&key) {
            return Ok(v);
        }
        let v = common_instances(a, b)?;
        self.common.insert(key, v);
        Ok(v)
    }

    fn attack(&mut self, f: &Framework, a: &ConstrainedArgument, b: &ConstrainedArgument) -> Option<AttackKind> {
        *self
            .attack
            .entry((a.id.clone(), b.id.clone()))
            .or_insert_with(|| attack_kind(f, a, b))
    }
}

fn next_repair(
    f: &Framework,
    args: &[ConstrainedArgument],
    cache: &mut Cache,
) -> Result<Option<(SplitOp, usize, usize)>, SplitError> {
    for i in 0..args.len() {
        for j in i + 1..args.len() {
            if cache.common(&args[i], &args[j])? {
                // the lexicographically larger rendering is replaced
                let (a, b) = if args[i].body_text() >= args[j].body_text() { (j, i) } else { (i, j) };
                return Ok(Some((SplitOp::CommonInstance, a, b)));
            }
        }
    }
    for i in 0..args.len() {
        for j in 0..args.len() {
            if cache.attack(f, &args[i], &args[j]) == Some(AttackKind::Partial) {
                return Ok(Some((SplitOp::PartialAttack, i, j)));
            }
        }
    }
    Ok(None)
}

/// Repeatedly repairs common instances and partial-but-not-full attacks.
pub fn argument_splitting(
    f: &Framework,
    args: &[ConstrainedArgument],
    max_iters: usize,
) -> Result<SplitOutcome, SplitError> {
    let mut work: Vec<ConstrainedArgument> = args.to_vec();
    let mut steps = Vec::new();
    let mut cache = Cache::default();
    loop {
        work.sort_by(|x, y| natural_cmp(&x.id, &y.id));
        let Some((op, i, j)) = next_repair(f, &work, &mut cache)? else {
            return Ok(SplitOutcome { arguments: work, steps });
        };
        if steps.len() >= max_iters {
            return Err(SplitError::IterationLimit { max_iters });
        }
        let (a, b) = (&work[i], &work[j]);
        let produced = match op {
            SplitOp::CommonInstance => split_ci(a, b)?,
            SplitOp::PartialAttack => split_pa(f, a, b)?,
        };
        steps.push(SplitStep {
            op,
            attacker: a.id.clone(),
            target: b.id.clone(),
            produced: produced.iter().map(|p| p.id.clone()).collect(),
        });
        work.remove(j);
        work.extend(produced);
    }
}
