//! Extensions characterised by full attacks over a compliant basis.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::arguments::ConstrainedArgument;
use crate::attacks::{attack_graph, attack_kind, fully_attacks};
use crate::equivalence::{instance_disjoint, non_overlapping, set_equiv, EquivalenceError};
use crate::framework::Framework;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("basis is not compliant: {0}")]
    BasisNotCompliant(String),
    #[error("unknown semantics `{0}` (expected conflict-free, admissible or stable)")]
    UnknownSemantics(String),
    #[error(transparent)]
    Equivalence(#[from] EquivalenceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    ConflictFree,
    Admissible,
    Stable,
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Semantics::ConflictFree => "conflict-free",
            Semantics::Admissible => "admissible",
            Semantics::Stable => "stable",
        })
    }
}

impl FromStr for Semantics {
    type Err = SemanticsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conflict-free" | "conflict_free" | "cf" => Ok(Semantics::ConflictFree),
            "admissible" | "adm" => Ok(Semantics::Admissible),
            "stable" | "stb" => Ok(Semantics::Stable),
            _ => Err(SemanticsError::UnknownSemantics(s.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extension {
    /// Ids in basis order.
    pub members: Vec<String>,
    pub semantics: Semantics,
    pub basis: String,
}

impl Extension {
    /// The members as arguments of `delta`.
    pub fn arguments(&self, delta: &[ConstrainedArgument]) -> Vec<ConstrainedArgument> {
        delta.iter().filter(|a| self.members.contains(&a.id)).cloned().collect()
    }
}

impl fmt::Display for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.join(", "))
    }
}

/// No member partially attacks a member.
pub fn is_ngcf(f: &Framework, sigma: &[ConstrainedArgument]) -> bool {
    sigma
        .iter()
        .all(|a| sigma.iter().all(|b| attack_kind(f, a, b).is_none()))
}

/// Members of `delta` fully attacked by some member of `sigma`.
pub fn fatt(f: &Framework, sigma: &[ConstrainedArgument], delta: &[ConstrainedArgument]) -> Vec<ConstrainedArgument> {
    delta
        .iter()
        .filter(|b| sigma.iter().any(|a| fully_attacks(f, a, b)))
        .cloned()
        .collect()
}

struct Search<'a> {
    full: &'a [Vec<bool>],
    semantics: Semantics,
    chosen: Vec<bool>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn accepts(&self) -> bool {
        let n = self.chosen.len();
        let attacked = |j: usize| (0..n).any(|k| self.chosen[k] && self.full[k][j]);
        match self.semantics {
            Semantics::ConflictFree => true,
            Semantics::Admissible => (0..n).all(|i| {
                !self.chosen[i] || (0..n).all(|j| !self.full[j][i] || attacked(j))
            }),
            Semantics::Stable => (0..n).all(|j| self.chosen[j] || attacked(j)),
        }
    }

    fn run(&mut self, i: usize) {
        if i == self.chosen.len() {
            if self.accepts() {
                self.found.push((0..i).filter(|&k| self.chosen[k]).collect());
            }
            return;
        }
        self.run(i + 1);
        let clash = self.full[i][i] || (0..i).any(|k| self.chosen[k] && (self.full[k][i] || self.full[i][k]));
        if !clash {
            self.chosen[i] = true;
            self.run(i + 1);
            self.chosen[i] = false;
        }
    }
}

/// All subsets of `delta` satisfying `semantics` over full attacks.
pub fn enumerate_extensions(
    f: &Framework,
    delta: &[ConstrainedArgument],
    semantics: Semantics,
    basis: &str,
) -> Result<Vec<Extension>, SemanticsError> {
    if !instance_disjoint(delta)? {
        return Err(SemanticsError::BasisNotCompliant("arguments share instances".into()));
    }
    if !non_overlapping(f, delta) {
        return Err(SemanticsError::BasisNotCompliant("some attack is partial but not full".into()));
    }
    let g = attack_graph(f, delta);
    let n = delta.len();
    let full: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| g.full(i, j)).collect()).collect();
    let mut search = Search {
        full: &full,
        semantics,
        chosen: vec![false; n],
        found: Vec::new(),
    };
    search.run(0);
    Ok(search
        .found
        .into_iter()
        .map(|ix| Extension {
            members: ix.into_iter().map(|i| delta[i].id.clone()).collect(),
            semantics,
            basis: basis.to_string(),
        })
        .collect())
}

/// `sigma` is NGCF and together with what it fully attacks covers `delta`.
pub fn check_stable_native(
    f: &Framework,
    sigma: &[ConstrainedArgument],
    delta: &[ConstrainedArgument],
) -> Result<bool, EquivalenceError> {
    if !is_ngcf(f, sigma) {
        return Ok(false);
    }
    let mut covered = sigma.to_vec();
    covered.extend(fatt(f, sigma, delta));
    set_equiv(&covered, delta)
}
