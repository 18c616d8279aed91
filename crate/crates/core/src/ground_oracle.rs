//! Grounding over a finite universe into plain ABA, classical arguments and
//! extensions, and cross-checks of native results against them.
//!
//! The native semantics quantifies over all rationals; a finite universe
//! reproduces it only when the universe is rich enough for the constraints
//! involved. [`adequacy`] certifies a sufficient condition: every constraint
//! compares a variable with a constant or equates two variables, every
//! constant is in the universe, and every open interval between consecutive
//! constants (unbounded ends included) holds at least as many universe
//! points as the largest argument has variables. Without the certificate
//! attack and extension checks can only falsify.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use caba_lra::{fmt_rational, Constraint, Rational, Rel, Var};
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::arguments::{assignments, ground_instances, ground_instances_of, ConstrainedArgument, GroundArgument};
use crate::attacks::{attack_kind, AttackKind};
use crate::framework::{Atom, Framework, GroundAtom};
use crate::semantics::Semantics;

pub const DEFAULT_ARGUMENT_CAP: usize = 2_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("grounding produced more than {cap} arguments")]
    UniverseTooLarge { cap: usize },
    #[error("empty universe")]
    EmptyUniverse,
    #[error("invalid universe `{0}`")]
    InvalidUniverse(String),
    #[error("mode {mode} needs {needs}")]
    WrongInput { mode: CheckMode, needs: &'static str },
}

/// Parses `lo..hi` (inclusive integer range) or a comma-separated list of
/// rationals such as `0,1/2,3`.
pub fn parse_universe(src: &str) -> Result<Vec<Rational>, OracleError> {
    let bad = || OracleError::InvalidUniverse(src.to_string());
    let src = src.trim();
    let mut out: Vec<Rational> = if let Some((lo, hi)) = src.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).map(caba_lra::rat).collect()
    } else {
        src.split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| caba_lra::parse_term(s.trim()).ok().filter(|t| t.is_constant()).map(|t| t.constant_part().clone()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(bad)?
    };
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(OracleError::EmptyUniverse);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundRule {
    pub id: String,
    pub head: GroundAtom,
    pub body: Vec<GroundAtom>,
}

impl fmt::Display for GroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.head)?;
        if !self.body.is_empty() {
            let body: Vec<String> = self.body.iter().map(|a| a.to_string()).collect();
            write!(f, " <- {}", body.join(", "))?;
        }
        f.write_str(".")
    }
}

/// A plain ABA framework over ground atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAbaFramework {
    pub rules: Vec<GroundRule>,
    pub assumptions: BTreeSet<GroundAtom>,
    pub contraries: BTreeMap<GroundAtom, GroundAtom>,
    pub universe: Vec<Rational>,
}

impl GroundAbaFramework {
    /// Flatness and totality of the contrary map.
    pub fn is_valid(&self) -> bool {
        self.rules.iter().all(|r| !self.assumptions.contains(&r.head))
            && self.assumptions.iter().all(|a| self.contraries.contains_key(a))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "universe": self.universe.iter().map(fmt_rational).collect::<Vec<_>>(),
            "rules": self.rules.iter().map(|r| serde_json::json!({
                "id": r.id,
                "head": r.head.to_string(),
                "body": r.body.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "assumptions": self.assumptions.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            "contraries": self.contraries.iter().map(|(a, c)| (a.to_string(), serde_json::Value::from(c.to_string()))).collect::<serde_json::Map<_, _>>(),
        })
    }
}

impl fmt::Display for GroundAbaFramework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for (a, c) in &self.contraries {
            writeln!(f, "assumption {a} contrary {c}.")?;
        }
        Ok(())
    }
}

fn ground_atom(a: &Atom, s: &BTreeMap<Var, Rational>) -> GroundAtom {
    a.ground(s).expect("all variables assigned")
}

/// All rule instances whose variables take values in `universe` and whose
/// constraints hold; constraints are evaluated away.
pub fn ground(f: &Framework, universe: &[Rational]) -> GroundAbaFramework {
    let mut rules = BTreeSet::new();
    for r in f.normalise().rules {
        let vars: Vec<Var> = r.vars().into_iter().collect();
        for s in assignments(&vars, &r.constraints, universe) {
            rules.insert(GroundRule {
                id: r.id.clone(),
                head: ground_atom(&r.head, &s),
                body: r.body.iter().map(|a| ground_atom(a, &s)).collect(),
            });
        }
    }
    let mut contraries = BTreeMap::new();
    for d in &f.assumptions {
        let mut vars = d.assumption.vars();
        vars.extend(d.contrary.vars());
        let vars: Vec<Var> = vars.into_iter().collect();
        for s in assignments(&vars, &Default::default(), universe) {
            contraries.insert(ground_atom(&d.assumption, &s), ground_atom(&d.contrary, &s));
        }
    }
    GroundAbaFramework {
        rules: rules.into_iter().collect(),
        assumptions: contraries.keys().cloned().collect(),
        contraries,
        universe: universe.to_vec(),
    }
}

/// Every (claim, assumption set) derivable by a finite tree.
pub fn classical_arguments(g: &GroundAbaFramework) -> Result<BTreeSet<GroundArgument>, OracleError> {
    classical_arguments_capped(g, DEFAULT_ARGUMENT_CAP)
}

pub fn classical_arguments_capped(g: &GroundAbaFramework, cap: usize) -> Result<BTreeSet<GroundArgument>, OracleError> {
    // supports per claim, each with the rules of its first derivation
    let mut by_claim: BTreeMap<GroundAtom, BTreeMap<BTreeSet<GroundAtom>, BTreeSet<String>>> = BTreeMap::new();
    let mut count = 0;
    for a in &g.assumptions {
        by_claim.entry(a.clone()).or_default().insert([a.clone()].into(), BTreeSet::new());
        count += 1;
    }
    if count > cap {
        return Err(OracleError::UniverseTooLarge { cap });
    }
    loop {
        let mut added = Vec::new();
        for r in &g.rules {
            let mut partial: Vec<(BTreeSet<GroundAtom>, BTreeSet<String>)> = vec![(BTreeSet::new(), [r.id.clone()].into())];
            for b in &r.body {
                let Some(supports) = by_claim.get(b) else {
                    partial.clear();
                    break;
                };
                let mut next = Vec::new();
                for (asms, rules) in &partial {
                    for (more, used) in supports {
                        next.push((asms.union(more).cloned().collect(), rules.union(used).cloned().collect()));
                    }
                }
                partial = next;
            }
            for (asms, rules) in partial {
                let known = by_claim.get(&r.head).is_some_and(|m| m.contains_key(&asms));
                if !known {
                    added.push((r.head.clone(), asms, rules));
                }
            }
        }
        if added.is_empty() {
            break;
        }
        for (claim, asms, rules) in added {
            let slot = by_claim.entry(claim).or_default();
            if let std::collections::btree_map::Entry::Vacant(e) = slot.entry(asms) {
                e.insert(rules);
                count += 1;
                if count > cap {
                    return Err(OracleError::UniverseTooLarge { cap });
                }
            }
        }
    }
    Ok(by_claim
        .into_iter()
        .flat_map(|(claim, m)| {
            m.into_iter().map(move |(assumptions, rules)| GroundArgument {
                claim: claim.clone(),
                assumptions,
                rules,
            })
        })
        .collect())
}

/// `a` attacks `b` when `a`'s claim is the contrary of one of `b`'s assumptions.
pub fn ground_attacks(g: &GroundAbaFramework, a: &GroundArgument, b: &GroundArgument) -> bool {
    b.assumptions.iter().any(|x| g.contraries.get(x) == Some(&a.claim))
}

struct AttackIndex {
    attackers: Vec<Vec<usize>>,
    targets: Vec<Vec<usize>>,
}

impl AttackIndex {
    fn new(g: &GroundAbaFramework, args: &[GroundArgument]) -> Self {
        let mut by_claim: BTreeMap<&GroundAtom, Vec<usize>> = BTreeMap::new();
        for (i, a) in args.iter().enumerate() {
            by_claim.entry(&a.claim).or_default().push(i);
        }
        let n = args.len();
        let mut attackers = vec![Vec::new(); n];
        let mut targets = vec![Vec::new(); n];
        for (j, b) in args.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for x in &b.assumptions {
                let Some(c) = g.contraries.get(x) else { continue };
                for &i in by_claim.get(c).into_iter().flatten() {
                    if seen.insert(i) {
                        attackers[j].push(i);
                        targets[i].push(j);
                    }
                }
            }
        }
        AttackIndex { attackers, targets }
    }
}

/// Whether `set` is an extension of `args` under `semantics`, by the
/// classical definitions.
pub fn is_classical_extension(
    g: &GroundAbaFramework,
    args: &BTreeSet<GroundArgument>,
    set: &BTreeSet<GroundArgument>,
    semantics: Semantics,
) -> bool {
    if !set.is_subset(args) {
        return false;
    }
    let attacked_by_set = |b: &GroundArgument| set.iter().any(|a| ground_attacks(g, a, b));
    if set.iter().any(&attacked_by_set) {
        return false;
    }
    match semantics {
        Semantics::ConflictFree => true,
        Semantics::Admissible => set.iter().all(|a| {
            args.iter()
                .filter(|b| ground_attacks(g, b, a))
                .all(&attacked_by_set)
        }),
        Semantics::Stable => args.iter().filter(|b| !set.contains(b)).all(attacked_by_set),
    }
}

/// Stable assumption sets by backtracking over assumptions. In flat ABA the
/// stable extensions are exactly the argument sets supported by these.
struct AssumptionSearch<'a> {
    /// Assumption indices each argument rests on.
    support: Vec<Vec<usize>>,
    /// Assumption indices each argument's claim is contrary to.
    hits: Vec<Vec<usize>>,
    /// Arguments attacking each assumption.
    attackers: Vec<Vec<usize>>,
    found: &'a mut Vec<Vec<bool>>,
}

impl AssumptionSearch<'_> {
    fn propagate(&self, labels: &mut [Option<bool>]) -> bool {
        loop {
            let mut changed = false;
            for (i, sup) in self.support.iter().enumerate() {
                if sup.iter().all(|&x| labels[x] == Some(true)) {
                    for &y in &self.hits[i] {
                        match labels[y] {
                            Some(true) => return false,
                            None => {
                                labels[y] = Some(false);
                                changed = true;
                            }
                            Some(false) => {}
                        }
                    }
                }
            }
            for x in 0..labels.len() {
                if labels[x] != Some(false) {
                    continue;
                }
                let live: Vec<usize> = self.attackers[x]
                    .iter()
                    .copied()
                    .filter(|&i| self.support[i].iter().all(|&y| labels[y] != Some(false)))
                    .collect();
                match live.as_slice() {
                    [] => return false,
                    [i] => {
                        for &y in &self.support[*i] {
                            if labels[y].is_none() {
                                labels[y] = Some(true);
                                changed = true;
                            }
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn run(&mut self, mut labels: Vec<Option<bool>>) {
        if !self.propagate(&mut labels) {
            return;
        }
        match labels.iter().position(Option::is_none) {
            Some(x) => {
                for choice in [true, false] {
                    let mut next = labels.clone();
                    next[x] = Some(choice);
                    self.run(next);
                }
            }
            None => self.found.push(labels.into_iter().map(|l| l == Some(true)).collect()),
        }
    }
}

fn stable_sets(g: &GroundAbaFramework, args: &[GroundArgument]) -> Vec<Vec<usize>> {
    let asms: Vec<&GroundAtom> = g.assumptions.iter().collect();
    let pos = |x: &GroundAtom| asms.iter().position(|y| *y == x);
    let support: Vec<Vec<usize>> = args
        .iter()
        .map(|a| a.assumptions.iter().filter_map(pos).collect())
        .collect();
    let hits: Vec<Vec<usize>> = args
        .iter()
        .map(|a| (0..asms.len()).filter(|&x| g.contraries.get(asms[x]) == Some(&a.claim)).collect())
        .collect();
    let mut attackers = vec![Vec::new(); asms.len()];
    for (i, h) in hits.iter().enumerate() {
        for &x in h {
            attackers[x].push(i);
        }
    }
    let mut found = Vec::new();
    AssumptionSearch {
        support: support.clone(),
        hits,
        attackers,
        found: &mut found,
    }
    .run(vec![None; asms.len()]);
    found
        .into_iter()
        .map(|inside| {
            (0..args.len())
                .filter(|&i| support[i].iter().all(|&x| inside[x]))
                .collect()
        })
        .collect()
}

fn conflict_free_sets(idx: &AttackIndex, n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, idx: &AttackIndex, chosen: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push((0..n).filter(|&k| chosen[k]).collect());
            return;
        }
        go(i + 1, n, idx, chosen, out);
        let clash = idx.attackers[i].iter().any(|&k| k == i || chosen[k]) || idx.targets[i].iter().any(|&k| chosen[k]);
        if !clash {
            chosen[i] = true;
            go(i + 1, n, idx, chosen, out);
            chosen[i] = false;
        }
    }
    let mut out = Vec::new();
    go(0, n, idx, &mut vec![false; n], &mut out);
    out
}

/// All extensions of the grounding under `semantics`. Stable extensions are
/// found through stable assumption sets; the other semantics enumerate every
/// conflict-free subset, which is exponential in the argument count.
pub fn classical_extensions(
    g: &GroundAbaFramework,
    semantics: Semantics,
) -> Result<Vec<BTreeSet<GroundArgument>>, OracleError> {
    let args: Vec<GroundArgument> = classical_arguments(g)?.into_iter().collect();
    let idx = AttackIndex::new(g, &args);
    let n = args.len();
    let chosen = match semantics {
        Semantics::Stable => stable_sets(g, &args),
        Semantics::ConflictFree => conflict_free_sets(&idx, n),
        Semantics::Admissible => conflict_free_sets(&idx, n)
            .into_iter()
            .filter(|s| {
                let mut inside = vec![false; n];
                for &i in s {
                    inside[i] = true;
                }
                let defended = |b: usize| idx.attackers[b].iter().any(|&k| inside[k]);
                s.iter().all(|&a| idx.attackers[a].iter().all(|&b| defended(b)))
            })
            .collect(),
    };
    let mut out: Vec<BTreeSet<GroundArgument>> = chosen
        .into_iter()
        .map(|s| s.into_iter().map(|i| args[i].clone()).collect())
        .collect();
    out.sort();
    Ok(out)
}

/// A constraint in the order fragment: the constant it compares against,
/// or `None` for a variable equality or disequality, or a ground constraint.
fn fragment_constant(c: &Constraint) -> Result<Option<Rational>, String> {
    let e = c.expr();
    let coeffs: Vec<&Rational> = e.coeffs().values().collect();
    match coeffs.as_slice() {
        [] => Ok(None),
        [a] => Ok(Some(-e.constant_part() / *a)),
        [a, b] if matches!(c.rel(), Rel::Eq | Rel::Ne) && e.constant_part().is_zero() && (*a + *b).is_zero() => {
            Ok(None)
        }
        _ => Err(format!("constraint `{c}` is outside the order fragment")),
    }
}

fn atom_constants(a: &Atom, out: &mut BTreeSet<Rational>) -> Result<(), String> {
    for t in &a.args {
        if t.is_constant() {
            out.insert(t.constant_part().clone());
        } else if t.as_var().is_none() {
            return Err(format!("argument `{a}` uses a compound term"));
        }
    }
    Ok(())
}

/// Checks the certificate described in the module docs for `f` and `args`.
pub fn adequacy(f: &Framework, args: &[ConstrainedArgument], universe: &[Rational]) -> Result<(), String> {
    let mut consts = BTreeSet::new();
    let mut constraints: Vec<&Constraint> = Vec::new();
    let norm = f.normalise();
    for r in &norm.rules {
        constraints.extend(r.constraints.iter());
    }
    for a in args {
        constraints.extend(a.constraints.iter());
        atom_constants(&a.claim, &mut consts)?;
        for x in &a.assumptions {
            atom_constants(x, &mut consts)?;
        }
    }
    for d in &f.assumptions {
        atom_constants(&d.assumption, &mut consts)?;
        atom_constants(&d.contrary, &mut consts)?;
    }
    for c in constraints {
        if let Some(k) = fragment_constant(c)? {
            consts.insert(k);
        }
    }
    if let Some(k) = consts.iter().find(|k| !universe.contains(k)) {
        return Err(format!("constant {} is not in the universe", fmt_rational(k)));
    }
    let need = args
        .iter()
        .map(|a| a.vars().len())
        .chain(norm.rules.iter().map(|r| r.vars().len()))
        .chain(f.assumptions.iter().map(|d| d.assumption.vars().union(&d.contrary.vars()).count()))
        .max()
        .unwrap_or(0);
    let consts: Vec<&Rational> = consts.iter().collect();
    let mut bounds: Vec<(Option<&Rational>, Option<&Rational>)> = Vec::new();
    bounds.push((None, consts.first().copied()));
    for w in consts.windows(2) {
        bounds.push((Some(w[0]), Some(w[1])));
    }
    if let Some(&last) = consts.last() {
        bounds.push((Some(last), None));
    }
    for (lo, hi) in bounds {
        let inside = universe
            .iter()
            .filter(|u| lo.is_none_or(|l| *u > l) && hi.is_none_or(|h| *u < h))
            .count();
        if inside < need {
            let show = |b: Option<&Rational>, inf: &str| b.map(fmt_rational).unwrap_or_else(|| inf.to_string());
            return Err(format!(
                "interval ({}, {}) holds {inside} universe points, {need} needed",
                show(lo, "-inf"),
                show(hi, "+inf")
            ));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Arguments,
    Attacks,
    Extension,
}

impl fmt::Display for CheckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckMode::Arguments => "arguments",
            CheckMode::Attacks => "attacks",
            CheckMode::Extension => "extension",
        })
    }
}

impl std::str::FromStr for CheckMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "arguments" => Ok(CheckMode::Arguments),
            "attacks" => Ok(CheckMode::Attacks),
            "extension" | "extensions" => Ok(CheckMode::Extension),
            _ => Err(format!("unknown mode `{s}` (expected arguments, attacks or extension)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "EXACT-MATCH")]
    ExactMatch,
    #[serde(rename = "PARTIAL")]
    Partial,
    #[serde(rename = "MISMATCH")]
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ExactMatch => "EXACT-MATCH",
            Verdict::Partial => "PARTIAL",
            Verdict::Mismatch => "MISMATCH",
        })
    }
}

/// What is being checked against the grounding.
#[derive(Clone, Debug)]
pub enum NativeResult {
    /// A set of arguments, e.g. MGCArg output or a split basis.
    Arguments(Vec<ConstrainedArgument>),
    /// Extensions over a basis. With `complete`, they must be every subset
    /// of the basis whose ground instances form a classical extension.
    Extensions {
        basis: Vec<ConstrainedArgument>,
        semantics: Semantics,
        extensions: Vec<Vec<ConstrainedArgument>>,
        complete: bool,
    },
}

impl NativeResult {
    fn arguments(&self) -> &[ConstrainedArgument] {
        match self {
            NativeResult::Arguments(a) => a,
            NativeResult::Extensions { basis, .. } => basis,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub mode: CheckMode,
    pub verdict: Verdict,
    /// Why the universe is not certified, if it is not.
    pub uncertified: Option<String>,
    pub witness: Option<String>,
    pub checked: usize,
    /// Classical extensions that contain some but not all ground instances
    /// of a basis argument. No subset of the basis grounds to them, so they
    /// are outside what native extensions describe.
    pub unrepresentable: usize,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {} items checked)", self.verdict, self.mode, self.checked)?;
        if let Some(w) = &self.witness {
            write!(f, "\nwitness: {w}")?;
        }
        if let Some(u) = &self.uncertified {
            write!(f, "\nuncertified: {u}")?;
        }
        if self.unrepresentable > 0 {
            write!(
                f,
                "\nnote: {} classical extension(s) separate instances of one basis argument",
                self.unrepresentable
            )?;
        }
        Ok(())
    }
}

fn show_set(s: &BTreeSet<GroundArgument>) -> String {
    let items: Vec<String> = s.iter().map(|a| a.to_string()).collect();
    format!("[{}]", items.join("; "))
}

fn ground_attack_kind(
    g: &GroundAbaFramework,
    xs: &BTreeSet<GroundArgument>,
    ys: &BTreeSet<GroundArgument>,
) -> Option<AttackKind> {
    let claims: BTreeSet<&GroundAtom> = xs.iter().map(|a| &a.claim).collect();
    let hit = ys
        .iter()
        .filter(|b| b.assumptions.iter().any(|x| g.contraries.get(x).is_some_and(|c| claims.contains(c))))
        .count();
    if hit == 0 {
        None
    } else if hit == ys.len() {
        Some(AttackKind::Full)
    } else {
        Some(AttackKind::Partial)
    }
}

/// Compares a native result with the grounding of `f` over `universe`.
pub fn cross_check(
    f: &Framework,
    universe: &[Rational],
    native: &NativeResult,
    mode: CheckMode,
) -> Result<Report, OracleError> {
    if universe.is_empty() {
        return Err(OracleError::EmptyUniverse);
    }
    let g = ground(f, universe);
    let uncertified = adequacy(f, native.arguments(), universe).err();
    let certified = uncertified.is_none();
    let report = |verdict, witness, checked| Report {
        mode,
        verdict,
        uncertified: uncertified.clone(),
        witness,
        checked,
        unrepresentable: 0,
    };
    match mode {
        CheckMode::Arguments => {
            let classical = classical_arguments(&g)?;
            let native = ground_instances_of(native.arguments(), universe);
            let witness = native
                .symmetric_difference(&classical)
                .next()
                .map(|a| {
                    let side = if native.contains(a) { "native only" } else { "classical only" };
                    format!("{a} ({side})")
                });
            let verdict = if witness.is_some() { Verdict::Mismatch } else { Verdict::ExactMatch };
            Ok(report(verdict, witness, classical.len()))
        }
        CheckMode::Attacks => {
            let args = native.arguments();
            let inst: Vec<BTreeSet<GroundArgument>> = args.iter().map(|a| ground_instances(a, universe)).collect();
            let mut checked = 0;
            for (i, a) in args.iter().enumerate() {
                for (j, b) in args.iter().enumerate() {
                    checked += 1;
                    let n = attack_kind(f, a, b);
                    let c = ground_attack_kind(&g, &inst[i], &inst[j]);
                    // without the certificate only a ground attack the native
                    // side misses is a definite error
                    let wrong = if certified { n != c } else { n.is_none() && c.is_some() };
                    if wrong {
                        let show = |k: Option<AttackKind>| k.map_or("none".to_string(), |k| k.to_string());
                        let w = format!("{} on {}: native {}, ground {}", a.id, b.id, show(n), show(c));
                        return Ok(report(Verdict::Mismatch, Some(w), checked));
                    }
                }
            }
            let verdict = if certified { Verdict::ExactMatch } else { Verdict::Partial };
            Ok(report(verdict, None, checked))
        }
        CheckMode::Extension => {
            let NativeResult::Extensions {
                basis,
                semantics,
                extensions,
                complete,
            } = native
            else {
                return Err(OracleError::WrongInput {
                    mode,
                    needs: "native extensions",
                });
            };
            let classical_args = classical_arguments(&g)?;
            let mut witness = None;
            let natives: Vec<BTreeSet<GroundArgument>> =
                extensions.iter().map(|e| ground_instances_of(e, universe)).collect();
            for e in &natives {
                if !is_classical_extension(&g, &classical_args, e, *semantics) {
                    witness = Some(format!("{} is not a classical {semantics} extension", show_set(e)));
                    break;
                }
            }
            let mut checked = natives.len();
            let mut unrepresentable = 0;
            if witness.is_none() && *complete {
                let pieces: Vec<BTreeSet<GroundArgument>> =
                    basis.iter().map(|a| ground_instances(a, universe)).collect();
                let classical = classical_extensions(&g, *semantics)?;
                checked = classical.len();
                for e in &classical {
                    let union: BTreeSet<GroundArgument> = pieces
                        .iter()
                        .filter(|p| p.is_subset(e))
                        .flat_map(|p| p.iter().cloned())
                        .collect();
                    if union != *e {
                        unrepresentable += 1;
                    } else if witness.is_none() && !natives.contains(e) {
                        witness = Some(format!("classical {semantics} extension {} has no native counterpart", show_set(e)));
                    }
                }
            }
            let verdict = match (&witness, certified) {
                (Some(_), true) => Verdict::Mismatch,
                (Some(_), false) | (None, false) => Verdict::Partial,
                (None, true) => Verdict::ExactMatch,
            };
            let mut r = report(verdict, witness, checked);
            r.unrepresentable = unrepresentable;
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use caba_lra::rat;

    fn universe(src: &str) -> Vec<Rational> {
        parse_universe(src).unwrap()
    }

    #[test]
    fn universe_syntax() {
        assert_eq!(universe("0..3"), [rat(0), rat(1), rat(2), rat(3)]);
        assert_eq!(universe("3, 1/2, 0, 3").len(), 3);
        assert!(parse_universe("").is_err());
        assert!(parse_universe("a..b").is_err());
        assert!(parse_universe("1,X").is_err());
    }

    #[test]
    fn fa_at_zero() {
        let f = Framework::parse(include_str!("../../../corpus/fa.caba")).unwrap();
        let g = ground(&f, &[rat(0)]);
        let shown: Vec<String> = g.rules.iter().map(|r| r.to_string()).collect();
        // R1 keeps s(0) in its body; only the s rule rejects 0
        assert_eq!(
            shown,
            ["R1: p(0) <- a(0,0), b(0), s(0).", "R2: p(0) <- a(0,0), cb(0).", "R5: cb(0)."]
        );
        assert!(g.is_valid());
    }

    #[test]
    fn assumptions_only() {
        let f = Framework::parse("assumption a(X) contrary c(X).").unwrap();
        let g = ground(&f, &universe("1..2"));
        assert!(g.rules.is_empty());
        assert_eq!(g.assumptions.len(), 2);
        assert_eq!(classical_arguments(&g).unwrap().len(), 2);
        assert_eq!(classical_extensions(&g, Semantics::Stable).unwrap().len(), 1);
    }

    #[test]
    fn argument_cap() {
        let f = Framework::parse("assumption a(X) contrary c(X).").unwrap();
        let g = ground(&f, &universe("1..20"));
        assert_eq!(
            classical_arguments_capped(&g, 5),
            Err(OracleError::UniverseTooLarge { cap: 5 })
        );
    }

    #[test]
    fn adequacy_certificate() {
        let f = Framework::parse("p(X) <- X > 4, a(X). assumption a(X) contrary c(X).").unwrap();
        let args = crate::arguments::build_mgcarg(&f, 16).unwrap();
        assert!(adequacy(&f, &args, &universe("0..8")).is_ok());
        assert!(adequacy(&f, &args, &universe("0..3")).is_err());
        let g = Framework::parse("p(X) <- X = Y + 1, a(Y). assumption a(X) contrary c(X).").unwrap();
        assert!(adequacy(&g, &[], &universe("0..8")).is_err());
    }
}
