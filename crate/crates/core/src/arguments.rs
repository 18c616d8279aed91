//! Constrained arguments and their construction by backward chaining.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use caba_lra::syntax::{Cursor, ParseError, Tok};
use caba_lra::{is_consistent, Constraint, ConstraintSet, LinearTerm, Rational, Var, VarGen};
use serde::Serialize;
use thiserror::Error;

use crate::framework::{parse_atom, Atom, FreshNames, Framework, GroundAtom, Rule};

pub const DEFAULT_MAX_DEPTH: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArgumentError {
    #[error("derivation depth exceeded the limit of {max_depth} on recursive rules; argument set is incomplete")]
    DepthExceeded { max_depth: usize },
    #[error("instance constraints are inconsistent")]
    InconsistentInstance,
}

/// Proof tree of a constrained argument.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub atom: Atom,
    /// `None` for assumption leaves.
    pub rule: Option<String>,
    pub children: Vec<Derivation>,
}

impl Derivation {
    fn rename(&self, map: &BTreeMap<Var, Var>) -> Derivation {
        Derivation {
            atom: self.atom.rename(map),
            rule: self.rule.clone(),
            children: self.children.iter().map(|c| c.rename(map)).collect(),
        }
    }

    /// Indented rendering, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        let tag = match &self.rule {
            Some(r) => format!("  [{r}]"),
            None => "  [assumption]".to_string(),
        };
        out.push_str(&format!("{}{}{tag}\n", "  ".repeat(depth), self.atom));
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }
}

/// `C ∪ A ⊢_R s`.
#[derive(Clone, Debug)]
pub struct ConstrainedArgument {
    pub id: String,
    pub claim: Atom,
    pub constraints: ConstraintSet,
    pub assumptions: BTreeSet<Atom>,
    pub rules: BTreeSet<String>,
    pub derivation: Option<Derivation>,
}

impl PartialEq for ConstrainedArgument {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.same_content(other)
    }
}

impl Eq for ConstrainedArgument {}

impl ConstrainedArgument {
    pub fn new(
        id: impl Into<String>,
        claim: Atom,
        constraints: ConstraintSet,
        assumptions: impl IntoIterator<Item = Atom>,
    ) -> Self {
        ConstrainedArgument {
            id: id.into(),
            claim,
            constraints,
            assumptions: assumptions.into_iter().collect(),
            rules: BTreeSet::new(),
            derivation: None,
        }
    }

    /// Structural equality ignoring id and derivation.
    pub fn same_content(&self, other: &Self) -> bool {
        self.claim == other.claim
            && self.constraints == other.constraints
            && self.assumptions == other.assumptions
            && self.rules == other.rules
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.visible_vars();
        out.extend(self.constraints.vars());
        out
    }

    /// Variables of the claim and the assumptions.
    pub fn visible_vars(&self) -> BTreeSet<Var> {
        let mut out = self.claim.vars();
        for a in &self.assumptions {
            out.extend(a.vars());
        }
        out
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> ConstrainedArgument {
        ConstrainedArgument {
            id: self.id.clone(),
            claim: self.claim.rename(map),
            constraints: self.constraints.rename(map),
            assumptions: self.assumptions.iter().map(|a| a.rename(map)).collect(),
            rules: self.rules.clone(),
            derivation: self.derivation.as_ref().map(|d| d.rename(map)),
        }
    }

    /// A copy whose variables are all fresh from `gen`.
    pub fn rename_apart(&self, gen: &mut VarGen) -> ConstrainedArgument {
        let map: BTreeMap<Var, Var> = self.vars().into_iter().map(|v| (v, gen.fresh())).collect();
        self.rename(&map)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn assumption_predicates(&self) -> BTreeSet<&str> {
        self.assumptions.iter().map(|a| a.predicate.as_str()).collect()
    }

    /// Rendering without id or rules, used for deterministic tie-breaks.
    pub fn body_text(&self) -> String {
        let mut items: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        items.extend(self.assumptions.iter().map(|a| a.to_string()));
        format!("{{{}}} |- {}", items.join(", "), self.claim)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ArgumentJson {
            id: &self.id,
            claim: self.claim.to_string(),
            constraints: self.constraints.iter().map(|c| c.to_string()).collect(),
            assumptions: self.assumptions.iter().map(|a| a.to_string()).collect(),
            rules: self.rules.iter().cloned().collect(),
        })
        .expect("argument serialises")
    }
}

#[derive(Serialize)]
struct ArgumentJson<'a> {
    id: &'a str,
    claim: String,
    constraints: Vec<String>,
    assumptions: Vec<String>,
    rules: Vec<String>,
}

impl fmt::Display for ConstrainedArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.constraints.iter().map(|c| c.to_string()).collect();
        let asms: Vec<String> = self.assumptions.iter().map(|a| a.to_string()).collect();
        let rules: Vec<&str> = self.rules.iter().map(String::as_str).collect();
        write!(
            f,
            "{{{} ; {}}} |-{{{}}} {}",
            cs.join(", "),
            asms.join(", "),
            rules.join(","),
            self.claim
        )
    }
}

/// Parses `{c1, ..., a1(X), ...} |- s` or `{C ; A} |-{R} s`.
pub fn parse_argument(id: &str, src: &str) -> Result<ConstrainedArgument, ParseError> {
    let mut cur = Cursor::new(src)?;
    cur.expect(&Tok::LBrace)?;
    let mut constraints = ConstraintSet::new();
    let mut assumptions = BTreeSet::new();
    loop {
        if cur.peek() == Some(&Tok::RBrace) {
            break;
        }
        if cur.eat(&Tok::Semicolon) {
            continue;
        }
        if matches!(cur.peek(), Some(Tok::Ident(_))) {
            assumptions.insert(parse_atom(&mut cur)?);
        } else {
            constraints.insert(cur.constraint()?);
        }
        if !(cur.eat(&Tok::Comma) || cur.eat(&Tok::Semicolon)) {
            break;
        }
    }
    cur.expect(&Tok::RBrace)?;
    cur.expect(&Tok::Turnstile)?;
    let mut rules = BTreeSet::new();
    if cur.eat(&Tok::LBrace) {
        while !cur.eat(&Tok::RBrace) {
            match cur.bump() {
                Some(Tok::Ident(s)) | Some(Tok::Var(s)) => {
                    rules.insert(s);
                }
                Some(Tok::Comma) => {}
                _ => return Err(cur.error("expected a rule id")),
            }
        }
    }
    let claim = parse_atom(&mut cur)?;
    cur.finish()?;
    let mut a = ConstrainedArgument::new(id, claim, constraints, assumptions);
    a.rules = rules;
    Ok(a)
}

/// Whether `b` is `a` with its variables bijectively renamed.
pub fn is_renaming(a: &ConstrainedArgument, b: &ConstrainedArgument) -> bool {
    if a.claim.predicate != b.claim.predicate
        || a.claim.arity() != b.claim.arity()
        || a.assumptions.len() != b.assumptions.len()
        || a.constraints.len() != b.constraints.len()
        || a.rules != b.rules
    {
        return false;
    }
    let mut bij = Bijection::default();
    if !bij.bind_atom(&a.claim, &b.claim) {
        return false;
    }
    let asms_a: Vec<&Atom> = a.assumptions.iter().collect();
    let asms_b: Vec<&Atom> = b.assumptions.iter().collect();
    let mut used = vec![false; asms_b.len()];
    match_assumptions(a, b, &asms_a, &asms_b, &mut used, bij)
}

#[derive(Clone, Default)]
struct Bijection {
    fwd: BTreeMap<Var, Var>,
    bwd: BTreeMap<Var, Var>,
}

impl Bijection {
    fn bind(&mut self, x: &Var, y: &Var) -> bool {
        match (self.fwd.get(x), self.bwd.get(y)) {
            (Some(y2), _) => y2 == y,
            (None, Some(_)) => false,
            (None, None) => {
                self.fwd.insert(x.clone(), y.clone());
                self.bwd.insert(y.clone(), x.clone());
                true
            }
        }
    }

    fn bind_atom(&mut self, a: &Atom, b: &Atom) -> bool {
        if a.predicate != b.predicate || a.arity() != b.arity() {
            return false;
        }
        for (s, t) in a.args.iter().zip(&b.args) {
            match (s.as_var(), t.as_var()) {
                (Some(x), Some(y)) => {
                    if !self.bind(x, y) {
                        return false;
                    }
                }
                (None, None) => {
                    if s.coeffs().len() != t.coeffs().len() {
                        return false;
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

fn match_assumptions(
    a: &ConstrainedArgument,
    b: &ConstrainedArgument,
    asms_a: &[&Atom],
    asms_b: &[&Atom],
    used: &mut [bool],
    bij: Bijection,
) -> bool {
    let Some((first, rest)) = asms_a.split_first() else {
        return match_remaining(a, b, bij);
    };
    for (j, cand) in asms_b.iter().enumerate() {
        if used[j] {
            continue;
        }
        let mut next = bij.clone();
        if next.bind_atom(first, cand) {
            used[j] = true;
            if match_assumptions(a, b, rest, asms_b, used, next) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}

fn match_remaining(a: &ConstrainedArgument, b: &ConstrainedArgument, bij: Bijection) -> bool {
    let free_a: Vec<Var> = a.vars().into_iter().filter(|v| !bij.fwd.contains_key(v)).collect();
    let free_b: Vec<Var> = b.vars().into_iter().filter(|v| !bij.bwd.contains_key(v)).collect();
    if free_a.len() != free_b.len() {
        return false;
    }
    let check = |map: &BTreeMap<Var, Var>| {
        let r = a.rename(map);
        r.claim == b.claim && r.assumptions == b.assumptions && r.constraints == b.constraints
    };
    let mut perm: Vec<usize> = (0..free_b.len()).collect();
    loop {
        let mut map = bij.fwd.clone();
        for (i, v) in free_a.iter().enumerate() {
            map.insert(v.clone(), free_b[perm[i]].clone());
        }
        if check(&map) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Partial result of backward chaining.
#[derive(Clone)]
struct Partial {
    constraints: ConstraintSet,
    assumptions: Vec<Atom>,
    rules: BTreeSet<String>,
    children: Vec<Derivation>,
}

struct Builder<'a> {
    rules: Vec<Rule>,
    framework: &'a Framework,
    gen: VarGen,
    max_depth: Option<usize>,
}

impl Builder<'_> {
    fn derive(&mut self, goal: &Atom, depth: usize) -> Result<Vec<(Partial, Derivation)>, ArgumentError> {
        if self.framework.is_assumption(&goal.predicate) {
            let leaf = Derivation {
                atom: goal.clone(),
                rule: None,
                children: Vec::new(),
            };
            let p = Partial {
                constraints: ConstraintSet::new(),
                assumptions: vec![goal.clone()],
                rules: BTreeSet::new(),
                children: Vec::new(),
            };
            return Ok(vec![(p, leaf)]);
        }
        if let Some(max) = self.max_depth {
            if depth >= max {
                return Err(ArgumentError::DepthExceeded { max_depth: max });
            }
        }
        let goal_vars = goal.distinct_vars().expect("goals carry distinct variables");
        let mut out = Vec::new();
        let candidates: Vec<Rule> = self
            .rules
            .iter()
            .filter(|r| r.head.predicate == goal.predicate)
            .cloned()
            .collect();
        for rule in candidates {
            let head_vars = rule.head.distinct_vars().expect("rules are normalised");
            let mut map: BTreeMap<Var, Var> = head_vars.into_iter().zip(goal_vars.iter().cloned()).collect();
            for v in rule.vars() {
                if let std::collections::btree_map::Entry::Vacant(e) = map.entry(v) {
                    e.insert(self.gen.fresh());
                }
            }
            let constraints = rule.constraints.rename(&map);
            if !is_consistent(&constraints) {
                continue;
            }
            let mut partials = vec![Partial {
                constraints,
                assumptions: Vec::new(),
                rules: std::iter::once(rule.id.clone()).collect(),
                children: Vec::new(),
            }];
            for atom in &rule.body {
                let sub = self.derive(&atom.rename(&map), depth + 1)?;
                let mut next = Vec::new();
                for p in &partials {
                    for (s, tree) in &sub {
                        let merged = p.constraints.union(&s.constraints);
                        if !is_consistent(&merged) {
                            continue;
                        }
                        let mut assumptions = p.assumptions.clone();
                        for a in &s.assumptions {
                            if !assumptions.contains(a) {
                                assumptions.push(a.clone());
                            }
                        }
                        let mut children = p.children.clone();
                        children.push(tree.clone());
                        next.push(Partial {
                            constraints: merged,
                            assumptions,
                            rules: p.rules.union(&s.rules).cloned().collect(),
                            children,
                        });
                    }
                }
                partials = next;
                if partials.is_empty() {
                    break;
                }
            }
            for p in partials {
                let tree = Derivation {
                    atom: goal.clone(),
                    rule: Some(rule.id.clone()),
                    children: p.children.clone(),
                };
                out.push((p, tree));
            }
        }
        Ok(out)
    }
}

/// Whether the predicate dependency graph (head → body) has a cycle.
pub fn is_recursive(f: &Framework) -> bool {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in &f.rules {
        edges
            .entry(&r.head.predicate)
            .or_default()
            .extend(r.body.iter().map(|a| a.predicate.as_str()));
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    fn visit<'a>(n: &'a str, edges: &BTreeMap<&'a str, BTreeSet<&'a str>>, marks: &mut BTreeMap<&'a str, Mark>) -> bool {
        match marks.get(n) {
            Some(Mark::Open) => return true,
            Some(Mark::Done) => return false,
            None => {}
        }
        marks.insert(n, Mark::Open);
        if let Some(next) = edges.get(n) {
            for m in next {
                if visit(m, edges, marks) {
                    return true;
                }
            }
        }
        marks.insert(n, Mark::Done);
        false
    }
    let mut marks = BTreeMap::new();
    edges.keys().any(|n| visit(n, &edges, &mut marks))
}

/// Renames variables to `X, Y, Z, U, V, W, X1, ...` by first occurrence in
/// the claim, then the assumptions in derivation order, then the constraints.
fn canonical(
    claim: &Atom,
    assumptions: &[Atom],
    constraints: &ConstraintSet,
) -> BTreeMap<Var, Var> {
    let mut order: Vec<Var> = Vec::new();
    let mut push = |v: &Var| {
        if !order.contains(v) {
            order.push(v.clone());
        }
    };
    claim.vars_in_order().iter().for_each(&mut push);
    for a in assumptions {
        a.vars_in_order().iter().for_each(&mut push);
    }
    for c in constraints.iter() {
        c.vars().for_each(&mut push);
    }
    order
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, FreshNames::nth(i)))
        .collect()
}

/// The most general constrained arguments of `f`, one per renaming class,
/// with ids `A1, A2, ...`. Rule-derived claims come first, in order of the
/// first rule for each head predicate, followed by the assumption arguments
/// in declaration order. `max_depth` only applies when rules are recursive.
pub fn build_mgcarg(f: &Framework, max_depth: usize) -> Result<Vec<ConstrainedArgument>, ArgumentError> {
    let nf = f.normalise();
    let mut builder = Builder {
        rules: nf.rules.clone(),
        framework: f,
        gen: VarGen::new(),
        max_depth: is_recursive(f).then_some(max_depth),
    };
    let arities = f.arities();
    let mut preds: Vec<&str> = Vec::new();
    for r in &nf.rules {
        if !preds.contains(&r.head.predicate.as_str()) {
            preds.push(&r.head.predicate);
        }
    }
    for (p, _) in f.assumption_predicates() {
        if !preds.contains(&p) {
            preds.push(p);
        }
    }
    let mut out: Vec<ConstrainedArgument> = Vec::new();
    for p in preds {
        let vars: Vec<Var> = (0..arities[p]).map(|_| builder.gen.fresh()).collect();
        let goal = Atom::with_vars(p, &vars);
        for (partial, tree) in builder.derive(&goal, 0)? {
            let map = canonical(&goal, &partial.assumptions, &partial.constraints);
            let arg = ConstrainedArgument {
                id: String::new(),
                claim: goal.rename(&map),
                constraints: partial.constraints.rename(&map),
                assumptions: partial.assumptions.iter().map(|a| a.rename(&map)).collect(),
                rules: partial.rules,
                derivation: Some(tree.rename(&map)),
            };
            if !out.iter().any(|b| is_renaming(&arg, b)) {
                out.push(arg);
            }
        }
    }
    for (i, a) in out.iter_mut().enumerate() {
        a.id = format!("A{}", i + 1);
    }
    Ok(out)
}

/// `(Cϑ ∪ D) ∪ Aϑ ⊢ sϑ`.
pub fn constrained_instance(
    a: &ConstrainedArgument,
    subst: &BTreeMap<Var, LinearTerm>,
    extra: &ConstraintSet,
) -> Result<ConstrainedArgument, ArgumentError> {
    let constraints = a.constraints.substitute_all(subst).union(extra);
    if !is_consistent(&constraints) {
        return Err(ArgumentError::InconsistentInstance);
    }
    Ok(ConstrainedArgument {
        id: a.id.clone(),
        claim: a.claim.substitute_all(subst),
        constraints,
        assumptions: a.assumptions.iter().map(|x| x.substitute_all(subst)).collect(),
        rules: a.rules.clone(),
        derivation: None,
    })
}

fn generalise_atom(
    atom: &Atom,
    fresh: &mut dyn FnMut() -> Var,
    force: bool,
    eqs: &mut ConstraintSet,
) -> Atom {
    let mut seen: Vec<Var> = Vec::new();
    let args = atom
        .args
        .iter()
        .map(|t| match t.as_var() {
            Some(v) if !force && !seen.contains(v) => {
                seen.push(v.clone());
                t.clone()
            }
            _ => {
                let v = fresh();
                eqs.insert(Constraint::eq(LinearTerm::var(v.clone()), t.clone()));
                LinearTerm::var(v)
            }
        })
        .collect();
    Atom::new(atom.predicate.clone(), args)
}

/// Replaces claim arguments that are not distinct variables by fresh
/// variables, adding the matching equalities.
pub fn generalise_claim(a: &ConstrainedArgument) -> ConstrainedArgument {
    let avoid = a.vars();
    let mut names = FreshNames::default();
    let mut eqs = ConstraintSet::new();
    let claim = generalise_atom(&a.claim, &mut || names.next(&avoid), false, &mut eqs);
    ConstrainedArgument {
        claim,
        constraints: a.constraints.union(&eqs),
        ..a.clone()
    }
}

/// Replaces every claim argument by the given fresh variables.
pub fn generalise_claim_with(a: &ConstrainedArgument, fresh: &[Var]) -> ConstrainedArgument {
    assert_eq!(fresh.len(), a.claim.arity(), "one fresh variable per claim argument");
    let mut it = fresh.iter().cloned();
    let mut eqs = ConstraintSet::new();
    let claim = generalise_atom(&a.claim, &mut || it.next().expect("enough variables"), true, &mut eqs);
    ConstrainedArgument {
        claim,
        constraints: a.constraints.union(&eqs),
        ..a.clone()
    }
}

/// Replaces the arguments of one assumption by the given fresh variables.
pub fn generalise_assumption(a: &ConstrainedArgument, target: &Atom, fresh: &[Var]) -> ConstrainedArgument {
    assert!(a.assumptions.contains(target), "assumption belongs to the argument");
    let mut it = fresh.iter().cloned();
    let mut eqs = ConstraintSet::new();
    let replaced = generalise_atom(target, &mut || it.next().expect("enough variables"), true, &mut eqs);
    let mut assumptions = a.assumptions.clone();
    assumptions.remove(target);
    assumptions.insert(replaced);
    ConstrainedArgument {
        assumptions,
        constraints: a.constraints.union(&eqs),
        ..a.clone()
    }
}

/// A ground argument identified by its claim and assumption set. Rules are
/// carried along for display but do not take part in comparisons.
#[derive(Clone, Debug)]
pub struct GroundArgument {
    pub claim: GroundAtom,
    pub assumptions: BTreeSet<GroundAtom>,
    pub rules: BTreeSet<String>,
}

impl GroundArgument {
    fn key(&self) -> (&GroundAtom, &BTreeSet<GroundAtom>) {
        (&self.claim, &self.assumptions)
    }
}

impl PartialEq for GroundArgument {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for GroundArgument {}

impl PartialOrd for GroundArgument {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroundArgument {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for GroundArgument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let asms: Vec<String> = self.assumptions.iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}} |- {}", asms.join(", "), self.claim)
    }
}

/// Every assignment of `vars` over `universe` satisfying `constraints`,
/// checking each constraint as soon as its variables are assigned.
pub fn assignments(
    vars: &[Var],
    constraints: &ConstraintSet,
    universe: &[Rational],
) -> Vec<BTreeMap<Var, Rational>> {
    let mut checks: Vec<Vec<&Constraint>> = vec![Vec::new(); vars.len() + 1];
    for c in constraints.iter() {
        let last = c
            .vars()
            .map(|v| vars.iter().position(|w| w == v).expect("variable listed") + 1)
            .max()
            .unwrap_or(0);
        checks[last].push(c);
    }
    if checks[0].iter().any(|c| c.ground_value() == Some(false)) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    fn go(
        k: usize,
        vars: &[Var],
        checks: &[Vec<&Constraint>],
        universe: &[Rational],
        current: &mut BTreeMap<Var, Rational>,
        out: &mut Vec<BTreeMap<Var, Rational>>,
    ) {
        if k == vars.len() {
            out.push(current.clone());
            return;
        }
        for u in universe {
            current.insert(vars[k].clone(), u.clone());
            if checks[k + 1].iter().all(|c| c.holds(current) == Some(true)) {
                go(k + 1, vars, checks, universe, current, out);
            }
        }
        current.remove(&vars[k]);
    }
    go(0, vars, &checks, universe, &mut current, &mut out);
    out
}

/// Ground instances of `a` whose variables all range over `universe`.
pub fn ground_instances(a: &ConstrainedArgument, universe: &[Rational]) -> BTreeSet<GroundArgument> {
    let vars: Vec<Var> = a.vars().into_iter().collect();
    assignments(&vars, &a.constraints, universe)
        .into_iter()
        .map(|s| GroundArgument {
            claim: a.claim.ground(&s).expect("all variables assigned"),
            assumptions: a
                .assumptions
                .iter()
                .map(|x| x.ground(&s).expect("all variables assigned"))
                .collect(),
            rules: a.rules.clone(),
        })
        .collect()
}

/// Union of [`ground_instances`] over a set.
pub fn ground_instances_of(args: &[ConstrainedArgument], universe: &[Rational]) -> BTreeSet<GroundArgument> {
    args.iter().flat_map(|a| ground_instances(a, universe)).collect()
}
