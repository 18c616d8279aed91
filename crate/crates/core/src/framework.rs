//! Frameworks: rules, assumption declarations and contraries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use caba_lra::syntax::{Cursor, ParseError, Tok};
use caba_lra::{fmt_rational, Constraint, ConstraintSet, LinearTerm, Rational, Var};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `p(t1,...,tn)` with linear terms as arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<LinearTerm>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<LinearTerm>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn with_vars(predicate: impl Into<String>, vars: &[Var]) -> Self {
        Atom::new(predicate, vars.iter().cloned().map(LinearTerm::var).collect())
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.args.iter().flat_map(|t| t.vars().cloned()).collect()
    }

    /// Variables in order of first occurrence.
    pub fn vars_in_order(&self) -> Vec<Var> {
        let mut out: Vec<Var> = Vec::new();
        for t in &self.args {
            for v in t.vars() {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
        out
    }

    /// The arguments when they are pairwise distinct plain variables.
    pub fn distinct_vars(&self) -> Option<Vec<Var>> {
        let mut out: Vec<Var> = Vec::with_capacity(self.args.len());
        for t in &self.args {
            let v = t.as_var()?;
            if out.contains(v) {
                return None;
            }
            out.push(v.clone());
        }
        Some(out)
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Atom {
        Atom::new(self.predicate.clone(), self.args.iter().map(|t| t.rename(map)).collect())
    }

    pub fn substitute_all(&self, subst: &BTreeMap<Var, LinearTerm>) -> Atom {
        Atom::new(
            self.predicate.clone(),
            self.args.iter().map(|t| t.substitute_all(subst)).collect(),
        )
    }

    pub fn ground(&self, assignment: &BTreeMap<Var, Rational>) -> Option<GroundAtom> {
        let args = self
            .args
            .iter()
            .map(|t| t.eval(assignment))
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom::new(self.predicate.clone(), args))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A variable-free atom with evaluated arguments.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: String,
    pub args: Vec<Rational>,
}

impl GroundAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Rational>) -> Self {
        GroundAtom {
            predicate: predicate.into(),
            args,
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&fmt_rational(a))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule {
    pub id: String,
    pub head: Atom,
    pub constraints: ConstraintSet,
    pub body: Vec<Atom>,
}

impl Rule {
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.head.vars();
        out.extend(self.constraints.vars());
        for a in &self.body {
            out.extend(a.vars());
        }
        out
    }

    pub fn is_normalised(&self) -> bool {
        self.head.distinct_vars().is_some() && self.body.iter().all(|a| a.distinct_vars().is_some())
    }

    /// Rewrites every atom to a tuple of distinct variables, moving the
    /// original arguments into equality constraints.
    pub fn normalise(&self) -> Rule {
        let mut used = self.vars();
        let mut names = FreshNames::default();
        let mut extra = Vec::new();
        let mut fix = |atom: &Atom| -> Atom {
            let mut seen: Vec<Var> = Vec::new();
            let args = atom
                .args
                .iter()
                .map(|t| match t.as_var() {
                    Some(v) if !seen.contains(v) => {
                        seen.push(v.clone());
                        t.clone()
                    }
                    _ => {
                        let fresh = names.next(&used);
                        used.insert(fresh.clone());
                        seen.push(fresh.clone());
                        extra.push(Constraint::eq(LinearTerm::var(fresh.clone()), t.clone()));
                        LinearTerm::var(fresh)
                    }
                })
                .collect();
            Atom::new(atom.predicate.clone(), args)
        };
        let head = fix(&self.head);
        let body: Vec<Atom> = self.body.iter().map(&mut fix).collect();
        let mut constraints = self.constraints.clone();
        constraints.extend(extra);
        Rule {
            id: self.id.clone(),
            head,
            constraints,
            body,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.head)?;
        if self.constraints.is_empty() && self.body.is_empty() {
            return f.write_str(".");
        }
        f.write_str(" <- ")?;
        let items: Vec<String> = self
            .constraints
            .iter()
            .map(|c| c.to_string())
            .chain(self.body.iter().map(|a| a.to_string()))
            .collect();
        write!(f, "{}.", items.join(", "))
    }
}

/// Yields `X, Y, Z, U, V, W`, then the same letters with numeric suffixes.
#[derive(Default)]
pub(crate) struct FreshNames {
    idx: usize,
}

impl FreshNames {
    const BASE: [&'static str; 6] = ["X", "Y", "Z", "U", "V", "W"];

    pub(crate) fn nth(i: usize) -> Var {
        let base = Self::BASE[i % Self::BASE.len()];
        match i / Self::BASE.len() {
            0 => Var::new(base),
            k => Var::new(format!("{base}{k}")),
        }
    }

    pub(crate) fn next(&mut self, avoid: &BTreeSet<Var>) -> Var {
        loop {
            let v = Self::nth(self.idx);
            self.idx += 1;
            if !avoid.contains(&v) {
                return v;
            }
        }
    }
}

/// `assumption a(X) contrary ca(X).`
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AssumptionDecl {
    pub assumption: Atom,
    pub contrary: Atom,
}

impl fmt::Display for AssumptionDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "assumption {} contrary {}.", self.assumption, self.contrary)
    }
}

/// A constrained ABA framework. The constraint theory is fixed to linear
/// rational arithmetic.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Framework {
    pub rules: Vec<Rule>,
    pub assumptions: Vec<AssumptionDecl>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    NonFlat { rule: String, predicate: String },
    ContraryClash { predicate: String, contraries: Vec<String> },
    ArityMismatch { predicate: String, expected: usize, found: usize },
    ContraryIsAssumption { predicate: String },
    MalformedDeclaration { predicate: String, reason: String },
    DuplicateRuleId { id: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NonFlat { rule, predicate } => {
                write!(f, "NonFlat: rule {rule} has assumption predicate `{predicate}` as its head")
            }
            Diagnostic::ContraryClash { predicate, contraries } => write!(
                f,
                "ContraryClash: assumption `{predicate}` has several contraries ({})",
                contraries.join(", ")
            ),
            Diagnostic::ArityMismatch {
                predicate,
                expected,
                found,
            } => write!(
                f,
                "ArityMismatch: `{predicate}` first used with arity {expected}, later with {found}"
            ),
            Diagnostic::ContraryIsAssumption { predicate } => {
                write!(f, "ContraryIsAssumption: contrary `{predicate}` is itself an assumption")
            }
            Diagnostic::MalformedDeclaration { predicate, reason } => {
                write!(f, "MalformedDeclaration: `{predicate}`: {reason}")
            }
            Diagnostic::DuplicateRuleId { id } => write!(f, "DuplicateRuleId: `{id}`"),
        }
    }
}

#[derive(Debug, Error)]
pub enum FrameworkError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid framework:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
    #[error("malformed JSON framework: {0}")]
    Json(String),
}

impl Framework {
    /// Parses and validates.
    pub fn parse(src: &str) -> Result<Framework, FrameworkError> {
        let f = Framework::parse_unchecked(src)?;
        let diags = f.validate();
        if diags.is_empty() {
            Ok(f)
        } else {
            Err(FrameworkError::Invalid(diags))
        }
    }

    /// Parses without running [`Framework::validate`].
    pub fn parse_unchecked(src: &str) -> Result<Framework, ParseError> {
        let mut cur = Cursor::new(src)?;
        let mut f = Framework::default();
        while !cur.at_end() {
            let is_decl = matches!(cur.peek(), Some(Tok::Ident(k)) if k == "assumption")
                && matches!(cur.peek_at(1), Some(Tok::Ident(_)));
            if is_decl {
                cur.bump();
                let assumption = parse_atom(&mut cur)?;
                match cur.bump() {
                    Some(Tok::Ident(k)) if k == "contrary" => {}
                    _ => return Err(ParseError::new(cur.pos(), "expected `contrary`")),
                }
                let contrary = parse_atom(&mut cur)?;
                cur.expect(&Tok::Dot)?;
                f.assumptions.push(AssumptionDecl { assumption, contrary });
                continue;
            }
            let id = match (cur.peek().cloned(), cur.peek_at(1)) {
                (Some(Tok::Ident(s)) | Some(Tok::Var(s)), Some(Tok::Colon)) => {
                    cur.bump();
                    cur.bump();
                    s
                }
                _ => format!("R{}", f.rules.len() + 1),
            };
            let head = parse_atom(&mut cur)?;
            let mut constraints = ConstraintSet::new();
            let mut body = Vec::new();
            if cur.eat(&Tok::Arrow) && cur.peek() != Some(&Tok::Dot) {
                loop {
                    if matches!(cur.peek(), Some(Tok::Ident(_))) {
                        body.push(parse_atom(&mut cur)?);
                    } else {
                        constraints.insert(cur.constraint()?);
                    }
                    if !cur.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            cur.expect(&Tok::Dot)?;
            f.rules.push(Rule {
                id,
                head,
                constraints,
                body,
            });
        }
        Ok(f)
    }

    pub fn is_assumption(&self, predicate: &str) -> bool {
        self.assumptions.iter().any(|d| d.assumption.predicate == predicate)
    }

    pub fn contrary_of(&self, predicate: &str) -> Option<&str> {
        self.assumptions
            .iter()
            .find(|d| d.assumption.predicate == predicate)
            .map(|d| d.contrary.predicate.as_str())
    }

    /// Assumption predicates in declaration order, without repeats.
    pub fn assumption_predicates(&self) -> Vec<(&str, usize)> {
        let mut out: Vec<(&str, usize)> = Vec::new();
        for d in &self.assumptions {
            if !out.iter().any(|(p, _)| *p == d.assumption.predicate) {
                out.push((&d.assumption.predicate, d.assumption.arity()));
            }
        }
        out
    }

    /// Predicate arities, taken from first use.
    pub fn arities(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for a in self.all_atoms() {
            out.entry(a.predicate.clone()).or_insert(a.arity());
        }
        out
    }

    fn all_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.rules
            .iter()
            .flat_map(|r| std::iter::once(&r.head).chain(r.body.iter()))
            .chain(self.assumptions.iter().flat_map(|d| [&d.assumption, &d.contrary]))
    }

    /// One diagnostic per violated well-formedness condition.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut arity: BTreeMap<&str, usize> = BTreeMap::new();
        let mut reported = BTreeSet::new();
        for a in self.all_atoms() {
            let expected = *arity.entry(&a.predicate).or_insert(a.arity());
            if expected != a.arity() && reported.insert((a.predicate.clone(), a.arity())) {
                out.push(Diagnostic::ArityMismatch {
                    predicate: a.predicate.clone(),
                    expected,
                    found: a.arity(),
                });
            }
        }
        let mut ids = BTreeSet::new();
        for r in &self.rules {
            if !ids.insert(r.id.as_str()) {
                out.push(Diagnostic::DuplicateRuleId { id: r.id.clone() });
            }
            if self.is_assumption(&r.head.predicate) {
                out.push(Diagnostic::NonFlat {
                    rule: r.id.clone(),
                    predicate: r.head.predicate.clone(),
                });
            }
        }
        let mut contraries: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for d in &self.assumptions {
            contraries
                .entry(&d.assumption.predicate)
                .or_default()
                .insert(&d.contrary.predicate);
            let params = d.assumption.distinct_vars();
            if params.is_none() {
                out.push(Diagnostic::MalformedDeclaration {
                    predicate: d.assumption.predicate.clone(),
                    reason: "assumption arguments must be distinct variables".into(),
                });
            } else if d.contrary.distinct_vars() != params {
                out.push(Diagnostic::MalformedDeclaration {
                    predicate: d.assumption.predicate.clone(),
                    reason: "contrary must repeat the assumption's variables in order".into(),
                });
            }
            if self.is_assumption(&d.contrary.predicate) {
                out.push(Diagnostic::ContraryIsAssumption {
                    predicate: d.contrary.predicate.clone(),
                });
            }
        }
        for (p, cs) in contraries {
            if cs.len() > 1 {
                out.push(Diagnostic::ContraryClash {
                    predicate: p.to_string(),
                    contraries: cs.into_iter().map(String::from).collect(),
                });
            }
        }
        out
    }

    /// Every rule rewritten to distinct-variable tuples. Idempotent.
    pub fn normalise(&self) -> Framework {
        Framework {
            rules: self.rules.iter().map(Rule::normalise).collect(),
            assumptions: self.assumptions.clone(),
        }
    }

    /// Whether any constraint occurs at all (plain ABA otherwise).
    pub fn uses_constraints(&self) -> bool {
        self.rules.iter().any(|r| !r.constraints.is_empty())
            || self.all_atoms().any(|a| a.args.iter().any(|t| t.as_var().is_none()))
    }

    pub fn to_caba(&self) -> String {
        let mut out = String::new();
        for d in &self.assumptions {
            out.push_str(&format!("{d}\n"));
        }
        for r in &self.rules {
            out.push_str(&format!("{r}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(FrameworkJson::from(self)).expect("framework serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Framework, FrameworkError> {
        let raw: FrameworkJson =
            serde_json::from_value(value.clone()).map_err(|e| FrameworkError::Json(e.to_string()))?;
        if raw.schema != 1 {
            return Err(FrameworkError::Json(format!("unsupported schema {}", raw.schema)));
        }
        let mut f = Framework::default();
        for r in raw.rules {
            let mut constraints = ConstraintSet::new();
            for c in &r.constraints {
                constraints.insert(caba_lra::parse_constraint(c)?);
            }
            let body = r.body.iter().map(|a| parse_atom_str(a)).collect::<Result<_, _>>()?;
            f.rules.push(Rule {
                id: r.id,
                head: parse_atom_str(&r.head)?,
                constraints,
                body,
            });
        }
        for a in raw.assumptions {
            f.assumptions.push(AssumptionDecl {
                assumption: parse_atom_str(&a.assumption)?,
                contrary: parse_atom_str(&a.contrary)?,
            });
        }
        let diags = f.validate();
        if diags.is_empty() {
            Ok(f)
        } else {
            Err(FrameworkError::Invalid(diags))
        }
    }
}

impl fmt::Display for Framework {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_caba())
    }
}

#[derive(Serialize, Deserialize)]
struct FrameworkJson {
    schema: u32,
    rules: Vec<RuleJson>,
    assumptions: Vec<AssumptionJson>,
    contraries: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct RuleJson {
    id: String,
    head: String,
    constraints: Vec<String>,
    body: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct AssumptionJson {
    assumption: String,
    contrary: String,
}

impl From<&Framework> for FrameworkJson {
    fn from(f: &Framework) -> Self {
        FrameworkJson {
            schema: 1,
            rules: f
                .rules
                .iter()
                .map(|r| RuleJson {
                    id: r.id.clone(),
                    head: r.head.to_string(),
                    constraints: r.constraints.iter().map(|c| c.to_string()).collect(),
                    body: r.body.iter().map(|a| a.to_string()).collect(),
                })
                .collect(),
            assumptions: f
                .assumptions
                .iter()
                .map(|d| AssumptionJson {
                    assumption: d.assumption.to_string(),
                    contrary: d.contrary.to_string(),
                })
                .collect(),
            contraries: f
                .assumptions
                .iter()
                .map(|d| (d.assumption.predicate.clone(), d.contrary.predicate.clone()))
                .collect(),
        }
    }
}

/// `pred` or `pred(t1, ..., tn)`.
pub fn parse_atom(cur: &mut Cursor) -> Result<Atom, ParseError> {
    let predicate = cur.ident()?;
    let mut args = Vec::new();
    if cur.eat(&Tok::LParen) {
        loop {
            args.push(cur.term()?);
            if !cur.eat(&Tok::Comma) {
                break;
            }
        }
        cur.expect(&Tok::RParen)?;
    }
    Ok(Atom::new(predicate, args))
}

pub fn parse_atom_str(src: &str) -> Result<Atom, ParseError> {
    let mut cur = Cursor::new(src)?;
    let a = parse_atom(&mut cur)?;
    cur.finish()?;
    Ok(a)
}
