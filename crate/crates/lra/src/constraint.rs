//! Atomic constraints, conjunctions and disjunctive normal forms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::term::{fmt_side, LinearTerm, Rational, Var};

/// Relation symbols of the surface syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    /// The relation obtained by swapping both sides.
    pub fn flipped(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Ge => Rel::Le,
            Rel::Gt => Rel::Lt,
            r => r,
        }
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ne => lhs != rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// A constraint stored as `expr rel 0` with `rel` one of `<`, `<=`, `=`, `!=`.
///
/// When `expr` mentions variables its leading coefficient (smallest variable
/// name) is `+1` for `=`/`!=` and `±1` for `<`/`<=`; a ground `expr` is
/// reduced to its sign. Two constraints denote the same relation after this
/// normalisation iff they are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    expr: LinearTerm,
    rel: Rel,
}

impl Constraint {
    pub fn new(lhs: LinearTerm, rel: Rel, rhs: LinearTerm) -> Self {
        let (expr, rel) = match rel {
            Rel::Ge => (&rhs - &lhs, Rel::Le),
            Rel::Gt => (&rhs - &lhs, Rel::Lt),
            r => (&lhs - &rhs, r),
        };
        Self::from_expr(expr, rel)
    }

    /// Builds `expr rel 0` and normalises it.
    pub fn from_expr(expr: LinearTerm, rel: Rel) -> Self {
        let (expr, rel) = match rel {
            Rel::Ge => (-&expr, Rel::Le),
            Rel::Gt => (-&expr, Rel::Lt),
            r => (expr, r),
        };
        let factor = match expr.leading() {
            Some((_, lead)) => match rel {
                Rel::Lt | Rel::Le => lead.abs().recip(),
                _ => lead.recip(),
            },
            None => {
                let c = expr.constant_part();
                if c.is_zero() {
                    Rational::one()
                } else {
                    match rel {
                        Rel::Lt | Rel::Le => c.abs().recip(),
                        _ => c.recip(),
                    }
                }
            }
        };
        Constraint {
            expr: expr.scale(&factor),
            rel,
        }
    }

    pub fn lt(lhs: impl Into<LinearTerm>, rhs: impl Into<LinearTerm>) -> Self {
        Self::new(lhs.into(), Rel::Lt, rhs.into())
    }
    pub fn le(lhs: impl Into<LinearTerm>, rhs: impl Into<LinearTerm>) -> Self {
        Self::new(lhs.into(), Rel::Le, rhs.into())
    }
    pub fn eq(lhs: impl Into<LinearTerm>, rhs: impl Into<LinearTerm>) -> Self {
        Self::new(lhs.into(), Rel::Eq, rhs.into())
    }
    pub fn ne(lhs: impl Into<LinearTerm>, rhs: impl Into<LinearTerm>) -> Self {
        Self::new(lhs.into(), Rel::Ne, rhs.into())
    }
    pub fn ge(lhs: impl Into<LinearTerm>, rhs: impl Into<LinearTerm>) -> Self {
        Self::new(lhs.into(), Rel::Ge, rhs.into())
    }
    pub fn gt(lhs: impl Into<LinearTerm>, rhs: impl Into<LinearTerm>) -> Self {
        Self::new(lhs.into(), Rel::Gt, rhs.into())
    }

    /// Canonical left-hand side; the right-hand side is always zero.
    pub fn expr(&self) -> &LinearTerm {
        &self.expr
    }

    /// Canonical relation, one of `Lt`, `Le`, `Eq`, `Ne`.
    pub fn rel(&self) -> Rel {
        self.rel
    }

    pub fn is_ground(&self) -> bool {
        self.expr.is_constant()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.expr.vars()
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.expr.mentions(v)
    }

    /// Truth value of a ground constraint.
    pub fn ground_value(&self) -> Option<bool> {
        if !self.is_ground() {
            return None;
        }
        Some(self.rel.holds(self.expr.constant_part(), &Rational::zero()))
    }

    pub fn holds(&self, assignment: &BTreeMap<Var, Rational>) -> Option<bool> {
        let v = self.expr.eval(assignment)?;
        Some(self.rel.holds(&v, &Rational::zero()))
    }

    pub fn substitute(&self, v: &Var, by: &LinearTerm) -> Constraint {
        if !self.mentions(v) {
            return self.clone();
        }
        Constraint::from_expr(self.expr.substitute(v, by), self.rel)
    }

    pub fn substitute_all(&self, subst: &BTreeMap<Var, LinearTerm>) -> Constraint {
        Constraint::from_expr(self.expr.substitute_all(subst), self.rel)
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Constraint {
        Constraint::from_expr(self.expr.rename(map), self.rel)
    }
}

impl Ord for Constraint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.expr
            .vars()
            .cmp(other.expr.vars())
            .then_with(|| self.rel.cmp(&other.rel))
            .then_with(|| self.expr.coeffs().values().cmp(other.expr.coeffs().values()))
            .then_with(|| self.expr.constant_part().cmp(other.expr.constant_part()))
    }
}

impl PartialOrd for Constraint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (expr, rel) = match self.expr.leading() {
            Some((_, lead)) if lead.is_negative() => (
                -&self.expr,
                match self.rel {
                    Rel::Lt => Rel::Gt,
                    Rel::Le => Rel::Ge,
                    r => r,
                },
            ),
            _ => (self.expr.clone(), self.rel),
        };
        if expr.is_constant() {
            return write!(f, "{} {rel} 0", crate::term::fmt_rational(expr.constant_part()));
        }
        let left: Vec<(&Var, Rational)> = expr
            .coeffs()
            .iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(v, c)| (v, c.clone()))
            .collect();
        let right: Vec<(&Var, Rational)> = expr
            .coeffs()
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(v, c)| (v, -c))
            .collect();
        fmt_side(f, &left, &Rational::zero())?;
        write!(f, " {rel} ")?;
        fmt_side(f, &right, &-expr.constant_part())
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite conjunction of constraints, duplicate-free under canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ConstraintSet {
    items: BTreeSet<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, c: Constraint) -> bool {
        self.items.insert(c)
    }

    pub fn remove(&mut self, c: &Constraint) -> bool {
        self.items.remove(c)
    }

    pub fn contains(&self, c: &Constraint) -> bool {
        self.items.contains(c)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.items.iter()
    }

    pub fn with(&self, c: Constraint) -> ConstraintSet {
        let mut out = self.clone();
        out.insert(c);
        out
    }

    pub fn union(&self, other: &ConstraintSet) -> ConstraintSet {
        let mut out = self.clone();
        out.items.extend(other.items.iter().cloned());
        out
    }

    pub fn extend(&mut self, other: impl IntoIterator<Item = Constraint>) {
        self.items.extend(other);
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.items.iter().flat_map(|c| c.vars().cloned()).collect()
    }

    pub fn is_ground(&self) -> bool {
        self.items.iter().all(Constraint::is_ground)
    }

    pub fn holds(&self, assignment: &BTreeMap<Var, Rational>) -> Option<bool> {
        let mut all = true;
        for c in &self.items {
            all &= c.holds(assignment)?;
        }
        Some(all)
    }

    pub fn substitute_all(&self, subst: &BTreeMap<Var, LinearTerm>) -> ConstraintSet {
        self.items.iter().map(|c| c.substitute_all(subst)).collect()
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> ConstraintSet {
        self.items.iter().map(|c| c.rename(map)).collect()
    }

    /// Drops ground constraints that are true.
    pub fn without_true_ground(&self) -> ConstraintSet {
        self.items
            .iter()
            .filter(|c| c.ground_value() != Some(true))
            .cloned()
            .collect()
    }
}

impl FromIterator<Constraint> for ConstraintSet {
    fn from_iter<I: IntoIterator<Item = Constraint>>(iter: I) -> Self {
        ConstraintSet {
            items: iter.into_iter().collect(),
        }
    }
}

impl IntoIterator for ConstraintSet {
    type Item = Constraint;
    type IntoIter = std::collections::btree_set::IntoIter<Constraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

impl<'a> IntoIterator for &'a ConstraintSet {
    type Item = &'a Constraint;
    type IntoIter = std::collections::btree_set::Iter<'a, Constraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A disjunction of conjunctions. Values produced by the solver have every
/// disjunct consistent and every pair of disjuncts mutually exclusive.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ConstraintDnf {
    disjuncts: Vec<ConstraintSet>,
}

impl ConstraintDnf {
    /// The empty disjunction (false).
    pub fn empty() -> Self {
        Self::default()
    }

    /// The disjunction holding only the empty conjunction (true).
    pub fn truth() -> Self {
        ConstraintDnf {
            disjuncts: vec![ConstraintSet::new()],
        }
    }

    pub fn from_disjuncts(disjuncts: Vec<ConstraintSet>) -> Self {
        ConstraintDnf { disjuncts }
    }

    pub fn disjuncts(&self) -> &[ConstraintSet] {
        &self.disjuncts
    }

    pub fn into_disjuncts(self) -> Vec<ConstraintSet> {
        self.disjuncts
    }

    pub fn len(&self) -> usize {
        self.disjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disjuncts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConstraintSet> {
        self.disjuncts.iter()
    }

    pub fn holds(&self, assignment: &BTreeMap<Var, Rational>) -> Option<bool> {
        let mut any = false;
        for d in &self.disjuncts {
            any |= d.holds(assignment)?;
        }
        Some(any)
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> ConstraintDnf {
        ConstraintDnf {
            disjuncts: self.disjuncts.iter().map(|d| d.rename(map)).collect(),
        }
    }
}

impl fmt::Display for ConstraintDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.disjuncts.is_empty() {
            return f.write_str("false");
        }
        for (i, d) in self.disjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ConstraintDnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{rat, rat_frac};

    fn v(n: &str) -> LinearTerm {
        LinearTerm::var(Var::new(n))
    }

    #[test]
    fn ge_and_gt_are_flipped() {
        assert_eq!(Constraint::ge(v("X"), v("Y")), Constraint::le(v("Y"), v("X")));
        assert_eq!(Constraint::gt(v("X"), 3), Constraint::lt(3, v("X")));
        assert_eq!(Constraint::gt(v("X"), 3).rel(), Rel::Lt);
    }

    #[test]
    fn scaling_is_canonical() {
        let two_x = LinearTerm::scaled_var(Var::new("X"), rat(2));
        assert_eq!(Constraint::lt(two_x.clone(), 2), Constraint::lt(v("X"), 1));
        // equalities may flip sign freely
        assert_eq!(Constraint::eq(v("X"), v("Y")), Constraint::eq(v("Y"), v("X")));
        assert_eq!(Constraint::ne(-&two_x, 4), Constraint::ne(v("X"), -2));
        // inequalities may not
        assert_ne!(Constraint::lt(v("X"), 1), Constraint::gt(v("X"), 1));
    }

    #[test]
    fn display_orients_towards_leading_variable() {
        assert_eq!(Constraint::gt(v("X"), 3).to_string(), "X > 3");
        assert_eq!(Constraint::lt(v("X"), 1).to_string(), "X < 1");
        assert_eq!(Constraint::ge(v("X"), v("Y")).to_string(), "X >= Y");
        assert_eq!(Constraint::eq(v("Z"), &LinearTerm::from(4) + &LinearTerm::from(1)).to_string(), "Z = 5");
        assert_eq!(
            Constraint::le(&v("X") + &v("Y"), LinearTerm::constant(rat_frac(1, 2))).to_string(),
            "X + Y <= 1/2"
        );
        assert_eq!(Constraint::lt(LinearTerm::from(8), 10).to_string(), "-1 < 0");
    }

    #[test]
    fn ground_values() {
        assert_eq!(Constraint::lt(LinearTerm::from(5), 3).ground_value(), Some(false));
        assert_eq!(Constraint::eq(&LinearTerm::from(2) + &LinearTerm::from(1), 3).ground_value(), Some(true));
        assert_eq!(Constraint::ne(LinearTerm::from(0), 0).ground_value(), Some(false));
        assert_eq!(Constraint::lt(v("X"), 0).ground_value(), None);
    }
}
