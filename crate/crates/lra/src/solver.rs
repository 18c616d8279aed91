//! Decision procedures over [`ConstraintSet`]s.
//!
//! Consistency and projection both reduce to Fourier–Motzkin elimination
//! after equalities have been substituted away. Disequalities never need an
//! exponential case split for consistency: a non-empty convex polyhedron
//! minus finitely many hyperplanes is empty only if it lies inside one of
//! them, so each `e != 0` is tested on its own.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::constraint::{Constraint, ConstraintDnf, ConstraintSet, Rel};
use crate::term::{LinearTerm, Rational, Var};
use crate::LraError;

/// Solves `c` (an equality mentioning `v`) for `v`.
fn solve_for(c: &Constraint, v: &Var) -> LinearTerm {
    let a = c.expr().coeff(v);
    let rest = c.expr() - &LinearTerm::scaled_var(v.clone(), a.clone());
    rest.scale(&(-a.recip()))
}

/// Result of removing equalities by substitution.
struct Reduced {
    ineqs: Vec<Constraint>,
    nes: Vec<Constraint>,
    /// Equalities that could not be eliminated (only when a keep-set is used).
    eqs: Vec<Constraint>,
}

/// Substitutes away every equality that mentions a variable accepted by
/// `eliminable`. Returns `None` when a ground constraint turns out false.
fn reduce_equalities<'a>(
    cs: impl IntoIterator<Item = &'a Constraint>,
    eliminable: impl Fn(&Var) -> bool,
) -> Option<Reduced> {
    let mut pending: Vec<Constraint> = cs.into_iter().cloned().collect();
    loop {
        let pick = pending.iter().enumerate().find_map(|(i, c)| {
            if c.rel() != Rel::Eq {
                return None;
            }
            c.vars().find(|v| eliminable(v)).map(|v| (i, v.clone()))
        });
        let Some((i, v)) = pick else { break };
        let eq = pending.swap_remove(i);
        let by = solve_for(&eq, &v);
        for c in pending.iter_mut() {
            if c.mentions(&v) {
                *c = c.substitute(&v, &by);
            }
        }
    }
    let mut out = Reduced {
        ineqs: Vec::new(),
        nes: Vec::new(),
        eqs: Vec::new(),
    };
    let mut seen = BTreeSet::new();
    for c in pending {
        match c.ground_value() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        if !seen.insert(c.clone()) {
            continue;
        }
        match c.rel() {
            Rel::Eq => out.eqs.push(c),
            Rel::Ne => out.nes.push(c),
            _ => out.ineqs.push(c),
        }
    }
    Some(out)
}

/// Keeps, per coefficient vector, only the tightest bound. Returns `None` on
/// a false ground constraint.
fn tighten(cs: impl IntoIterator<Item = Constraint>) -> Option<Vec<Constraint>> {
    let mut best: BTreeMap<Vec<(Var, Rational)>, Constraint> = BTreeMap::new();
    for c in cs {
        match c.ground_value() {
            Some(true) => continue,
            Some(false) => return None,
            None => {}
        }
        let key: Vec<(Var, Rational)> = c
            .expr()
            .coeffs()
            .iter()
            .map(|(v, k)| (v.clone(), k.clone()))
            .collect();
        match best.get(&key) {
            Some(old) if !stronger(&c, old) => {}
            _ => {
                best.insert(key, c);
            }
        }
    }
    Some(best.into_values().collect())
}

/// For two bounds `L + k1 rel1 0` and `L + k2 rel2 0` with the same linear part.
fn stronger(a: &Constraint, b: &Constraint) -> bool {
    let ka = a.expr().constant_part();
    let kb = b.expr().constant_part();
    ka > kb || (ka == kb && a.rel() == Rel::Lt && b.rel() == Rel::Le)
}

/// Fourier–Motzkin elimination of `elim` from strict/non-strict inequalities.
/// `None` means the system is infeasible.
fn fourier_motzkin(ineqs: Vec<Constraint>, elim: &BTreeSet<Var>) -> Option<Vec<Constraint>> {
    let mut current = tighten(ineqs)?;
    loop {
        let mut best: Option<(usize, Var)> = None;
        for v in elim {
            let (mut lo, mut up, mut any) = (0usize, 0usize, false);
            for c in &current {
                let k = c.expr().coeff(v);
                if k.is_positive() {
                    up += 1;
                    any = true;
                } else if k.is_negative() {
                    lo += 1;
                    any = true;
                }
            }
            if any && best.as_ref().is_none_or(|(cost, _)| lo * up < *cost) {
                best = Some((lo * up, v.clone()));
            }
        }
        let Some((_, v)) = best else {
            return Some(current);
        };
        let mut uppers = Vec::new();
        let mut lowers = Vec::new();
        let mut next = Vec::new();
        for c in current {
            let k = c.expr().coeff(&v);
            if k.is_positive() {
                uppers.push((k, c));
            } else if k.is_negative() {
                lowers.push((-k, c));
            } else {
                next.push(c);
            }
        }
        for (a, u) in &uppers {
            for (b, l) in &lowers {
                let expr = &u.expr().scale(&a.recip()) + &l.expr().scale(&b.recip());
                let rel = if u.rel() == Rel::Lt || l.rel() == Rel::Lt {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                next.push(Constraint::from_expr(expr, rel));
            }
        }
        current = tighten(next)?;
    }
}

fn ineqs_feasible(ineqs: &[Constraint]) -> bool {
    let vars: BTreeSet<Var> = ineqs.iter().flat_map(|c| c.vars().cloned()).collect();
    fourier_motzkin(ineqs.to_vec(), &vars).is_some()
}

fn consistent_iter<'a>(cs: impl IntoIterator<Item = &'a Constraint>) -> bool {
    let Some(red) = reduce_equalities(cs, |_| true) else {
        return false;
    };
    if !ineqs_feasible(&red.ineqs) {
        return false;
    }
    red.nes.iter().all(|ne| {
        let mut lt = red.ineqs.clone();
        lt.push(Constraint::from_expr(ne.expr().clone(), Rel::Lt));
        if ineqs_feasible(&lt) {
            return true;
        }
        let mut gt = red.ineqs.clone();
        gt.push(Constraint::from_expr(ne.expr().clone(), Rel::Gt));
        ineqs_feasible(&gt)
    })
}

/// Whether the conjunction has a rational solution.
pub fn is_consistent(c: &ConstraintSet) -> bool {
    consistent_iter(c.iter())
}

fn consistent_with(c: &ConstraintSet, extra: &ConstraintSet) -> bool {
    consistent_iter(c.iter().chain(extra.iter()))
}

fn consistent_plus(c: &ConstraintSet, extra: &Constraint) -> bool {
    consistent_iter(c.iter().chain(std::iter::once(extra)))
}

/// Complement of a single constraint as mutually exclusive atoms.
pub fn negate(c: &Constraint) -> ConstraintDnf {
    ConstraintDnf::from_disjuncts(
        negate_atoms(c)
            .into_iter()
            .map(|n| std::iter::once(n).collect())
            .collect(),
    )
}

fn negate_atoms(c: &Constraint) -> Vec<Constraint> {
    let e = c.expr().clone();
    match c.rel() {
        Rel::Lt => vec![Constraint::from_expr(e, Rel::Ge)],
        Rel::Le => vec![Constraint::from_expr(e, Rel::Gt)],
        Rel::Eq => vec![
            Constraint::from_expr(e.clone(), Rel::Lt),
            Constraint::from_expr(e, Rel::Gt),
        ],
        Rel::Ne => vec![Constraint::from_expr(e, Rel::Eq)],
        Rel::Ge | Rel::Gt => unreachable!("canonical constraints use < <= = != only"),
    }
}

/// Whether every solution of `c` satisfies `atom`.
fn entails_atom(c: &ConstraintSet, atom: &Constraint) -> bool {
    negate_atoms(atom).iter().all(|n| !consistent_plus(c, n))
}

/// Turns implied equalities into equalities and drops entailed constraints.
/// The input must be consistent.
pub fn simplify(c: &ConstraintSet) -> ConstraintSet {
    let mut work = c.without_true_ground();
    let les: Vec<Constraint> = work.iter().filter(|x| x.rel() == Rel::Le).cloned().collect();
    for le in les {
        if !work.contains(&le) {
            continue;
        }
        let strict = Constraint::from_expr(le.expr().clone(), Rel::Lt);
        if !consistent_plus(&work, &strict) {
            work.remove(&le);
            work.insert(Constraint::from_expr(le.expr().clone(), Rel::Eq));
        }
    }
    let all: Vec<Constraint> = work.iter().cloned().collect();
    for c in all {
        let mut rest = work.clone();
        rest.remove(&c);
        if entails_atom(&rest, &c) {
            work = rest;
        }
    }
    work
}

/// Pieces of `d` not covered by any region in `covered`, pairwise exclusive
/// and simplified. Each region is removed by intersecting with its
/// exclusive complement.
pub fn split_region(d: &ConstraintSet, covered: &[ConstraintSet]) -> ConstraintDnf {
    let pieces = subtract(vec![d.clone()], covered);
    ConstraintDnf::from_disjuncts(pieces.iter().map(simplify).collect())
}

fn subtract(mut pieces: Vec<ConstraintSet>, covered: &[ConstraintSet]) -> Vec<ConstraintSet> {
    for region in covered {
        let mut next = Vec::new();
        for piece in pieces {
            if !consistent_with(&piece, region) {
                next.push(piece);
                continue;
            }
            let mut prefix = piece.clone();
            for a in region.iter() {
                if entails_atom(&prefix, a) {
                    continue;
                }
                for n in negate_atoms(a) {
                    let cand = prefix.with(n);
                    if is_consistent(&cand) {
                        next.push(cand);
                    }
                }
                prefix.insert(a.clone());
            }
        }
        pieces = next;
    }
    pieces
}

/// Rewrites a list of disjuncts so that they are pairwise exclusive while
/// denoting the same union. Inconsistent disjuncts are dropped.
pub fn make_exclusive(disjuncts: &[ConstraintSet]) -> ConstraintDnf {
    let mut out = Vec::new();
    for (i, d) in disjuncts.iter().enumerate() {
        if !is_consistent(d) {
            continue;
        }
        for piece in subtract(vec![d.clone()], &disjuncts[..i]) {
            out.push(simplify(&piece));
        }
    }
    ConstraintDnf::from_disjuncts(out)
}

/// `∃(vars(c) \ keep). c` as an exclusive DNF over `keep`.
pub fn project(c: &ConstraintSet, keep: &BTreeSet<Var>) -> Result<ConstraintDnf, LraError> {
    if !is_consistent(c) {
        return Err(LraError::InconsistentInput);
    }
    let Some(red) = reduce_equalities(c.iter(), |v| !keep.contains(v)) else {
        return Err(LraError::InconsistentInput);
    };
    let elim: BTreeSet<Var> = c.vars().into_iter().filter(|v| !keep.contains(v)).collect();

    let (local_nes, kept_nes): (Vec<_>, Vec<_>) = red
        .nes
        .into_iter()
        .partition(|ne| ne.vars().any(|v| elim.contains(v)));

    let mut branches: Vec<Vec<Constraint>> = vec![red.ineqs];
    for ne in &local_nes {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for b in branches {
            for rel in [Rel::Lt, Rel::Gt] {
                let mut nb = b.clone();
                nb.push(Constraint::from_expr(ne.expr().clone(), rel));
                next.push(nb);
            }
        }
        branches = next;
    }

    let mut disjuncts: Vec<ConstraintSet> = Vec::new();
    for b in branches {
        let Some(rest) = fourier_motzkin(b, &elim) else {
            continue;
        };
        let set: ConstraintSet = rest
            .into_iter()
            .chain(red.eqs.iter().cloned())
            .chain(kept_nes.iter().cloned())
            .collect();
        if !is_consistent(&set) {
            continue;
        }
        let set = simplify(&set);
        if !disjuncts.contains(&set) {
            disjuncts.push(set);
        }
    }
    Ok(make_exclusive(&drop_subsumed(disjuncts)))
}

/// Removes disjuncts entailed by another disjunct.
fn drop_subsumed(disjuncts: Vec<ConstraintSet>) -> Vec<ConstraintSet> {
    let mut keep: Vec<ConstraintSet> = Vec::new();
    for (i, d) in disjuncts.iter().enumerate() {
        let subsumed = disjuncts.iter().enumerate().any(|(j, e)| {
            j != i && entails_set(d, e) && (!entails_set(e, d) || j < i)
        });
        if !subsumed {
            keep.push(d.clone());
        }
    }
    keep
}

fn entails_set(d: &ConstraintSet, e: &ConstraintSet) -> bool {
    e.iter().all(|a| entails_atom(d, a))
}

/// Whether `d` entails the disjunction `dnf`.
pub fn entails_dnf(d: &ConstraintSet, dnf: &ConstraintDnf) -> bool {
    !counter_branch(d.clone(), dnf.disjuncts())
}

/// Depth-first search for a consistent region of `branch ∧ ¬dnf`.
fn counter_branch(branch: ConstraintSet, rest: &[ConstraintSet]) -> bool {
    let Some((first, tail)) = rest.split_first() else {
        return is_consistent(&branch);
    };
    if !consistent_with(&branch, first) {
        return counter_branch(branch, tail);
    }
    for a in first.iter() {
        for n in negate_atoms(a) {
            let next = branch.with(n);
            if is_consistent(&next) && counter_branch(next, tail) {
                return true;
            }
        }
    }
    false
}

/// Whether every solution of `d` satisfies `∃(vars(c) \ keep). c`.
pub fn entails_projected(d: &ConstraintSet, c: &ConstraintSet, keep: &BTreeSet<Var>) -> bool {
    match project(c, keep) {
        Ok(p) => entails_dnf(d, &p),
        Err(_) => !is_consistent(d),
    }
}

/// Whether `p` and `q`, each projected onto `keep`, have the same solutions.
pub fn equivalent_dnf(p: &ConstraintDnf, q: &ConstraintDnf, keep: &BTreeSet<Var>) -> bool {
    let proj = |x: &ConstraintDnf| -> ConstraintDnf {
        let mut ds = Vec::new();
        for d in x.iter() {
            if let Ok(pd) = project(d, keep) {
                ds.extend(pd.into_disjuncts());
            }
        }
        ConstraintDnf::from_disjuncts(ds)
    };
    let (pp, qq) = (proj(p), proj(q));
    pp.iter().all(|d| entails_dnf(d, &qq)) && qq.iter().all(|d| entails_dnf(d, &pp))
}

/// A mutually exclusive, consistent DNF equivalent to
/// `¬∃(vars(c) \ shared). c ∧ d`.
pub fn constraint_split(
    c: &ConstraintSet,
    d: &ConstraintSet,
    shared: &BTreeSet<Var>,
) -> Result<ConstraintDnf, LraError> {
    if !is_consistent(d) {
        return Err(LraError::InconsistentInput);
    }
    let p = project(c, shared)?;
    Ok(split_region(d, p.disjuncts()))
}

/// Truth value of a variable-free constraint set.
pub fn eval_ground(c: &ConstraintSet) -> Result<bool, LraError> {
    let mut all = true;
    for x in c.iter() {
        match x.ground_value() {
            Some(b) => all &= b,
            None => return Err(LraError::NonGroundInput),
        }
    }
    Ok(all)
}

/// Some rational solution of a consistent set, or `None` if inconsistent.
pub fn witness(c: &ConstraintSet) -> Option<BTreeMap<Var, Rational>> {
    if !is_consistent(c) {
        return None;
    }
    let mut cur = c.clone();
    let mut out = BTreeMap::new();
    for v in c.vars() {
        let keep: BTreeSet<Var> = std::iter::once(v.clone()).collect();
        let p = project(&cur, &keep).ok()?;
        let value = pick_value(p.disjuncts().first()?, &v);
        let by = LinearTerm::constant(value.clone());
        cur = cur
            .iter()
            .map(|x| x.substitute(&v, &by))
            .collect::<ConstraintSet>()
            .without_true_ground();
        out.insert(v, value);
    }
    Some(out)
}

/// A value of `v` satisfying a consistent set of constraints over `v` alone.
fn pick_value(d: &ConstraintSet, v: &Var) -> Rational {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    let mut excluded = BTreeSet::new();
    for c in d.iter() {
        let a = c.expr().coeff(v);
        let bound = -c.expr().constant_part() / &a;
        match c.rel() {
            Rel::Eq => return bound,
            Rel::Ne => {
                excluded.insert(bound);
            }
            rel => {
                let strict = rel == Rel::Lt;
                if a.is_positive() {
                    if hi.as_ref().is_none_or(|(h, _)| bound < *h) {
                        hi = Some((bound, strict));
                    }
                } else if lo.as_ref().is_none_or(|(l, _)| bound > *l) {
                    lo = Some((bound, strict));
                }
            }
        }
    }
    let one = Rational::one();
    let two = &one + &one;
    let mut candidate = match (&lo, &hi) {
        (None, None) => Rational::zero(),
        (Some((l, s)), None) => if *s { l + &one } else { l.clone() },
        (None, Some((h, s))) => if *s { h - &one } else { h.clone() },
        (Some((l, ls)), Some((h, hs))) => {
            if !ls && (!hs || l < h) { l.clone() } else { (l + h) / &two }
        }
    };
    // Step away from excluded points while staying inside the interval.
    let mut step = match (&lo, &hi) {
        (Some((l, _)), Some((h, _))) if h > l => (h - l) / (&two * &two),
        _ => one.clone(),
    };
    while excluded.contains(&candidate) {
        let up = &candidate + &step;
        let fits = hi.as_ref().is_none_or(|(h, s)| if *s { up < *h } else { up <= *h });
        candidate = if fits { up } else { &candidate - &step };
        step /= &two;
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_constraint_set, parse_constraint};

    fn set(s: &str) -> ConstraintSet {
        parse_constraint_set(s).unwrap()
    }
    fn vars(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(Var::new).collect()
    }
    fn dnf(parts: &[&str]) -> ConstraintDnf {
        ConstraintDnf::from_disjuncts(parts.iter().map(|p| set(p)).collect())
    }

    #[test]
    fn consistency_examples() {
        assert!(!is_consistent(&set("X < 0, X > 0")));
        assert!(is_consistent(&set("X1 < 10, X1 < 5, X2 > 3")));
        assert!(is_consistent(&set("X >= Y, Y >= 0, X <= 0")));
        assert!(is_consistent(&set("")));
        assert!(!is_consistent(&set("X = Y, Y = 2, X != 2")));
        assert!(!is_consistent(&set("X >= 0, X <= 0, X != 0")));
        assert!(is_consistent(&set("X >= 0, X <= 1, X != 0, X != 1")));
    }

    #[test]
    fn negation_table() {
        assert_eq!(negate(&parse_constraint("X < 1").unwrap()), dnf(&["X >= 1"]));
        assert_eq!(negate(&parse_constraint("X = 0").unwrap()), dnf(&["X < 0", "X > 0"]));
        assert_eq!(negate(&parse_constraint("X >= Y").unwrap()), dnf(&["X < Y"]));
        assert_eq!(negate(&parse_constraint("X != 2").unwrap()), dnf(&["X = 2"]));
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project(&set("X >= Y, Y >= 0, X <= 0"), &vars(&["X"])).unwrap(), dnf(&["X = 0"]));
        assert_eq!(project(&set("X > 0, Y < 2"), &vars(&["X"])).unwrap(), dnf(&["X > 0"]));
        assert_eq!(project(&set(""), &vars(&["X"])).unwrap(), dnf(&[""]));
        assert_eq!(project(&set("X < 0, X > 0"), &vars(&["X"])), Err(LraError::InconsistentInput));
        // a disequality on an eliminated variable disappears
        assert_eq!(project(&set("X = Y + 1, Y != 3"), &vars(&["X"])).unwrap(), dnf(&["X != 4"]));
        assert_eq!(project(&set("X < Y, Y != 3"), &vars(&["X"])).unwrap(), dnf(&[""]));
    }

    #[test]
    fn entailment_examples() {
        assert!(entails_projected(&set("X > 10, Z < 3"), &set("X > 0, Y < 2"), &vars(&["X"])));
        assert!(entails_projected(&set("X < 1, Y > 0"), &set("X < 10"), &vars(&["X"])));
        assert!(!entails_projected(&set("X < 1, Y > 0"), &set("X < 5, Y > 3"), &vars(&["X", "Y"])));
    }

    #[test]
    fn equivalence_examples() {
        let keep = vars(&["X", "Y"]);
        assert!(equivalent_dnf(&dnf(&["Y < 10"]), &dnf(&["Y < 10, Y >= 5", "Y < 10, Y < 5"]), &keep));
        assert!(equivalent_dnf(&dnf(&["X = 0"]), &dnf(&["X <= 0, X >= 0"]), &vars(&["X"])));
        assert!(!equivalent_dnf(&dnf(&["X > 0"]), &dnf(&["X > 1"]), &vars(&["X"])));
    }

    #[test]
    fn split_examples() {
        let x = vars(&["X"]);
        assert_eq!(constraint_split(&set("X >= Y, Y >= 0"), &set("X <= 0"), &x).unwrap(), dnf(&["X < 0"]));
        assert!(constraint_split(&set("X > 0"), &set("X > 3"), &x).unwrap().is_empty());
        assert!(constraint_split(&set("X > 0"), &set("X > 0"), &x).unwrap().is_empty());
        assert_eq!(constraint_split(&set("X > 0"), &set("X < 0, X > 0"), &x), Err(LraError::InconsistentInput));
    }

    #[test]
    fn simplify_detects_implicit_equalities() {
        assert_eq!(simplify(&set("X >= 0, X <= 0")), set("X = 0"));
        assert_eq!(simplify(&set("Y < 10, Y < 5")), set("Y < 5"));
    }

    #[test]
    fn ground_evaluation() {
        assert_eq!(eval_ground(&set("0 < 10, 2 + 1 = 1 + 2")), Ok(true));
        assert_eq!(eval_ground(&set("")), Ok(true));
        assert_eq!(eval_ground(&set("5 < 3")), Ok(false));
        assert_eq!(eval_ground(&set("X < 3")), Err(LraError::NonGroundInput));
    }

    #[test]
    fn witnesses_satisfy_their_set() {
        for s in ["X > 0, X < 1, X != 1/2", "X >= Y, Y >= 0, X <= 0", "X + Y < 3, X - Y > 1, Y != 0"] {
            let c = set(s);
            let w = witness(&c).unwrap();
            assert_eq!(c.holds(&w), Some(true), "{s}: {w:?}");
        }
        assert!(witness(&set("X < 0, X > 0")).is_none());
    }
}
