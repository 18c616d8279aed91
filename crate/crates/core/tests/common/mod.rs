//! Shared fixtures and random generators for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use caba::arguments::{build_mgcarg, parse_argument, ConstrainedArgument, DEFAULT_MAX_DEPTH};
use caba::framework::Framework;
use caba::splitting::{argument_splitting, DEFAULT_MAX_ITERS};
use caba_lra::{is_consistent, rat, rat_frac, Constraint, ConstraintSet, LinearTerm, Rational, Rel, Var};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn framework(name: &str) -> Framework {
    Framework::parse(&corpus(&format!("{name}.caba"))).unwrap()
}

pub fn arg(id: &str, src: &str) -> ConstrainedArgument {
    parse_argument(id, src).unwrap()
}

pub fn mgc(f: &Framework) -> Vec<ConstrainedArgument> {
    build_mgcarg(f, DEFAULT_MAX_DEPTH).unwrap()
}

pub fn split_basis(f: &Framework) -> Vec<ConstrainedArgument> {
    argument_splitting(f, &mgc(f), DEFAULT_MAX_ITERS).unwrap().arguments
}

pub fn by_id<'a>(args: &'a [ConstrainedArgument], id: &str) -> &'a ConstrainedArgument {
    args.iter().find(|a| a.id == id).unwrap_or_else(|| panic!("no argument {id}"))
}

/// The expected MGCArg output for FA, written out by hand.
pub fn fa_reference_arguments() -> Vec<ConstrainedArgument> {
    vec![
        arg("a1", "{X < 1, Y > 0, a(X,Y), b(X)} |- p(X)"),
        arg("a2", "{Y < 10, a(Y,X)} |- p(X)"),
        arg("a3", "{Y > 0} |- s(Y)"),
        arg("a4", "{X < 5, Y > 3} |- ca(X,Y)"),
        arg("a5", "{X < 10} |- cb(X)"),
        arg("a6", "{a(X,Y)} |- a(X,Y)"),
        arg("a7", "{b(X)} |- b(X)"),
    ]
}

/// The expected split cp/cq basis, written out by hand.
pub fn cpcq_reference_basis() -> Vec<(&'static str, ConstrainedArgument)> {
    [
        ("a11", "{X = 0, q(X)} |- cp(X)"),
        ("a12", "{X > 0, q(X)} |- cp(X)"),
        ("a21", "{X = 0, p(X)} |- cq(X)"),
        ("a22", "{X < 0, p(X)} |- cq(X)"),
        ("a3", "{X >= Y, Y >= 0} |- r(X)"),
        ("a4", "{X <= 0} |- s(X)"),
        ("a51", "{X < 0, p(X)} |- p(X)"),
        ("a52", "{X = 0, p(X)} |- p(X)"),
        ("a53", "{X > 0, p(X)} |- p(X)"),
        ("a61", "{X < 0, q(X)} |- q(X)"),
        ("a62", "{X = 0, q(X)} |- q(X)"),
        ("a63", "{X > 0, q(X)} |- q(X)"),
    ]
    .into_iter()
    .map(|(n, s)| (n, arg(n, s)))
    .collect()
}

/// A universe certifying the bounded FA variant.
pub const FA_BOUNDED_UNIVERSE: &str = "-2,-1,0,1/3,2/3,1,2,5/2,3,4,9/2,5,6,7,10,21/2,11,12,13,14";

pub const VARS: [&str; 3] = ["X", "Y", "Z"];

pub fn random_constraint<R: Rng>(rng: &mut R, vars: &[&str]) -> Constraint {
    let rel = *[Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne].choose(rng).unwrap();
    let coeffs: Vec<(Var, Rational)> = vars.iter().map(|v| (Var::new(v), rat(rng.gen_range(-3..=3)))).collect();
    let lhs = LinearTerm::from_parts(coeffs, rat(rng.gen_range(-5..=5)));
    let flip = rng.gen_bool(0.5);
    let c = Constraint::from_expr(lhs, rel);
    if flip {
        Constraint::new(LinearTerm::zero(), rel, c.expr().clone())
    } else {
        c
    }
}

pub fn random_set<R: Rng>(rng: &mut R, vars: &[&str], max: usize) -> ConstraintSet {
    (0..rng.gen_range(0..=max)).map(|_| random_constraint(rng, vars)).collect()
}

pub fn random_consistent_set<R: Rng>(rng: &mut R, vars: &[&str], max: usize) -> ConstraintSet {
    loop {
        let c = random_set(rng, vars, max);
        if is_consistent(&c) {
            return c;
        }
    }
}

pub fn random_point<R: Rng>(rng: &mut R, vars: &[&str]) -> BTreeMap<Var, Rational> {
    vars.iter()
        .map(|v| (Var::new(v), rat_frac(rng.gen_range(-8..=8), rng.gen_range(1..=2))))
        .collect()
}

/// A random unary constraint comparing `v` with a constant from `consts`.
fn bound<R: Rng>(rng: &mut R, v: &str, consts: &[i64]) -> String {
    let k = consts.choose(rng).unwrap();
    let op = ["<", "<=", ">", ">=", "=", "!="].choose(rng).unwrap();
    format!("{v} {op} {k}")
}

/// A small non-recursive framework over unary and 0-ary predicates whose
/// constraints compare variables with constants in 2..=6 or with each other,
/// so that the universe 0..8 can certify it.
pub fn random_framework<R: Rng>(rng: &mut R) -> String {
    let consts: &[i64] = [&[4][..], &[2, 6], &[3, 6], &[2, 5]].choose(rng).unwrap();
    let two_assumptions = rng.gen_bool(0.6);
    let q_unary = rng.gen_bool(0.6);
    let b_unary = q_unary || rng.gen_bool(0.5);
    let atom = |p: &str, unary: bool, v: &str| if unary { format!("{p}({v})") } else { p.to_string() };
    let mut src = String::new();
    for _ in 0..rng.gen_range(1..=5) {
        let head_q = rng.gen_bool(0.5);
        let head_unary = !head_q || q_unary;
        let mut used: BTreeSet<&str> = BTreeSet::new();
        if head_unary {
            used.insert("X");
        }
        let mut body: Vec<String> = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let v = *["X", "X", "Y"].choose(rng).unwrap();
            let mut choices = vec![("a", true)];
            if two_assumptions {
                choices.push(("b", b_unary));
            }
            if head_q && !body.iter().any(|b| b.starts_with("p(")) {
                choices.push(("p", true));
            }
            let (p, unary) = *choices.choose(rng).unwrap();
            if unary {
                used.insert(v);
            }
            body.push(atom(p, unary, v));
        }
        let vars: Vec<&str> = used.iter().copied().collect();
        let mut cs: Vec<String> = Vec::new();
        for v in &vars {
            if rng.gen_bool(0.6) {
                cs.push(bound(rng, v, consts));
            }
        }
        if vars.len() == 2 && rng.gen_bool(0.3) {
            cs.push(format!("X {} Y", if rng.gen_bool(0.5) { "=" } else { "!=" }));
        }
        let head = if head_q { atom("q", q_unary, "X") } else { atom("p", true, "X") };
        let parts: Vec<String> = cs.into_iter().chain(body).collect();
        if parts.is_empty() {
            src.push_str(&format!("{head}.\n"));
        } else {
            src.push_str(&format!("{head} <- {}.\n", parts.join(", ")));
        }
    }
    src.push_str("assumption a(X) contrary p(X).\n");
    if two_assumptions {
        if b_unary && (q_unary || rng.gen_bool(0.5)) {
            src.push_str(&format!("assumption b(X) contrary {}.\n", if q_unary { "q(X)" } else { "p(X)" }));
        } else if b_unary {
            src.push_str("assumption b(X) contrary p(X).\n");
        } else {
            src.push_str("assumption b contrary q.\n");
        }
    }
    src
}

/// `n` integers starting at `lo`.
pub fn int_universe(lo: i64, hi: i64) -> Vec<Rational> {
    (lo..=hi).map(rat).collect()
}
