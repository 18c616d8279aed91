//! Variables, rationals and linear terms.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `n` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// A variable name. Cheap to clone.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// Generator of variables that cannot clash with user-written names
/// (user variables never start with `_G`).
#[derive(Debug, Clone, Default)]
pub struct VarGen {
    next: usize,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> Var {
        self.next += 1;
        Var::new(format!("_G{}", self.next))
    }
}

/// `sum(coeff * var) + constant` with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LinearTerm {
    coeffs: BTreeMap<Var, Rational>,
    constant: Rational,
}

impl LinearTerm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        LinearTerm {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: Var) -> Self {
        Self::scaled_var(v, Rational::one())
    }

    pub fn scaled_var(v: Var, coeff: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(v, coeff);
        }
        LinearTerm {
            coeffs,
            constant: Rational::zero(),
        }
    }

    pub fn from_parts(coeffs: impl IntoIterator<Item = (Var, Rational)>, constant: Rational) -> Self {
        let mut t = LinearTerm::constant(constant);
        for (v, c) in coeffs {
            t.add_coeff(v, c);
        }
        t
    }

    fn add_coeff(&mut self, v: Var, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(v) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<Var, Rational> {
        &self.coeffs
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, v: &Var) -> Rational {
        self.coeffs.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mentions(&self, v: &Var) -> bool {
        self.coeffs.contains_key(v)
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.coeffs.keys()
    }

    pub fn var_set(&self) -> BTreeSet<Var> {
        self.coeffs.keys().cloned().collect()
    }

    /// The variable itself when the term is exactly `1*V + 0`.
    pub fn as_var(&self) -> Option<&Var> {
        if !self.constant.is_zero() || self.coeffs.len() != 1 {
            return None;
        }
        let (v, c) = self.coeffs.iter().next()?;
        c.is_one().then_some(v)
    }

    pub fn leading(&self) -> Option<(&Var, &Rational)> {
        self.coeffs.iter().next()
    }

    pub fn scale(&self, k: &Rational) -> LinearTerm {
        if k.is_zero() {
            return LinearTerm::zero();
        }
        LinearTerm {
            coeffs: self.coeffs.iter().map(|(v, c)| (v.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    /// Replaces `v` by `by` everywhere.
    pub fn substitute(&self, v: &Var, by: &LinearTerm) -> LinearTerm {
        match self.coeffs.get(v) {
            None => self.clone(),
            Some(c) => {
                let mut rest = self.clone();
                rest.coeffs.remove(v);
                &rest + &by.scale(c)
            }
        }
    }

    pub fn substitute_all(&self, subst: &BTreeMap<Var, LinearTerm>) -> LinearTerm {
        let mut out = LinearTerm::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            match subst.get(v) {
                Some(t) => out = &out + &t.scale(c),
                None => out.add_coeff(v.clone(), c.clone()),
            }
        }
        out
    }

    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> LinearTerm {
        let mut out = LinearTerm::constant(self.constant.clone());
        for (v, c) in &self.coeffs {
            let w = map.get(v).cloned().unwrap_or_else(|| v.clone());
            out.add_coeff(w, c.clone());
        }
        out
    }

    /// Evaluates under an assignment; `None` if some variable is unassigned.
    pub fn eval(&self, assignment: &BTreeMap<Var, Rational>) -> Option<Rational> {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * assignment.get(v)?;
        }
        Some(acc)
    }
}

impl Add for &LinearTerm {
    type Output = LinearTerm;
    fn add(self, rhs: &LinearTerm) -> LinearTerm {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (v, c) in &rhs.coeffs {
            out.add_coeff(v.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LinearTerm {
    type Output = LinearTerm;
    fn sub(self, rhs: &LinearTerm) -> LinearTerm {
        self + &(-rhs)
    }
}

impl Neg for &LinearTerm {
    type Output = LinearTerm;
    fn neg(self) -> LinearTerm {
        self.scale(&-Rational::one())
    }
}

impl Add for LinearTerm {
    type Output = LinearTerm;
    fn add(self, rhs: LinearTerm) -> LinearTerm {
        &self + &rhs
    }
}

impl Sub for LinearTerm {
    type Output = LinearTerm;
    fn sub(self, rhs: LinearTerm) -> LinearTerm {
        &self - &rhs
    }
}

impl Neg for LinearTerm {
    type Output = LinearTerm;
    fn neg(self) -> LinearTerm {
        -&self
    }
}

impl Mul<&Rational> for &LinearTerm {
    type Output = LinearTerm;
    fn mul(self, k: &Rational) -> LinearTerm {
        self.scale(k)
    }
}

impl From<Var> for LinearTerm {
    fn from(v: Var) -> Self {
        LinearTerm::var(v)
    }
}

impl From<Rational> for LinearTerm {
    fn from(c: Rational) -> Self {
        LinearTerm::constant(c)
    }
}

impl From<i64> for LinearTerm {
    fn from(c: i64) -> Self {
        LinearTerm::constant(rat(c))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, first: bool, c: &Rational, v: &Var) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if mag.is_one() {
        write!(f, "{v}")
    } else {
        write!(f, "{}*{v}", fmt_rational(&mag))
    }
}

impl fmt::Display for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.coeffs {
            write_monomial(f, first, c, v)?;
            first = false;
        }
        if first {
            return f.write_str(&fmt_rational(&self.constant));
        }
        if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { " - " } else { " + " };
            write!(f, "{sign}{}", fmt_rational(&self.constant.abs()))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Writes `terms` as a sum, used by constraint rendering where each side may
/// be an arbitrary mix of monomials and a constant.
pub(crate) fn fmt_side(
    f: &mut fmt::Formatter<'_>,
    monos: &[(&Var, Rational)],
    constant: &Rational,
) -> fmt::Result {
    let mut first = true;
    for (v, c) in monos {
        write_monomial(f, first, c, v)?;
        first = false;
    }
    if first {
        return f.write_str(&fmt_rational(constant));
    }
    if !constant.is_zero() {
        let sign = if constant.is_negative() { " - " } else { " + " };
        write!(f, "{sign}{}", fmt_rational(&constant.abs()))?;
    }
    Ok(())
}
