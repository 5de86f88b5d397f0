//! Multivariate polynomials over ℚ(√m) in formal coefficient functions.
//!
//! Each variable is a pair (symbol, derivative order): `p3` is `(p3, 0)` and
//! `p3''` is `(p3, 2)`. The formal derivative sends `(s, k)` to `(s, k + 1)`,
//! so derivative symbols come into existence only when they are needed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::exact::ExactScalar;
use crate::error::Result;

/// Name of a coefficient function. Ordered naturally, so `p2 < p10`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    fn split(&self) -> (&str, Option<u64>) {
        let s: &str = &self.0;
        let cut = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (head, digits) = s.split_at(cut);
        (head, digits.parse().ok())
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ha, na) = self.split();
        let (hb, nb) = other.split();
        ha.cmp(hb).then(na.cmp(&nb)).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A symbol together with its derivative order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub symbol: Symbol,
    pub order: u32,
}

impl Var {
    pub fn new(name: &str, order: u32) -> Self {
        Var { symbol: Symbol::new(name), order }
    }

    pub fn derivative(&self) -> Var {
        Var { symbol: self.symbol.clone(), order: self.order + 1 }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        for _ in 0..self.order {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// Power product of variables, sorted by variable with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                if f > *e {
                    return None;
                }
                if e - f > 0 {
                    out.push((v.clone(), e - f));
                }
                j += 1;
            } else {
                if j < other.0.len() && other.0[j].0 < *v {
                    return None;
                }
                out.push((v.clone(), *e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    fn exponent(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    /// Square root of the monomial if every exponent is even.
    fn sqrt(&self) -> Option<Monomial> {
        self.0
            .iter()
            .map(|(v, e)| (e % 2 == 0).then(|| (v.clone(), e / 2)))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

/// Graded lexicographic order: total degree first, then the exponent of the
/// largest variable.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let mut a = self.0.iter().rev();
            let mut b = other.0.iter().rev();
            loop {
                match (a.next(), b.next()) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => continue,
                            o => return o,
                        },
                        o => return o,
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Differential polynomial in canonical form: a map from monomials to nonzero
/// coefficients. Structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        DiffPoly { terms }
    }

    pub fn integer(n: i64) -> Self {
        Self::constant(ExactScalar::integer(n))
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), ExactScalar::one());
        DiffPoly { terms }
    }

    /// The coefficient function `name` (derivative order 0).
    pub fn symbol(name: &str) -> Self {
        Self::var(Var::new(name, 0))
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, ExactScalar)>) -> Self {
        let mut p = DiffPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &ExactScalar)> {
        self.terms.iter().next_back()
    }

    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x.clone() * c.clone())).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            if let Some(old) = out.terms.remove(m) {
                let s = old.checked_add(c)?;
                if !s.is_zero() {
                    out.terms.insert(m.clone(), s);
                }
            } else {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.checked_mul(cb)?;
                out.add_term(ma.mul(mb), c);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = DiffPoly::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Formal `d/dt`, the derivation extending `(s, k) ↦ (s, k + 1)`.
    pub fn derivative(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (idx, (v, e)) in m.0.iter().enumerate() {
                let mut rest = m.0.clone();
                if *e == 1 {
                    rest.remove(idx);
                } else {
                    rest[idx].1 -= 1;
                }
                let mono = Monomial(rest).mul(&Monomial::var(v.derivative()));
                out.add_term(mono, c.clone() * ExactScalar::integer(*e as i64));
            }
        }
        out
    }

    /// Variables appearing in the polynomial, in ascending order.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> =
            self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| v.clone())).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut s: Vec<Symbol> = self.variables().into_iter().map(|v| v.symbol).collect();
        s.sort();
        s.dedup();
        s
    }

    /// Replace the function `symbol` by `value`; derivatives of the symbol are
    /// replaced by the matching formal derivatives of `value`.
    pub fn substitute(&self, symbol: &Symbol, value: &DiffPoly) -> Self {
        let max_order = self
            .variables()
            .iter()
            .filter(|v| &v.symbol == symbol)
            .map(|v| v.order)
            .max();
        let Some(max_order) = max_order else {
            return self.clone();
        };
        let mut derivs = vec![value.clone()];
        for k in 1..=max_order as usize {
            let next = derivs[k - 1].derivative();
            derivs.push(next);
        }
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut term = DiffPoly::constant(c.clone());
            let mut rest = Vec::new();
            for (v, e) in &m.0 {
                if &v.symbol == symbol {
                    term = term * derivs[v.order as usize].pow(*e);
                } else {
                    rest.push((v.clone(), *e));
                }
            }
            let rest = DiffPoly { terms: [(Monomial(rest), ExactScalar::one())].into() };
            out = out + term * rest;
        }
        out
    }

    pub fn substitute_all(&self, subs: &[(Symbol, DiffPoly)]) -> Self {
        subs.iter().fold(self.clone(), |acc, (s, v)| acc.substitute(s, v))
    }

    /// Evaluate with a value for every variable.
    pub fn eval<T, F>(&self, mut value: F) -> Result<T>
    where
        T: Clone + Add<Output = T> + Mul<Output = T>,
        F: FnMut(&Var) -> Result<T>,
        T: FromExact,
    {
        let mut acc = T::from_exact(&ExactScalar::zero());
        for (m, c) in &self.terms {
            let mut term = T::from_exact(c);
            for (v, e) in &m.0 {
                let x = value(v)?;
                for _ in 0..*e {
                    term = term * x.clone();
                }
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Scale so that the result is canonical up to multiplication by a
    /// nonzero element of ℚ(√m): the leading coefficient is made rational,
    /// the rational content is removed and the leading coefficient is positive.
    pub fn normalized(&self) -> Self {
        let Some((_, lc)) = self.leading_term() else {
            return DiffPoly::zero();
        };
        let p = if lc.is_rational() { self.clone() } else { self.scale(&lc.conjugate()) };
        let mut numer_gcd = BigInt::zero();
        let mut denom_lcm = BigInt::one();
        for c in p.terms.values() {
            for q in [c.rational_part(), c.irrational_part()] {
                if !q.is_zero() {
                    numer_gcd = numer_gcd.gcd(q.numer());
                    denom_lcm = denom_lcm.lcm(q.denom());
                }
            }
        }
        let mut factor = BigRational::new(denom_lcm, numer_gcd);
        let (_, lc) = p.leading_term().expect("nonzero");
        if lc.rational_part().is_negative() {
            factor = -factor;
        }
        p.scale(&ExactScalar::rational(factor))
    }

    /// `Some(c)` with `self = c · other` when the two are proportional.
    pub fn proportionality(&self, other: &DiffPoly) -> Option<ExactScalar> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        let (ma, ca) = self.leading_term()?;
        let (mb, cb) = other.leading_term()?;
        if ma != mb {
            return None;
        }
        let c = ca.checked_div(cb).ok()?;
        let diff = self.checked_add(&other.scale(&c).neg()).ok()?;
        diff.is_zero().then_some(c)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &DiffPoly) -> Option<DiffPoly> {
        let (dm, dc) = divisor.leading_term()?;
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = DiffPoly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let m = rm.div(dm)?;
            let c = rc.checked_mul(&dc_inv).ok()?;
            let t = DiffPoly { terms: [(m, c)].into() };
            rem = rem.checked_add(&(t.clone() * divisor.clone()).neg()).ok()?;
            quot = quot + t;
        }
        Some(quot)
    }

    /// `Some(q)` with `q² = self` and `q` having a positive leading coefficient.
    pub fn sqrt_exact(&self) -> Option<DiffPoly> {
        if self.is_zero() {
            return Some(DiffPoly::zero());
        }
        let (lm, lc) = self.leading_term()?;
        let root_m = lm.sqrt()?;
        let root_c = lc.rational_sqrt()?;
        let lead = DiffPoly { terms: [(root_m.clone(), root_c.clone())].into() };
        let two_lead_c_inv = (ExactScalar::integer(2) * root_c).inv().ok()?;
        let mut root = lead;
        let mut rem = self.checked_add(&root.pow(2).neg()).ok()?;
        // each step fixes the next term of the root, in decreasing order
        let mut guard = self.num_terms() + 2;
        while let Some((rm, rc)) = rem.leading_term() {
            if guard == 0 {
                return None;
            }
            guard -= 1;
            let m = rm.div(&root_m)?;
            if m >= root_m {
                return None;
            }
            let c = rc.checked_mul(&two_lead_c_inv).ok()?;
            let t = DiffPoly { terms: [(m, c)].into() };
            root = root + t;
            rem = self.checked_add(&root.pow(2).neg()).ok()?;
        }
        Some(root)
    }

    /// Print as `c*(q)^2` when the polynomial is a constant times a square.
    pub fn display_factored(&self) -> String {
        let n = self.normalized();
        if let (Some(c), Some(q)) = (self.proportionality(&n), n.sqrt_exact()) {
            if q.num_terms() > 1 {
                return if c.is_one() {
                    format!("({q})^2")
                } else if (-c.clone()).is_one() {
                    format!("-({q})^2")
                } else {
                    format!("{c}*({q})^2")
                };
            }
        }
        self.to_string()
    }

    fn exponent_of(&self, m: &Monomial, v: &Var) -> u32 {
        self.terms.get(m).map_or(0, |_| m.exponent(v))
    }

    /// Degree in the given variable.
    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| self.exponent_of(m, v)).max().unwrap_or(0)
    }
}

/// Conversion from exact constants into a target ring.
pub trait FromExact {
    fn from_exact(x: &ExactScalar) -> Self;
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: DiffPoly) -> DiffPoly {
        self.checked_add(&rhs).expect("DiffPoly addition")
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        self + (-rhs)
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        self.checked_mul(&rhs).expect("DiffPoly multiplication")
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

/// Coefficient text and sign for printing `c*body`.
pub(crate) fn split_sign(c: &ExactScalar) -> (bool, ExactScalar) {
    let negative = if c.is_rational() {
        c.rational_part().is_negative()
    } else if c.rational_part().is_zero() {
        c.irrational_part().is_negative()
    } else {
        c.rational_part().is_negative()
    };
    if negative {
        (true, -c.clone())
    } else {
        (false, c.clone())
    }
}

pub(crate) fn coefficient_prefix(c: &ExactScalar) -> String {
    if c.is_one() {
        String::new()
    } else if c.is_rational() || c.rational_part().is_zero() {
        format!("{c}*")
    } else {
        format!("({c})*")
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, abs) = split_sign(c);
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                if abs.is_rational() || abs.rational_part().is_zero() {
                    write!(f, "{abs}")?;
                } else {
                    write!(f, "({abs})")?;
                }
            } else {
                write!(f, "{}{}", coefficient_prefix(&abs), m)?;
            }
        }
        Ok(())
    }
}
