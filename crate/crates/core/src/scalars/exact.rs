use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element `a + b·√m` of the quadratic field ℚ(√m).
///
/// `m` is kept square-free. Rationals are stored with `b = 0` and `m = 0`, so
/// a rational combines with any radicand; two irrational values must share
/// the same `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    a: BigRational,
    b: BigRational,
    m: u32,
}

fn square_free_split(n: u64) -> (u64, u64) {
    // n = k^2 * s with s square-free
    let mut k = 1u64;
    let mut s = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    s *= rest;
    (k, s)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, m: u32) -> Self {
        if m == 0 || b.is_zero() {
            return ExactScalar { a, b: BigRational::zero(), m: 0 };
        }
        let (k, s) = square_free_split(m as u64);
        let b = b * BigRational::from_integer(BigInt::from(k));
        if s == 1 {
            ExactScalar { a: a + b, b: BigRational::zero(), m: 0 }
        } else {
            ExactScalar { a, b, m: s as u32 }
        }
    }

    pub fn rational(q: BigRational) -> Self {
        ExactScalar { a: q, b: BigRational::zero(), m: 0 }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(rat(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `√n` for a nonnegative integer `n`, reduced to `k·√s` with `s` square-free.
    pub fn sqrt_of(n: u64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let (k, s) = square_free_split(n);
        let kq = BigRational::from_integer(BigInt::from(k));
        if s == 1 {
            Self::rational(kq)
        } else {
            ExactScalar { a: BigRational::zero(), b: kq, m: s as u32 }
        }
    }

    /// `√q` for a nonnegative rational, as `√(num·den)/den`.
    pub fn sqrt_rational(q: &BigRational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Eval(format!("sqrt of negative value {q}")));
        }
        let prod = q.numer() * q.denom();
        let n = prod
            .to_u64()
            .ok_or_else(|| Error::Eval(format!("radicand {prod} too large")))?;
        let root = Self::sqrt_of(n);
        let inv_den = BigRational::new(BigInt::one(), q.denom().clone());
        Ok(root.scale(&inv_den))
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u32 {
        self.m
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_rational().then_some(&self.a)
    }

    fn common_radicand(&self, other: &Self) -> Result<u32> {
        match (self.m, other.m) {
            (0, m) | (m, 0) => Ok(m),
            (x, y) if x == y => Ok(x),
            (x, y) => Err(Error::MixedRadicand(x, y)),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        Ok(Self::new(&self.a + &other.a, &self.b + &other.b, m))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.clone().neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let m = self.common_radicand(other)?;
        let mq = rat(m as i64);
        let a = &self.a * &other.a + &self.b * &other.b * mq;
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(Self::new(a, b, m))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(&self.a * q, &self.b * q, self.m)
    }

    /// `a - b√m`
    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone(), self.m)
    }

    /// `a² - m b²`, the field norm down to ℚ.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * rat(self.m as i64)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let inv_n = BigRational::one() / n;
        Ok(self.conjugate().scale(&inv_n))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// Exact sign of `a + b√m`.
    pub fn signum(&self) -> i32 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with m b²
        let a2 = &self.a * &self.a;
        let mb2 = &self.b * &self.b * rat(self.m as i64);
        match a2.cmp(&mb2) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        a + self.b.to_f64().unwrap_or(f64::NAN) * (self.m as f64).sqrt()
    }

    /// Square root when the value is the square of a rational.
    pub fn rational_sqrt(&self) -> Option<Self> {
        let q = self.as_rational()?;
        if q.is_negative() {
            return None;
        }
        let n = num_integer::Roots::sqrt(q.numer());
        let d = num_integer::Roots::sqrt(q.denom());
        (&n * &n == *q.numer() && &d * &d == *q.denom())
            .then(|| Self::rational(BigRational::new(n, d)))
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("ExactScalar addition")
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("ExactScalar subtraction")
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("ExactScalar multiplication")
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> Self {
        ExactScalar { a: -self.a, b: -self.b, m: self.m }
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rational(&self.a));
        }
        let surd = if self.b.is_one() {
            format!("sqrt({})", self.m)
        } else if (-self.b.clone()).is_one() {
            format!("-sqrt({})", self.m)
        } else {
            format!("{}*sqrt({})", fmt_rational(&self.b), self.m)
        };
        if self.a.is_zero() {
            write!(f, "{surd}")
        } else if let Some(rest) = surd.strip_prefix('-') {
            write!(f, "{} - {}", fmt_rational(&self.a), rest)
        } else {
            write!(f, "{} + {}", fmt_rational(&self.a), surd)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares() {
        let x = ExactScalar::one() + ExactScalar::integer(2) * ExactScalar::sqrt_of(3);
        let y = ExactScalar::one() - ExactScalar::integer(2) * ExactScalar::sqrt_of(3);
        assert_eq!(x * y, ExactScalar::integer(-11));
    }

    #[test]
    fn radicand_is_square_free() {
        let x = ExactScalar::sqrt_of(12);
        assert_eq!(x.radicand(), 3);
        assert_eq!(x.irrational_part(), &rat(2));
        assert_eq!(ExactScalar::sqrt_of(9), ExactScalar::integer(3));
        let half = BigRational::new(BigInt::from(3), BigInt::from(4));
        let r = ExactScalar::sqrt_rational(&half).unwrap();
        assert_eq!(r.clone() * r, ExactScalar::rational(half));
    }

    #[test]
    fn mixed_radicands_are_rejected() {
        let err = ExactScalar::sqrt_of(2).checked_add(&ExactScalar::sqrt_of(3));
        assert_eq!(err, Err(Error::MixedRadicand(2, 3)));
        assert!(ExactScalar::sqrt_of(2).checked_add(&ExactScalar::integer(1)).is_ok());
    }

    #[test]
    fn inverse_and_zero() {
        let x = ExactScalar::integer(2) + ExactScalar::sqrt_of(3);
        assert_eq!(x.clone() * x.inv().unwrap(), ExactScalar::one());
        assert_eq!(ExactScalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn exact_sign() {
        let x = ExactScalar::integer(2) - ExactScalar::sqrt_of(3);
        assert_eq!(x.signum(), 1);
        let y = ExactScalar::integer(1) - ExactScalar::sqrt_of(3);
        assert_eq!(y.signum(), -1);
        assert_eq!(ExactScalar::zero().signum(), 0);
    }

    #[test]
    fn display() {
        assert_eq!(ExactScalar::ratio(-1, 2).to_string(), "-1/2");
        assert_eq!((-ExactScalar::sqrt_of(3)).to_string(), "-sqrt(3)");
        let x = ExactScalar::integer(1) - ExactScalar::integer(2) * ExactScalar::sqrt_of(3);
        assert_eq!(x.to_string(), "1 - 2*sqrt(3)");
    }
}
