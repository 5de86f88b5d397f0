//! Coefficient rings: exact ℚ(√m) constants, differential polynomials and
//! numeric jets, behind one ring contract.

mod diffpoly;
mod exact;
mod expr;
mod jet;

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

pub use diffpoly::{DiffPoly, FromExact, Monomial, Symbol, Var};
pub use exact::ExactScalar;
pub use expr::Expr;
pub use jet::{Jet, MAX_JET_ORDER};

use crate::error::{Error, Result};

/// The ring contract shared by all backends. Forms, endomorphisms and the
/// exterior derivative are generic over it.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_exact(x: &ExactScalar) -> Result<Self>;
    /// `d/dt` of the coefficient.
    fn derivative(&self) -> Result<Self>;
    fn try_inv(&self) -> Result<Self>;
    fn backend() -> Backend;

    fn from_i64(n: i64) -> Self {
        Self::from_exact(&ExactScalar::integer(n)).expect("integers embed in every backend")
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_exact(&ExactScalar::ratio(n, d)).expect("rationals embed in every backend")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Poly,
    Numeric,
}

impl Scalar for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn from_exact(x: &ExactScalar) -> Result<Self> {
        Ok(x.clone())
    }
    fn derivative(&self) -> Result<Self> {
        Ok(ExactScalar::zero())
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn backend() -> Backend {
        Backend::Exact
    }
}

impl Scalar for DiffPoly {
    fn zero() -> Self {
        DiffPoly::zero()
    }
    fn one() -> Self {
        DiffPoly::one()
    }
    fn is_zero(&self) -> bool {
        DiffPoly::is_zero(self)
    }
    fn from_exact(x: &ExactScalar) -> Result<Self> {
        Ok(DiffPoly::constant(x.clone()))
    }
    fn derivative(&self) -> Result<Self> {
        Ok(DiffPoly::derivative(self))
    }
    fn try_inv(&self) -> Result<Self> {
        match self.as_constant() {
            Some(c) => Ok(DiffPoly::constant(c.inv()?)),
            None => Err(Error::NotInvertible(self.to_string())),
        }
    }
    fn backend() -> Backend {
        Backend::Poly
    }
}

impl Scalar for Jet {
    fn zero() -> Self {
        Jet::constant(0.0)
    }
    fn one() -> Self {
        Jet::constant(1.0)
    }
    fn is_zero(&self) -> bool {
        Jet::is_zero(self)
    }
    fn from_exact(x: &ExactScalar) -> Result<Self> {
        Ok(Jet::constant(x.to_f64()))
    }
    fn derivative(&self) -> Result<Self> {
        Jet::derivative(self)
    }
    fn try_inv(&self) -> Result<Self> {
        self.recip()
    }
    fn backend() -> Backend {
        Backend::Numeric
    }
}

impl FromExact for Jet {
    fn from_exact(x: &ExactScalar) -> Self {
        Jet::constant(x.to_f64())
    }
}

impl FromExact for ExactScalar {
    fn from_exact(x: &ExactScalar) -> Self {
        x.clone()
    }
}

impl FromExact for f64 {
    fn from_exact(x: &ExactScalar) -> Self {
        x.to_f64()
    }
}

/// Real-valued backends: square roots and plain values.
pub trait RealScalar: Scalar {
    fn sqrt(&self) -> Result<Self>;
    fn value(&self) -> f64;
}

impl RealScalar for Jet {
    fn sqrt(&self) -> Result<Self> {
        Jet::sqrt(self)
    }
    fn value(&self) -> f64 {
        Jet::value(self)
    }
}

/// A value of any backend, for callers that pick the ring at run time.
/// Operations between different backends fail with `MixedBackend`.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyScalar {
    Exact(ExactScalar),
    Poly(DiffPoly),
    Numeric(Jet),
}

impl AnyScalar {
    fn name(&self) -> &'static str {
        match self {
            AnyScalar::Exact(_) => "exact",
            AnyScalar::Poly(_) => "polynomial",
            AnyScalar::Numeric(_) => "numeric",
        }
    }

    fn mixed(&self, other: &Self) -> Error {
        Error::MixedBackend(format!("{} and {}", self.name(), other.name()))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AnyScalar::Exact(a), AnyScalar::Exact(b)) => Ok(AnyScalar::Exact(a.checked_add(b)?)),
            (AnyScalar::Poly(a), AnyScalar::Poly(b)) => Ok(AnyScalar::Poly(a.checked_add(b)?)),
            (AnyScalar::Numeric(a), AnyScalar::Numeric(b)) => Ok(AnyScalar::Numeric(*a + *b)),
            _ => Err(self.mixed(other)),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (AnyScalar::Exact(a), AnyScalar::Exact(b)) => Ok(AnyScalar::Exact(a.checked_mul(b)?)),
            (AnyScalar::Poly(a), AnyScalar::Poly(b)) => Ok(AnyScalar::Poly(a.checked_mul(b)?)),
            (AnyScalar::Numeric(a), AnyScalar::Numeric(b)) => Ok(AnyScalar::Numeric(*a * *b)),
            _ => Err(self.mixed(other)),
        }
    }

    pub fn derivative(&self) -> Result<Self> {
        Ok(match self {
            AnyScalar::Exact(a) => AnyScalar::Exact(Scalar::derivative(a)?),
            AnyScalar::Poly(a) => AnyScalar::Poly(a.derivative()),
            AnyScalar::Numeric(a) => AnyScalar::Numeric(a.derivative()?),
        })
    }

    pub fn is_zero(&self) -> bool {
        match self {
            AnyScalar::Exact(a) => a.is_zero(),
            AnyScalar::Poly(a) => a.is_zero(),
            AnyScalar::Numeric(a) => a.is_zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_backends_are_rejected() {
        let a = AnyScalar::Exact(ExactScalar::integer(2));
        let b = AnyScalar::Numeric(Jet::new(1.0, 0.0));
        assert!(matches!(a.checked_add(&b), Err(Error::MixedBackend(_))));
        let p = AnyScalar::Poly(DiffPoly::symbol("p1"));
        assert!(matches!(p.checked_mul(&a), Err(Error::MixedBackend(_))));
        assert!(a.checked_mul(&a).is_ok());
    }

    #[test]
    fn inversion_of_zero() {
        assert_eq!(ExactScalar::zero().try_inv(), Err(Error::DivisionByZero));
        assert_eq!(DiffPoly::zero().try_inv(), Err(Error::DivisionByZero));
        assert!(matches!(DiffPoly::symbol("h1").try_inv(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn constants_differentiate_to_zero() {
        let c = ExactScalar::ratio(7, 2);
        assert!(Scalar::derivative(&c).unwrap().is_zero());
        let d = AnyScalar::Poly(DiffPoly::constant(c)).derivative().unwrap();
        assert!(d.is_zero());
    }
}
