use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Truncated Taylor data of a smooth function of `t` at one point.
///
/// `order` counts how many derivatives are known: a first-order jet carries
/// `(value, deriv)`, a second-order jet also carries the second derivative.
/// Differentiating lowers the order by one; an order-0 jet is a bare value and
/// cannot be differentiated again.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    value: f64,
    d1: f64,
    d2: f64,
    order: u8,
}

pub const MAX_JET_ORDER: u8 = 2;

impl Jet {
    /// First-order jet `(value, deriv)`.
    pub fn new(value: f64, deriv: f64) -> Self {
        Jet { value, d1: deriv, d2: 0.0, order: 1 }
    }

    pub fn second_order(value: f64, d1: f64, d2: f64) -> Self {
        Jet { value, d1, d2, order: 2 }
    }

    /// A constant function; its derivatives are exactly zero to any order.
    pub fn constant(value: f64) -> Self {
        Jet { value, d1: 0.0, d2: 0.0, order: MAX_JET_ORDER }
    }

    /// The coordinate function `t` itself.
    pub fn variable(t: f64) -> Self {
        Jet { value: t, d1: 1.0, d2: 0.0, order: MAX_JET_ORDER }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn deriv(&self) -> f64 {
        self.d1
    }

    pub fn second_deriv(&self) -> Option<f64> {
        (self.order >= 2).then_some(self.d2)
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn truncate(self, order: u8) -> Self {
        let order = order.min(self.order);
        let mut out = self;
        out.order = order;
        if order < 2 {
            out.d2 = 0.0;
        }
        if order < 1 {
            out.d1 = 0.0;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0 && self.d1 == 0.0 && self.d2 == 0.0
    }

    pub fn derivative(&self) -> Result<Self> {
        match self.order {
            0 => Err(Error::JetOrderExceeded),
            o => Ok(Jet { value: self.d1, d1: self.d2, d2: 0.0, order: o - 1 }.truncate(o - 1)),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.value == 0.0 {
            return Err(Error::DivisionByZero);
        }
        let u = self.value;
        let r = 1.0 / u;
        Ok(Jet {
            value: r,
            d1: -self.d1 * r * r,
            d2: -self.d2 * r * r + 2.0 * self.d1 * self.d1 * r * r * r,
            order: self.order,
        }
        .truncate(self.order))
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        Jet {
            value: e,
            d1: e * self.d1,
            d2: e * (self.d2 + self.d1 * self.d1),
            order: self.order,
        }
        .truncate(self.order)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.value < 0.0 {
            return Err(Error::Eval(format!("sqrt of negative value {}", self.value)));
        }
        let s = self.value.sqrt();
        if self.order == 0 {
            return Ok(Jet { value: s, d1: 0.0, d2: 0.0, order: 0 });
        }
        if s == 0.0 {
            return Err(Error::Eval("derivative of sqrt at 0".into()));
        }
        let d1 = self.d1 / (2.0 * s);
        let d2 = self.d2 / (2.0 * s) - self.d1 * self.d1 / (4.0 * s * s * s);
        Ok(Jet { value: s, d1, d2, order: self.order }.truncate(self.order))
    }

    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.recip()?.powi(-n);
        }
        let mut acc = Jet::constant(1.0);
        for _ in 0..n {
            acc = acc * *self;
        }
        Ok(acc)
    }
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        let o = self.order.min(other.order);
        self.value == other.value && (o < 1 || self.d1 == other.d1) && (o < 2 || self.d2 == other.d2)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet { value: self.value + rhs.value, d1: self.d1 + rhs.d1, d2: self.d2 + rhs.d2, order }
            .truncate(order)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { value: -self.value, d1: -self.d1, d2: -self.d2, order: self.order }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        Jet {
            value: self.value * rhs.value,
            d1: self.value * rhs.d1 + self.d1 * rhs.value,
            d2: self.d2 * rhs.value + 2.0 * self.d1 * rhs.d1 + self.value * rhs.d2,
            order,
        }
        .truncate(order)
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order {
            0 => write!(f, "{}", self.value),
            1 => write!(f, "Jet({}, {})", self.value, self.d1),
            _ => write!(f, "Jet({}, {}, {})", self.value, self.d1, self.d2),
        }
    }
}
