use std::fmt;

use super::index::DIM;
use crate::error::Result;
use crate::scalars::{Jet, Scalar};

/// A vector in the frame `e₁, …, e₆`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S>(Vec<S>);

impl<S: Scalar> Vector<S> {
    pub fn new(components: [S; DIM]) -> Self {
        Vector(components.into())
    }

    pub fn from_fn(f: impl Fn(usize) -> S) -> Self {
        Vector((1..=DIM).map(f).collect())
    }

    pub fn zero() -> Self {
        Self::from_fn(|_| S::zero())
    }

    /// The frame vector `e_i` (1-based).
    pub fn basis(i: usize) -> Self {
        Self::from_fn(|k| if k == i { S::one() } else { S::zero() })
    }

    /// Component `i` (1-based).
    pub fn get(&self, i: usize) -> S {
        self.0[i - 1].clone()
    }

    pub fn components(&self) -> &[S] {
        &self.0
    }
}

/// A 6×6 matrix acting on vectors by columns: column `j` is the image of `e_j`.
/// Also used for bilinear forms such as the induced metric.
#[derive(Clone, Debug, PartialEq)]
pub struct Endo<S> {
    m: Vec<S>,
}

impl<S: Scalar> Endo<S> {
    /// Entry `(i, j)`, 1-based.
    pub fn from_fn(f: impl Fn(usize, usize) -> S) -> Self {
        let mut m = Vec::with_capacity(DIM * DIM);
        for i in 1..=DIM {
            for j in 1..=DIM {
                m.push(f(i, j));
            }
        }
        Endo { m }
    }

    pub fn try_from_fn(mut f: impl FnMut(usize, usize) -> Result<S>) -> Result<Self> {
        let mut m = Vec::with_capacity(DIM * DIM);
        for i in 1..=DIM {
            for j in 1..=DIM {
                m.push(f(i, j)?);
            }
        }
        Ok(Endo { m })
    }

    pub fn zero() -> Self {
        Self::from_fn(|_, _| S::zero())
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_columns(cols: &[Vector<S>]) -> Self {
        Self::from_fn(|i, j| cols[j - 1].get(i))
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.m[(i - 1) * DIM + (j - 1)]
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        Vector::from_fn(|i| self.get(i, j).clone())
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        Vector::from_fn(|i| {
            (1..=DIM).fold(S::zero(), |acc, k| acc + self.get(i, k).clone() * v.get(k))
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| {
            (1..=DIM).fold(S::zero(), |acc, k| acc + self.get(i, k).clone() * other.get(k, j).clone())
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| self.get(i, j).clone() + other.get(i, j).clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_fn(|i, j| self.get(i, j).clone() - other.get(i, j).clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(|i, j| -self.get(i, j).clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_fn(|i, j| s.clone() * self.get(i, j).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> S {
        (1..=DIM).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Endo<T> {
        Endo::from_fn(|i, j| f(self.get(i, j)))
    }

    pub fn try_map<T: Scalar>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<Endo<T>> {
        Endo::try_from_fn(|i, j| f(self.get(i, j)))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(Scalar::is_zero)
    }

    /// Determinant by cofactor expansion; exact in exact rings.
    pub fn determinant(&self) -> S {
        let rows: Vec<usize> = (1..=DIM).collect();
        self.minor(&rows, &rows)
    }

    /// Determinant of the submatrix on the given rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> S {
        if rows.is_empty() {
            return S::one();
        }
        let r = rows[0];
        let mut acc = S::zero();
        for (k, &c) in cols.iter().enumerate() {
            let entry = self.get(r, c);
            if entry.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry.clone() * self.minor(&rows[1..], &sub_cols);
            acc = if k % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }
}

impl Endo<Jet> {
    pub fn values(&self) -> [[f64; DIM]; DIM] {
        let mut out = [[0.0; DIM]; DIM];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.get(i + 1, j + 1).value();
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|x| x.value().abs()).fold(0.0, f64::max)
    }
}

impl<S: fmt::Display> fmt::Display for Endo<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..DIM {
            let row: Vec<String> = (0..DIM).map(|j| self.m[i * DIM + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
