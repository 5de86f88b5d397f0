use std::collections::BTreeMap;
use std::fmt;

use super::index::{MultiIndex, DIM};
use super::linear::{Endo, Vector};
use crate::error::{Error, Result};
use crate::scalars::{DiffPoly, ExactScalar, Expr, Jet, Scalar};

/// A k-form on the fixed six-dimensional coframe: a map from degree-k
/// multi-indices to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<S> {
    degree: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

impl<S> Form<S> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &S)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn get(&self, idx: MultiIndex) -> Option<&S> {
        self.coeffs.get(&idx)
    }

    /// Change the coefficient ring term by term.
    pub fn try_map<T: Scalar>(&self, mut f: impl FnMut(&S) -> Result<T>) -> Result<Form<T>> {
        let mut out = Form::zero(self.degree);
        for (k, c) in &self.coeffs {
            out.add_term(*k, f(c)?);
        }
        Ok(out)
    }

    /// Build a form of the given degree from raw (unpruned) entries without a
    /// ring; used for carriers such as expression coefficients.
    pub fn from_raw(degree: usize, coeffs: BTreeMap<MultiIndex, S>) -> Result<Self> {
        if let Some(k) = coeffs.keys().find(|k| k.degree() != degree) {
            return Err(Error::DegreeMismatch { expected: degree, found: k.degree() });
        }
        Ok(Form { degree, coeffs })
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "degree {degree} exceeds dimension 6");
        Form { degree, coeffs: BTreeMap::new() }
    }

    pub fn basis(idx: MultiIndex) -> Self {
        Self::term(S::one(), idx)
    }

    pub fn term(c: S, idx: MultiIndex) -> Self {
        let mut f = Self::zero(idx.degree());
        f.add_term(idx, c);
        f
    }

    /// `c · e^{i₁…i_k}` for unsorted 1-based indices.
    pub fn from_indices(c: S, idx: &[usize]) -> Result<Self> {
        match MultiIndex::from_indices(idx)? {
            Some((sign, mi)) => Ok(Self::term(if sign < 0 { -c } else { c }, mi)),
            None => Ok(Self::zero(idx.len())),
        }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (MultiIndex, S)>) -> Result<Self> {
        let mut f = Self::zero(degree);
        for (k, c) in terms {
            if k.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, found: k.degree() });
            }
            f.add_term(k, c);
        }
        Ok(f)
    }

    /// The volume form `c · e^{1…6}`.
    pub fn volume(c: S) -> Self {
        Self::term(c, MultiIndex::TOP)
    }

    fn add_term(&mut self, idx: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&idx) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.coeffs.insert(idx, s);
                }
            }
            None => {
                self.coeffs.insert(idx, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, idx: MultiIndex) -> S {
        self.coeffs.get(&idx).cloned().unwrap_or_else(S::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(*k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Form { degree: self.degree, coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c.clone())).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.degree);
        for (k, c) in &self.coeffs {
            out.add_term(*k, s.clone() * c.clone());
        }
        out
    }

    /// Exterior product; the sign is the inversion count of the merged indices.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        let degree = self.degree + other.degree;
        if degree > DIM {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let mut out = Self::zero(degree);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                match i.wedge_sign(*j) {
                    0 => {}
                    s => {
                        let c = a.clone() * b.clone();
                        out.add_term(i.union(*j), if s < 0 { -c } else { c });
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self ∧ self ∧ …` (`n` factors).
    pub fn power(&self, n: usize) -> Result<Self> {
        let mut acc = Form::term(S::one(), MultiIndex::EMPTY);
        for _ in 0..n {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Interior product `ι_v`.
    pub fn contract(&self, v: &Vector<S>) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let mut out = Self::zero(self.degree - 1);
        for (k, c) in &self.coeffs {
            for i in k.indices() {
                let vi = v.get(i);
                if vi.is_zero() {
                    continue;
                }
                let (sign, rest) = k.remove(i).expect("index present");
                let t = vi * c.clone();
                out.add_term(rest, if sign < 0 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Value on the vectors `v₁, …, v_k` with `e^{I}(e_{j₁}, …) = det(δ)`.
    pub fn evaluate(&self, vs: &[Vector<S>]) -> Result<S> {
        if vs.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: vs.len() });
        }
        let mut f = self.clone();
        for v in vs {
            f = f.contract(v)?;
        }
        Ok(f.coeff(MultiIndex::EMPTY))
    }

    /// Value on basis vectors `e_{j₁}, …, e_{j_k}` given by 1-based indices in
    /// any order.
    pub fn component(&self, idx: &[usize]) -> Result<S> {
        if idx.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: idx.len() });
        }
        Ok(match MultiIndex::from_indices(idx)? {
            None => S::zero(),
            Some((sign, mi)) => {
                let c = self.coeff(mi);
                if sign < 0 {
                    -c
                } else {
                    c
                }
            }
        })
    }

    /// `(A*a)(v₁, …, v_k) = a(Av₁, …, Av_k)`.
    pub fn pullback(&self, a: &Endo<S>) -> Result<Self> {
        // A* e^j = Σ_i A_{ji} e^i
        let pulled: Vec<Form<S>> = (1..=DIM)
            .map(|j| {
                Form::from_terms(1, (1..=DIM).map(|i| (MultiIndex::single(i), a.get(j, i).clone())))
            })
            .collect::<Result<_>>()?;
        let mut out = Self::zero(self.degree);
        for (k, c) in &self.coeffs {
            let mut term = Form::term(c.clone(), MultiIndex::EMPTY);
            for j in k.indices() {
                term = term.wedge(&pulled[j - 1])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// The scalar `s` with `self = s · Ω` for a top-degree form.
    pub fn top_coeff(&self, volume: &Form<S>) -> Result<S> {
        if self.degree != DIM {
            return Err(Error::DegreeMismatch { expected: DIM, found: self.degree });
        }
        if volume.degree != DIM {
            return Err(Error::DegreeMismatch { expected: DIM, found: volume.degree });
        }
        let v = volume.coeff(MultiIndex::TOP);
        if v.is_zero() {
            return Err(Error::ZeroVolume);
        }
        Ok(self.coeff(MultiIndex::TOP) * v.try_inv()?)
    }

    /// The derivation extension of an endomorphism acting on 1-forms by
    /// `e^j ↦ Σ_i D_{ij} e^i` (column `j` is the image of `e^j`).
    pub fn derivation(&self, d: &Endo<S>) -> Result<Self> {
        let images: Vec<Form<S>> = (1..=DIM)
            .map(|j| Form::from_terms(1, (1..=DIM).map(|i| (MultiIndex::single(i), d.get(i, j).clone()))))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(self.degree);
        for (k, c) in &self.coeffs {
            let idx = k.indices();
            for pos in 0..idx.len() {
                let mut term = Form::term(c.clone(), MultiIndex::EMPTY);
                for (q, &j) in idx.iter().enumerate() {
                    let factor =
                        if q == pos { images[j - 1].clone() } else { Form::basis(MultiIndex::single(j)) };
                    term = term.wedge(&factor)?;
                }
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    /// Largest absolute coefficient value under a numeric projection.
    pub fn sup_norm_by(&self, f: impl Fn(&S) -> f64) -> f64 {
        self.coeffs.values().map(|c| f(c).abs()).fold(0.0, f64::max)
    }
}

impl Form<Jet> {
    pub fn sup_norm(&self) -> f64 {
        self.sup_norm_by(|c| c.value())
    }

    pub fn values(&self) -> BTreeMap<MultiIndex, f64> {
        self.coeffs.iter().map(|(k, c)| (*k, c.value())).collect()
    }
}

impl Form<Expr> {
    pub fn to_poly(&self) -> Result<Form<DiffPoly>> {
        self.try_map(|e| e.to_diffpoly())
    }

    pub fn to_exact(&self) -> Result<Form<ExactScalar>> {
        self.try_map(|e| e.to_exact())
    }

    pub fn eval_jet(
        &self,
        t: f64,
        params: &BTreeMap<String, f64>,
    ) -> Result<Form<Jet>> {
        self.try_map(|e| e.eval_jet(t, params))
    }
}

impl Form<DiffPoly> {
    pub fn substitute(&self, subs: &[(crate::scalars::Symbol, DiffPoly)]) -> Self {
        let mut out = Form::zero(self.degree);
        for (k, c) in &self.coeffs {
            out.add_term(*k, c.substitute_all(subs));
        }
        out
    }
}

fn needs_parens(text: &str) -> bool {
    text.trim_start_matches('-').contains([' ', '+'])
}

impl<S: fmt::Display> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.coeffs.iter().enumerate() {
            let text = c.to_string();
            let (neg, body) = if needs_parens(&text) {
                (false, format!("({text})"))
            } else if let Some(rest) = text.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, text)
            };
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if k.degree() == 0 {
                f.write_str(&body)?;
            } else if body == "1" {
                write!(f, "{k}")?;
            } else {
                write!(f, "{body}*{k}")?;
            }
        }
        Ok(())
    }
}
