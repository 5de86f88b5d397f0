//! Smoothness at a singular orbit: isotropy-invariant forms on the tangent
//! space and parity constraints on Taylor coefficients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exterior::{invariant_forms, parse_form, skew_generator, Endo, Form};
use crate::hitchin::lambda;
use crate::linalg::rref;
use crate::scalars::{DiffPoly, ExactScalar, Symbol, Var};

/// An infinitesimal isotropy action on 1-forms (column `j` is the image of
/// `e^j`).
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantActionGenerator {
    matrix: Endo<ExactScalar>,
}

impl InvariantActionGenerator {
    /// Rejects matrices that are not skew with rational entries.
    pub fn new(matrix: Endo<ExactScalar>) -> Result<Self> {
        if !matrix.add(&matrix.transpose()).is_zero() {
            return Err(Error::Invalid("isotropy generator must be skew".into()));
        }
        for i in 1..=6 {
            for j in 1..=6 {
                if !matrix.get(i, j).is_rational() {
                    return Err(Error::Invalid("isotropy generator must be rational".into()));
                }
            }
        }
        Ok(InvariantActionGenerator { matrix })
    }

    /// The rotation `e¹ ↦ e², e² ↦ −e¹, e³ ↦ e⁴, e⁴ ↦ −e³` fixing `e⁵, e⁶`,
    /// where `e²` stands for the slice coordinate `dx`.
    pub fn phi_f1() -> Self {
        Self::from_two_form("e12 + e34").expect("valid generator")
    }

    pub fn zero() -> Self {
        InvariantActionGenerator { matrix: Endo::zero() }
    }

    /// A generator written as a 2-form, see [`skew_generator`].
    pub fn from_two_form(src: &str) -> Result<Self> {
        Self::new(skew_generator(&parse_form(src, Some(2))?.to_exact()?))
    }

    /// `phi_f1`, `zero`, or a 2-form.
    pub fn named(name: &str) -> Result<Self> {
        match name {
            "phi_f1" => Ok(Self::phi_f1()),
            "zero" | "0" => Ok(Self::zero()),
            other => Self::from_two_form(other),
        }
    }

    pub fn matrix(&self) -> &Endo<ExactScalar> {
        &self.matrix
    }
}

/// Basis of the degree-`k` forms annihilated by the generator.
pub fn invariant_subspace(gen: &InvariantActionGenerator, k: usize) -> Result<Vec<Form<ExactScalar>>> {
    if !(1..=3).contains(&k) {
        return Err(Error::Invalid(format!("degree must be 1, 2 or 3, got {k}")));
    }
    invariant_forms(std::slice::from_ref(&gen.matrix), k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Coefficients forced to vanish (or take a fixed value) at the boundary
/// point by a linear ODE system and parity of the Taylor expansions in the
/// distance to that point. Values forced by parity alone are omitted.
pub fn parity_limits(sys: &[DiffPoly], parity: &BTreeMap<String, Parity>) -> Result<BTreeMap<String, ExactScalar>> {
    let with_eqs = forced(sys, parity)?;
    let alone = forced(&[], parity)?;
    Ok(with_eqs.into_iter().filter(|(s, v)| alone.get(s) != Some(v)).collect())
}

fn forced(sys: &[DiffPoly], parity: &BTreeMap<String, Parity>) -> Result<BTreeMap<String, ExactScalar>> {
    // unknowns a_{s,n}: the n-th Taylor coefficient of symbol s
    let mut top: BTreeMap<Symbol, u32> = parity.keys().map(|s| (Symbol::new(s), 0)).collect();
    for p in sys {
        if p.degree() > 1 {
            return Err(Error::NonLinear(p.to_string()));
        }
        for v in p.variables() {
            let e = top.entry(v.symbol.clone()).or_insert(0);
            *e = (*e).max(v.order);
        }
    }
    let mut cols: BTreeMap<(Symbol, u32), usize> = BTreeMap::new();
    for (s, &k) in &top {
        for n in 0..=k + 1 {
            let next = cols.len();
            cols.insert((s.clone(), n), next);
        }
    }
    let width = cols.len() + 1;
    let mut rows: Vec<Vec<ExactScalar>> = Vec::new();
    let factorial = |n: u32| (1..=n as i64).product::<i64>();
    for p in sys {
        let mut order0 = vec![ExactScalar::zero(); width];
        let mut order1 = vec![ExactScalar::zero(); width];
        for (m, c) in p.terms() {
            match m.factors() {
                [] => order0[width - 1] = c.clone(),
                [(v, 1)] => {
                    let Var { symbol, order } = v;
                    let k = *order;
                    order0[cols[&(symbol.clone(), k)]] = c.clone() * ExactScalar::integer(factorial(k));
                    order1[cols[&(symbol.clone(), k + 1)]] =
                        c.clone() * ExactScalar::integer(factorial(k + 1));
                }
                _ => return Err(Error::NonLinear(p.to_string())),
            }
        }
        rows.push(order0);
        rows.push(order1);
    }
    for ((s, n), &col) in &cols {
        let odd_term = n % 2 == 1;
        let vanishes = match parity.get(s.name()) {
            Some(Parity::Even) => odd_term,
            Some(Parity::Odd) => !odd_term,
            None => false,
        };
        if vanishes {
            let mut r = vec![ExactScalar::zero(); width];
            r[col] = ExactScalar::one();
            rows.push(r);
        }
    }
    if rows.is_empty() {
        return Ok(BTreeMap::new());
    }
    let (red, pivots) = rref(&rows)?;
    if pivots.contains(&(width - 1)) {
        return Err(Error::InconsistentParity);
    }
    let mut out = BTreeMap::new();
    for (row, &pc) in red.iter().zip(&pivots) {
        let only_pivot = (0..width - 1).all(|j| j == pc || row[j].is_zero());
        if !only_pivot {
            continue;
        }
        if let Some(((s, 0), _)) = cols.iter().find(|(_, &c)| c == pc) {
            out.insert(s.name().to_string(), -row[width - 1].clone());
        }
    }
    Ok(out)
}

/// `λ` of the boundary family after setting the listed parameters to zero.
pub fn boundary_lambda(family: &Form<DiffPoly>, vanishing: &[&str]) -> Result<DiffPoly> {
    let subs: Vec<(Symbol, DiffPoly)> = vanishing.iter().map(|s| (Symbol::new(s), DiffPoly::zero())).collect();
    let rho = family.substitute(&subs);
    lambda(&rho, &Form::volume(DiffPoly::one()))
}
