//! Forms annihilated by a family of infinitesimal isotropy generators.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::form::Form;
use super::index::MultiIndex;
use super::linear::Endo;
use crate::error::Result;
use crate::linalg;
use crate::scalars::{ExactScalar, Scalar};

/// The skew generator encoded by a 2-form `Σ x_ab e^{ab}`: it acts on
/// 1-forms by `e^a ↦ x_ab e^b` and `e^b ↦ −x_ab e^a`.
pub fn skew_generator(x: &Form<ExactScalar>) -> Endo<ExactScalar> {
    Endo::from_fn(|i, j| {
        let c = |a: usize, b: usize| x.coeff(MultiIndex::from_indices(&[a, b]).unwrap().unwrap().1);
        match j.cmp(&i) {
            std::cmp::Ordering::Less => c(j, i),
            std::cmp::Ordering::Greater => -c(i, j),
            std::cmp::Ordering::Equal => ExactScalar::zero(),
        }
    })
}

/// A basis of the degree-`k` forms annihilated by every generator, acting as
/// derivations. Rational basis vectors are scaled to primitive integers.
pub fn invariant_forms(gens: &[Endo<ExactScalar>], k: usize) -> Result<Vec<Form<ExactScalar>>> {
    let basis = MultiIndex::all_of_degree(k);
    let pos = |m: &MultiIndex| basis.iter().position(|b| b == m).expect("same degree");
    let mut rows = Vec::new();
    for g in gens {
        let mut block = vec![vec![ExactScalar::zero(); basis.len()]; basis.len()];
        for (j, b) in basis.iter().enumerate() {
            let image = Form::basis(*b).derivation(g)?;
            for (m, c) in image.terms() {
                block[pos(m)][j] = c.clone();
            }
        }
        rows.extend(block);
    }
    if rows.is_empty() {
        rows.push(vec![ExactScalar::zero(); basis.len()]);
    }
    let mut out = Vec::new();
    for v in linalg::kernel(&rows, basis.len())? {
        let v = primitive(v);
        out.push(Form::from_terms(k, basis.iter().copied().zip(v))?);
    }
    Ok(out)
}

fn primitive(v: Vec<ExactScalar>) -> Vec<ExactScalar> {
    if !v.iter().all(ExactScalar::is_rational) {
        return v;
    }
    let qs: Vec<BigRational> = v.iter().map(|x| x.rational_part().clone()).collect();
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let g = if g.is_zero() { BigInt::one() } else { g };
    ints.into_iter().map(|x| ExactScalar::rational(BigRational::from_integer(x / &g))).collect()
}

/// Whether a form is annihilated by every generator.
pub fn is_invariant<S: Scalar>(a: &Form<S>, gens: &[Endo<ExactScalar>]) -> Result<bool> {
    for g in gens {
        let g: Endo<S> = g.try_map(S::from_exact)?;
        if !a.derivation(&g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}
