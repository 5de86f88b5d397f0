//! Hitchin's stability machinery for 3-forms in six dimensions.
//!
//! Everything is trivialized by a fixed volume form `Ω`: `K_ψ` is the
//! endomorphism with `ι_{K e_j} Ω = ι_{e_j}ψ ∧ ψ`, `λ = tr(K²)/6`, and on the
//! stable orbit `λ < 0` the complex structure is `J = −K/√(−λ)`.

mod check;

pub use check::{
    su3_check, su3_system, CheckOptions, Classification, Condition, Orientation, SU3Report, SampleReport,
    SymbolicCondition, Verdict,
};

use crate::error::{Error, Result};
use crate::exterior::{Endo, Form, MultiIndex, Vector, DIM};
use crate::scalars::{DiffPoly, RealScalar, Scalar};

/// `K_ψ`: column `j` is the vector `w` with `ι_w Ω = ι_{e_j}ψ ∧ ψ`.
pub fn k_matrix<S: Scalar>(psi: &Form<S>, volume: &Form<S>) -> Result<Endo<S>> {
    if volume.degree() != DIM || volume.is_zero() {
        return Err(Error::ZeroVolume);
    }
    if psi.degree() != 3 {
        return Err(Error::DegreeMismatch { expected: 3, found: psi.degree() });
    }
    let c_inv = volume.coeff(MultiIndex::TOP).try_inv()?;
    let mut cols = Vec::with_capacity(DIM);
    for j in 1..=DIM {
        let alpha = psi.contract(&Vector::basis(j))?.wedge(psi)?;
        cols.push(Vector::from_fn(|i| {
            let hat = MultiIndex::single(i).complement();
            let a = alpha.coeff(hat) * c_inv.clone();
            if i % 2 == 1 {
                a
            } else {
                -a
            }
        }));
    }
    Ok(Endo::from_columns(&cols))
}

/// `λ(ψ) = tr(K_ψ²)/6`, quartic in the coefficients of `ψ`.
pub fn lambda<S: Scalar>(psi: &Form<S>, volume: &Form<S>) -> Result<S> {
    let k = k_matrix(psi, volume)?;
    Ok(k.compose(&k).trace() * S::from_ratio(1, 6))
}

/// The 3-form `(a, b, c) ↦ ψ(M e_a, e_b, e_c)`, alternating whenever `ψ` is
/// of type (3,0)+(0,3) for `M`.
pub fn first_slot<S: Scalar>(psi: &Form<S>, m: &Endo<S>) -> Result<Form<S>> {
    let mut terms = Vec::new();
    for idx in MultiIndex::all_of_degree(3) {
        let [a, b, c] = idx.indices()[..] else { unreachable!() };
        let mut acc = S::zero();
        for i in 1..=DIM {
            let mi = m.get(i, a);
            if mi.is_zero() {
                continue;
            }
            acc = acc + mi.clone() * psi.component(&[i, b, c])?;
        }
        terms.push((idx, acc));
    }
    Form::from_terms(3, terms)
}

/// `g_ij = ω(e_i, M e_j)`.
pub fn metric_of<S: Scalar>(omega: &Form<S>, m: &Endo<S>) -> Result<Endo<S>> {
    Endo::try_from_fn(|i, j| {
        let mut acc = S::zero();
        for k in 1..=DIM {
            let mk = m.get(k, j);
            if !mk.is_zero() {
                acc = acc + omega.component(&[i, k])? * mk.clone();
            }
        }
        Ok(acc)
    })
}

/// Numeric `J_ψ = −K/√(−λ)`; fails with `NotStable` unless `λ < 0`.
pub fn j_endo<S: RealScalar>(psi: &Form<S>, volume: &Form<S>) -> Result<Endo<S>> {
    let k = k_matrix(psi, volume)?;
    let lam = k.compose(&k).trace() * S::from_ratio(1, 6);
    if lam.value() >= 0.0 || lam.value().is_nan() {
        return Err(Error::NotStable(lam.value()));
    }
    let s = (-lam).sqrt()?.try_inv()?;
    Ok(k.scale(&(-s)))
}

/// Numeric `ψ₋ = −ψ(J·,·,·)`.
pub fn psi_minus<S: RealScalar>(psi: &Form<S>, volume: &Form<S>) -> Result<Form<S>> {
    let j = j_endo(psi, volume)?;
    Ok(first_slot(psi, &j)?.neg())
}

/// Numeric `ψ₋ = ψ(J·,J·,J·)`.
pub fn psi_minus_triple<S: RealScalar>(psi: &Form<S>, volume: &Form<S>) -> Result<Form<S>> {
    let j = j_endo(psi, volume)?;
    psi.pullback(&j)
}

/// Numeric induced metric `g = ω(·, J·)`.
pub fn induced_metric<S: RealScalar>(omega: &Form<S>, psi: &Form<S>, volume: &Form<S>) -> Result<Endo<S>> {
    let j = j_endo(psi, volume)?;
    metric_of(omega, &j)
}

/// A quantity written as `numerator · (−λ)^(−scale_exp/2)`, used for `J`,
/// `ψ₋` and `g` with polynomial coefficients. Valid under the assumption
/// `λ < 0`, which cannot be verified symbolically.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled<T> {
    pub numerator: T,
    pub scale_exp: u32,
}

/// Polynomial stability data of a parametrized 3-form.
#[derive(Clone, Debug)]
pub struct Symbolic {
    pub k: Endo<DiffPoly>,
    pub lambda: DiffPoly,
}

impl Symbolic {
    pub fn new(psi: &Form<DiffPoly>, volume: &Form<DiffPoly>) -> Result<Self> {
        let k = k_matrix(psi, volume)?;
        let lambda = k.compose(&k).trace() * DiffPoly::from_ratio(1, 6);
        Ok(Symbolic { k, lambda })
    }

    pub fn j(&self) -> Scaled<Endo<DiffPoly>> {
        Scaled { numerator: self.k.neg(), scale_exp: 1 }
    }

    /// `ψ₋` by the one-slot formula: numerator `ψ(K·,·,·)`.
    pub fn psi_minus(&self, psi: &Form<DiffPoly>) -> Result<Scaled<Form<DiffPoly>>> {
        Ok(Scaled { numerator: first_slot(psi, &self.k)?, scale_exp: 1 })
    }

    /// `ψ₋` by the triple-slot formula: numerator `ψ(−K·,−K·,−K·)`.
    pub fn psi_minus_triple(&self, psi: &Form<DiffPoly>) -> Result<Scaled<Form<DiffPoly>>> {
        Ok(Scaled { numerator: psi.pullback(&self.k.neg())?, scale_exp: 3 })
    }

    pub fn metric(&self, omega: &Form<DiffPoly>) -> Result<Scaled<Endo<DiffPoly>>> {
        Ok(Scaled { numerator: metric_of(omega, &self.k.neg())?, scale_exp: 1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::parse_form;
    use crate::scalars::{ExactScalar, Jet};

    fn exact(src: &str, deg: usize) -> Form<ExactScalar> {
        parse_form(src, Some(deg)).unwrap().to_exact().unwrap()
    }

    fn poly(src: &str, deg: usize) -> Form<DiffPoly> {
        parse_form(src, Some(deg)).unwrap().to_poly().unwrap()
    }

    fn jet(src: &str, deg: usize) -> Form<Jet> {
        parse_form(src, Some(deg)).unwrap().eval_jet(0.0, &Default::default()).unwrap()
    }

    // brute force: K_ij from the 5-form coefficients, written out longhand
    fn k_oracle(psi: &Form<ExactScalar>, j: usize, i: usize) -> ExactScalar {
        let alpha = psi.contract(&Vector::basis(j)).unwrap().wedge(psi).unwrap();
        let rest: Vec<usize> = (1..=6).filter(|&x| x != i).collect();
        let five = alpha.component(&rest).unwrap();
        // ι_{e_i} e^{1..6} = (−1)^{i−1} e^{1..î..6}
        if (i - 1).is_multiple_of(2) {
            five
        } else {
            -five
        }
    }

    #[test]
    fn decomposable_forms_have_zero_k() {
        let vol = exact("e123456", 6);
        assert!(k_matrix(&exact("e123", 3), &vol).unwrap().is_zero());
    }

    #[test]
    fn k_matches_longhand_oracle() {
        let vol = exact("e123456", 6);
        let psi = exact("2*e135 - e146 + 3*e236 + e245 - e123 + 5*e456", 3);
        let k = k_matrix(&psi, &vol).unwrap();
        for i in 1..=6 {
            for j in 1..=6 {
                assert_eq!(k.get(i, j), &k_oracle(&psi, j, i));
            }
        }
        let k2 = k_matrix(&psi, &exact("-2*e123456", 6)).unwrap();
        assert_eq!(k2, k.scale(&ExactScalar::ratio(-1, 2)));
    }

    #[test]
    fn lambda_of_generic_b1_family() {
        let vol = poly("e123456", 6);
        let psi = poly("p1*e135 + p2*e146 + p3*e235 + p4*e246", 3);
        let lam = lambda(&psi, &vol).unwrap();
        let s = |x| DiffPoly::symbol(x);
        let q = s("p1") * s("p4") - s("p2") * s("p3");
        assert_eq!(lam, q.clone() * q);
        // ι_{e1}ψ∧ψ has an e^{13456} part, so column 1 also has an e2 entry
        let k = k_matrix(&psi, &vol).unwrap();
        assert_eq!(k.get(1, 1), &(-(s("p1") * s("p4")) - s("p2") * s("p3")));
        assert_eq!(k.get(2, 1), &(DiffPoly::integer(2) * s("p1") * s("p2")));
        for i in 3..=6 {
            assert!(k.get(i, 1).is_zero());
        }
    }

    #[test]
    fn flat_pair() {
        let vol = exact("e123456", 6);
        let psi = exact("e135 - e146 - e236 - e245", 3);
        assert_eq!(lambda(&psi, &vol).unwrap(), ExactScalar::integer(-4));
        let jvol = jet("e123456", 6);
        let jpsi = jet("e135 - e146 - e236 - e245", 3);
        let g = induced_metric(&jet("e12 + e34 + e56", 2), &jpsi, &jvol).unwrap();
        let id = Endo::<Jet>::identity();
        assert!(g.sub(&id).max_abs() < 1e-12);
        let j = j_endo(&jpsi, &jvol).unwrap();
        assert!(j.compose(&j).add(&id).max_abs() < 1e-12);
        let a = psi_minus(&jpsi, &jvol).unwrap();
        let b = psi_minus_triple(&jpsi, &jvol).unwrap();
        assert!(a.sub(&b).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn unstable_forms_are_rejected() {
        let vol = jet("e123456", 6);
        let psi = jet("e135 + e146 + e235 + 2*e246", 3);
        assert!(matches!(j_endo(&psi, &vol), Err(Error::NotStable(_))));
    }

    #[test]
    fn scaled_triple_slot_is_lambda_times_one_slot() {
        let vol = poly("e123456", 6);
        let psi = poly("p1*(e123+e145) + p2*(e124-e135) + p3*(e246-e356) + p5*(e125+e134) + p6*(e256+e346)", 3);
        let s = Symbolic::new(&psi, &vol).unwrap();
        let one = s.psi_minus(&psi).unwrap();
        let three = s.psi_minus_triple(&psi).unwrap();
        assert_eq!(three.numerator, one.numerator.scale(&(-s.lambda.clone())));
    }
}
