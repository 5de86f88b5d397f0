use std::collections::BTreeMap;

use proptest::prelude::*;

use stableforms::coframe::Coframe;
use stableforms::exterior::{invariant_forms, Endo, Form, MultiIndex, Vector};
use stableforms::hitchin::{j_endo, k_matrix, lambda, psi_minus, psi_minus_triple};
use stableforms::scalars::{DiffPoly, ExactScalar, Expr, Jet, Scalar};

const TRIALS: u32 = 128;

fn config() -> ProptestConfig {
    ProptestConfig { cases: TRIALS, ..ProptestConfig::default() }
}

fn exact_form(degree: usize, coeffs: &[i64]) -> Form<ExactScalar> {
    let basis = MultiIndex::all_of_degree(degree);
    Form::from_terms(degree, basis.into_iter().zip(coeffs).map(|(i, &c)| (i, ExactScalar::integer(c)))).unwrap()
}

fn exact_endo(entries: &[i64]) -> Endo<ExactScalar> {
    Endo::from_fn(|i, j| ExactScalar::integer(entries[(i - 1) * 6 + (j - 1)]))
}

fn jet_endo(entries: &[f64]) -> Endo<Jet> {
    Endo::from_fn(|i, j| Jet::constant(entries[(i - 1) * 6 + (j - 1)]))
}

fn flat_psi() -> Form<Jet> {
    let mut f = Form::zero(3);
    for (c, idx) in [(1.0, [1, 3, 5]), (-1.0, [1, 4, 6]), (-1.0, [2, 3, 6]), (-1.0, [2, 4, 5])] {
        f = f.add(&Form::from_indices(Jet::constant(c), &idx).unwrap()).unwrap();
    }
    f
}

fn unit<S: Scalar>() -> Form<S> {
    Form::volume(S::one())
}

/// A stable 3-form: the flat model pulled back by a well-conditioned map.
fn stable_psi(entries: &[f64]) -> Form<Jet> {
    let a = Endo::<Jet>::identity().add(&jet_endo(entries).scale(&Jet::constant(0.3)));
    flat_psi().pullback(&a).unwrap()
}

fn max_diff(a: &Form<Jet>, b: &Form<Jet>) -> f64 {
    a.sub(b).unwrap().sup_norm()
}

fn poly_coeffs(degree: usize, coeffs: &[(i64, i64)]) -> Vec<DiffPoly> {
    let p1 = DiffPoly::symbol("p1");
    let p2 = DiffPoly::symbol("p2");
    (0..MultiIndex::all_of_degree(degree).len())
        .map(|k| {
            let (a, b) = coeffs[k % coeffs.len()];
            p1.scale(&ExactScalar::integer(a)) + p2.clone() * p1.clone().scale(&ExactScalar::integer(b))
        })
        .collect()
}

/// A random combination of invariant forms with polynomial coefficients.
fn invariant_poly_form(cf: &Coframe, degree: usize, coeffs: &[(i64, i64)]) -> Form<DiffPoly> {
    let basis = invariant_forms(cf.isotropy(), degree).unwrap();
    let polys = poly_coeffs(degree, coeffs);
    let mut f = Form::zero(degree);
    for (b, c) in basis.iter().zip(polys) {
        let b = b.try_map(DiffPoly::from_exact).unwrap();
        f = f.add(&b.scale(&c)).unwrap();
    }
    f
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squared_vanishes_on_presets(
        preset in prop::sample::select(Coframe::preset_names()),
        degree in 0usize..5,
        coeffs in prop::collection::vec((-3i64..=3, -3i64..=3), 1..8),
    ) {
        let cf = Coframe::preset(preset).unwrap();
        let a = invariant_poly_form(&cf, degree, &coeffs);
        prop_assert!(cf.d(&cf.d(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn d_is_an_antiderivation(
        p in 0usize..4,
        q in 0usize..3,
        ca in prop::collection::vec((-3i64..=3, -3i64..=3), 1..6),
        cb in prop::collection::vec((-3i64..=3, -3i64..=3), 1..6),
    ) {
        let cf = Coframe::preset("a1").unwrap();
        let a = invariant_poly_form(&cf, p, &ca);
        let b = invariant_poly_form(&cf, q, &cb);
        let lhs = cf.d(&a.wedge(&b).unwrap()).unwrap();
        let first = cf.d(&a).unwrap().wedge(&b).unwrap();
        let second = a.wedge(&cf.d(&b).unwrap()).unwrap();
        let rhs = if p % 2 == 0 { first.add(&second) } else { first.sub(&second) }.unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn lambda_transforms_by_det_squared(
        psi in prop::collection::vec(-2i64..=2, 20),
        a in prop::collection::vec(-2i64..=2, 36),
    ) {
        let psi = exact_form(3, &psi);
        let a = exact_endo(&a);
        let vol = unit();
        let det = a.determinant();
        let pulled = lambda(&psi.pullback(&a).unwrap(), &vol).unwrap();
        prop_assert_eq!(pulled, det.clone() * det * lambda(&psi, &vol).unwrap());
    }

    #[test]
    fn lambda_is_quartic_and_k_quadratic(
        psi in prop::collection::vec(-3i64..=3, 20),
        n in -5i64..=5,
        d in 1i64..=4,
    ) {
        let psi = exact_form(3, &psi);
        let c = ExactScalar::ratio(n, d);
        let scaled = psi.scale(&c);
        let vol = unit();
        prop_assert_eq!(lambda(&scaled, &vol).unwrap(), c.pow(4) * lambda(&psi, &vol).unwrap());
        let k = k_matrix(&psi, &vol).unwrap();
        prop_assert_eq!(k_matrix(&scaled, &vol).unwrap(), k.scale(&c.pow(2)));
    }

    #[test]
    fn numeric_complex_structure(a in prop::collection::vec(-1.0f64..1.0, 36)) {
        let psi = stable_psi(&a);
        let vol = unit();
        let j = j_endo(&psi, &vol).unwrap();
        let err = j.compose(&j).add(&Endo::identity()).max_abs();
        prop_assert!(err < 1e-10, "J^2 + 1 = {err}");

        let minus = psi_minus(&psi, &vol).unwrap();
        let lp = lambda(&psi, &vol).unwrap().value();
        let lm = lambda(&minus, &vol).unwrap().value();
        prop_assert!((lp - lm).abs() < 1e-8 * lp.abs().max(1.0), "{lp} vs {lm}");

        let triple = psi_minus_triple(&psi, &vol).unwrap();
        prop_assert!(max_diff(&minus, &triple) < 1e-10);
    }

    #[test]
    fn jets_match_finite_differences(
        a in -2.0f64..2.0,
        b in -1.0f64..1.0,
        c in 0.5f64..3.0,
        t in -1.0f64..1.0,
    ) {
        let src = format!("{a}*exp({b}*t) + sqrt({c} + t^2)/(1 + t^2) - t^3*{b}");
        let e = Expr::parse(&src).unwrap();
        let none = BTreeMap::new();
        let jet = e.eval_jet(t, &none).unwrap();
        let h = 1e-5;
        let fd = (e.eval(t + h, &none).unwrap() - e.eval(t - h, &none).unwrap()) / (2.0 * h);
        prop_assert!((jet.deriv() - fd).abs() < 1e-6, "{} vs {fd}", jet.deriv());
        prop_assert!((jet.value() - e.eval(t, &none).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn exact_arithmetic_agrees_with_floats(
        a in (-50i64..50, 1i64..20),
        b in (-50i64..50, 1i64..20),
    ) {
        let x = ExactScalar::ratio(a.0, a.1);
        let y = ExactScalar::ratio(b.0, b.1);
        let (fx, fy) = (a.0 as f64 / a.1 as f64, b.0 as f64 / b.1 as f64);
        prop_assert!(((x.clone() + y.clone()).to_f64() - (fx + fy)).abs() < 1e-12);
        prop_assert!(((x.clone() * y.clone()).to_f64() - fx * fy).abs() < 1e-12);
        if !y.is_zero() {
            prop_assert!((x.checked_div(&y).unwrap().to_f64() - fx / fy).abs() < 1e-9);
        }
    }

    #[test]
    fn wedge_contraction_pullback(
        ca in prop::collection::vec(-3i64..=3, 15),
        cb in prop::collection::vec(-3i64..=3, 20),
        v in prop::collection::vec(-3i64..=3, 6),
        m in prop::collection::vec(-2i64..=2, 36),
    ) {
        let a = exact_form(2, &ca);
        let b = exact_form(3, &cb);
        // graded commutativity with |a||b| = 6
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        let v = Vector::from_fn(|i| ExactScalar::integer(v[i - 1]));
        let lhs = a.wedge(&b).unwrap().contract(&v).unwrap();
        let rhs = a.contract(&v).unwrap().wedge(&b).unwrap().add(&a.wedge(&b.contract(&v).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let m = exact_endo(&m);
        prop_assert_eq!(
            a.wedge(&b).unwrap().pullback(&m).unwrap(),
            a.pullback(&m).unwrap().wedge(&b.pullback(&m).unwrap()).unwrap()
        );
    }
}

