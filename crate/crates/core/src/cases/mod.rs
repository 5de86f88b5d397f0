//! Reproduction drivers: each case bundles a coframe, ansätze and the
//! displayed identities they must satisfy, and reports every check.

mod boundary;
pub mod compare;
mod fixtures;

pub use boundary::{boundary_lambda, invariant_subspace, parity_limits, InvariantActionGenerator, Parity};
pub use fixtures::*;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coframe::Coframe;
use crate::error::{Error, Result};
use crate::exterior::{is_invariant, parse_form, Form, MultiIndex};
use crate::hitchin::{
    induced_metric, lambda, psi_minus, su3_check, CheckOptions, Classification, Orientation, Symbolic,
};
use crate::linalg::{in_linear_span, rank};
use crate::scalars::{DiffPoly, ExactScalar, Expr, Jet, Symbol};
use compare::{each_occurs, equivalent_with_derivatives, in_span_with_derivatives, poly, polys, show_system};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Holds exactly (or in the stated up-to-a-factor sense).
    Pass,
    /// Holds only after a constant factor the displayed identity omits.
    Proportional,
    Fail,
    /// Computed and recorded without a pass/fail claim.
    Reported,
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    #[serde(rename = "paper_anchor")]
    pub anchor: String,
    pub status: Status,
    pub computed: String,
    pub expected: String,
    pub factor: Option<String>,
    pub required: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Assertion {
    pub fn holds(&self) -> bool {
        matches!(self.status, Status::Pass | Status::Proportional)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub assertions: Vec<Assertion>,
}

impl CaseReport {
    /// Every required assertion holds.
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| !a.required || a.holds())
    }

    pub fn get(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

struct Builder {
    case: &'static str,
    assertions: Vec<Assertion>,
}

impl Builder {
    fn new(case: &'static str) -> Self {
        Builder { case, assertions: Vec::new() }
    }

    fn push(&mut self, name: &str, anchor: &str, status: Status, computed: String, expected: String) -> &mut Assertion {
        self.assertions.push(Assertion {
            name: format!("{}.{name}", self.case),
            anchor: anchor.into(),
            status,
            computed,
            expected,
            factor: None,
            required: true,
            note: None,
        });
        self.assertions.last_mut().expect("just pushed")
    }

    fn check(&mut self, name: &str, anchor: &str, ok: bool, computed: String, expected: String) -> &mut Assertion {
        self.push(name, anchor, if ok { Status::Pass } else { Status::Fail }, computed, expected)
    }

    /// Exact equality, or `Proportional` with the factor when only a
    /// constant multiple matches.
    fn identity(&mut self, name: &str, anchor: &str, computed: &DiffPoly, expected: &DiffPoly) -> &mut Assertion {
        let (status, factor) = if computed == expected {
            (Status::Pass, None)
        } else if let Some(c) = computed.proportionality(expected) {
            (Status::Proportional, Some(c.to_string()))
        } else {
            (Status::Fail, None)
        };
        let a = self.push(name, anchor, status, computed.display_factored(), expected.display_factored());
        a.factor = factor;
        a
    }

    /// Passes when `computed` is a nonzero constant multiple of `expected`;
    /// the factor is logged.
    fn multiple(&mut self, name: &str, anchor: &str, computed: &[DiffPoly], expected: &DiffPoly) -> &mut Assertion {
        let factors: Option<Vec<ExactScalar>> = if computed.is_empty() {
            None
        } else {
            computed.iter().map(|c| c.proportionality(expected)).collect()
        };
        let ok = factors.is_some();
        let a = self.check(name, anchor, ok, show_system(computed), format!("{expected} = 0"));
        a.factor = factors.map(|f| f.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
        a
    }

    /// Every displayed equation occurs among the computed ones and every
    /// computed one follows from the displayed ones and their derivatives.
    fn system(&mut self, name: &str, anchor: &str, computed: &[DiffPoly], displayed: &[DiffPoly]) -> Result<&mut Assertion> {
        let mut ok = each_occurs(computed, displayed);
        for c in computed {
            ok &= in_span_with_derivatives(displayed, c)?;
        }
        Ok(self.check(name, anchor, ok, show_system(computed), show_system(displayed)))
    }

    /// The two systems are equivalent once first derivatives are admitted.
    fn equivalent(&mut self, name: &str, anchor: &str, computed: &[DiffPoly], displayed: &[DiffPoly]) -> Result<&mut Assertion> {
        let ok = equivalent_with_derivatives(computed, displayed)?;
        Ok(self.check(name, anchor, ok, show_system(computed), show_system(displayed)))
    }

    fn finish(self) -> CaseReport {
        CaseReport { case: self.case.into(), assertions: self.assertions }
    }
}

fn poly_form(src: &str, degree: usize) -> Result<Form<DiffPoly>> {
    parse_form(src, Some(degree))?.to_poly()
}

fn zeros(names: &[&str]) -> Vec<(Symbol, DiffPoly)> {
    names.iter().map(|n| (Symbol::new(n), DiffPoly::zero())).collect()
}

fn subs(pairs: &[(&str, &str)]) -> Result<Vec<(Symbol, DiffPoly)>> {
    pairs.iter().map(|(n, v)| Ok((Symbol::new(n), poly(v)?))).collect()
}

fn coeff(f: &Form<DiffPoly>, idx: &[usize]) -> DiffPoly {
    let (sign, mi) = MultiIndex::from_indices(idx).expect("valid").expect("distinct");
    let c = f.coeff(mi);
    if sign < 0 {
        -c
    } else {
        c
    }
}

fn equations_of(f: &Form<DiffPoly>) -> Vec<DiffPoly> {
    crate::coframe::ClosureSystem::from_form(f).equations()
}

/// Run one case.
pub fn reproduce(case: &str) -> Result<CaseReport> {
    match case {
        "b1-generic" => b1_generic(),
        "b1-onezero" => b1_onezero(),
        "b1-diagonal" => b1_diagonal(),
        "c3" => c3(),
        "a1" => a1(),
        "boundary" => boundary(),
        other => Err(Error::UnknownCase(other.to_string())),
    }
}

/// Run every case concurrently; the result is in the fixed case order.
pub fn reproduce_all() -> Result<Vec<CaseReport>> {
    CASE_IDS.par_iter().map(|c| reproduce(c)).collect()
}

fn unit_volume() -> Form<DiffPoly> {
    Form::volume(DiffPoly::one())
}

fn b1_generic() -> Result<CaseReport> {
    let mut b = Builder::new("b1-generic");
    let lam = lambda(&poly_form(B1_GENERIC_PSI, 3)?, &unit_volume())?;
    b.identity("lambda", "lambda-generic", &lam, &poly("(p1*p4 - p2*p3)^2")?);
    Ok(b.finish())
}

fn b1_onezero() -> Result<CaseReport> {
    let mut b = Builder::new("b1-onezero");
    let lam = lambda(&poly_form(B1_ONEZERO_PSI, 3)?, &unit_volume())?;
    b.identity("lambda", "lambda-one-zero", &lam, &poly("(p1*p8 + p2*p7 - p3*p6 + p4*p5)^2")?);
    Ok(b.finish())
}

fn b1_diagonal() -> Result<CaseReport> {
    let mut b = Builder::new("b1-diagonal");
    let cf = Coframe::preset("b1-diagonal")?;
    let omega = poly_form(B1_DIAGONAL_OMEGA, 2)?;
    let psi = poly_form(B1_DIAGONAL_PSI, 3)?;
    let vol = unit_volume();

    let closure = cf.closure_system(&psi)?.equations();
    let displayed_closure = polys(&["p8' - p3", "p7' + p4", "p5 - p6", "p6'"])?;
    b.system("closure", "closure-diagonal", &closure, &displayed_closure)?;

    let d_omega = equations_of(&cf.d(&omega)?);
    b.equivalent("kahler", "kahler-diagonal", &d_omega, &polys(&["-h1/2 + h2'", "h2' + h3'", "h4", "h5"])?)?;

    let d_omega2 = equations_of(&cf.d(&omega.power(2)?)?);
    let balanced = poly("h1/2*(h3 - h2)")? - poly("h2*h3 - h4^2 - h5^2")?.derivative();
    b.multiple("balanced", "balanced-diagonal", &d_omega2, &balanced);

    // p6 = 0 together with p5 = p6 from closure
    let sub_p1 = zeros(&["p1", "p5", "p6"]);
    let psi_p1 = psi.substitute(&sub_p1);
    let sym = Symbolic::new(&psi_p1, &vol)?;
    b.identity("lambda.p1-zero", "lambda-p1-zero", &sym.lambda, &poly("-2*(p3*p8 - p4*p7)^2")?);
    let n = sym.psi_minus(&psi_p1)?.numerator;
    let q3 = coeff(&n, &[1, 3, 4]);
    // q3 = N/√(−λ) = ±p4/√2  ⟺  N² = p4²(−λ)/2
    let expected_sq = poly("p4^2/2")? * (-sym.lambda.clone());
    b.identity("q3.p1-zero", "q3-p1-zero", &(q3.clone() * q3), &expected_sq).note =
        Some("compares squares, covering both sign branches".into());
    // q4, q5, q8 sit on e136, e235, e236
    let q458: Vec<String> = [[1, 3, 6], [2, 3, 5], [2, 3, 6]].iter().map(|i| coeff(&n, i).display_factored()).collect();
    let a = b.push("q458.p1-zero", "q-vanishing-p1-zero", Status::Reported, q458.join(", "), "0, 0, 0".into());
    a.required = false;
    a.note = Some("scaled numerators; q5 vanishes, q4 and q8 carry the factor p3*p8 - p4*p7".into());
    let psi_p7 = psi.substitute(&zeros(&["p4", "p5", "p6", "p7"]));
    let lam_p7 = lambda(&psi_p7, &vol)?;
    b.identity("lambda.p7-zero", "lambda-p7-zero", &lam_p7, &poly("2*p8^2*(p1*p2 - p3^2)")?);

    metric_constraints(&mut b, &omega, &psi)?;
    forcing_chain(&mut b, &closure, &psi)?;
    Ok(b.finish())
}

const METRIC_EQS: [&str; 7] = [
    "p1*p6 + p2*p6 - 2*p3*p7 - p4*p8",
    "h2*(p3*p8 - p4*p7) + h4*(p4*p6 - p1*p8) + 2*h5*(p1*p7 - p3*p6)",
    "h3*(p3*p8 - p4*p7) + h4*(p4*p6 - p2*p8) + 2*h5*(p2*p7 - p3*p6)",
    "h5*(p4*p6 - p1*p8)",
    "h5*(p2*p8 - p4*p6)",
    "h2*(p2*p6 - p1*p6) + 2*h4*(p1*p7 - p3*p6)",
    "h3*(p2*p6 - p1*p6) + 2*h4*(p3*p6 - p2*p7)",
];

/// Numerators of the metric entries that must vanish (or agree) for the
/// metric to have the block shape forced by the isotropy, with `p5 = p6`.
fn metric_constraints(b: &mut Builder, omega: &Form<DiffPoly>, psi: &Form<DiffPoly>) -> Result<()> {
    let psi = psi.substitute(&subs(&[("p5", "p6")])?);
    let g = Symbolic::new(&psi, &unit_volume())?.metric(omega)?.numerator;
    let mut raw = Vec::new();
    for i in 2..=6 {
        raw.push(g.get(1, i).clone());
        raw.push(g.get(i, 1).clone());
    }
    for i in 3..=6 {
        raw.push(g.get(2, i).clone());
        raw.push(g.get(i, 2).clone());
    }
    raw.push(g.get(3, 3).clone() - g.get(5, 5).clone());
    raw.push(g.get(3, 5).clone());
    raw.push(g.get(5, 3).clone());
    raw.push(g.get(4, 4).clone() - g.get(6, 6).clone());
    raw.push(g.get(4, 6).clone());
    raw.push(g.get(6, 4).clone());
    let mut computed: Vec<DiffPoly> = Vec::new();
    for p in raw.into_iter().filter(|p| !p.is_zero()).map(|p| strip_variable_factors(&p).normalized()) {
        if !computed.contains(&p) {
            computed.push(p);
        }
    }
    let displayed = polys(&METRIC_EQS)?;
    let mut reproduced = Vec::new();
    for (i, p) in displayed.iter().enumerate() {
        if in_linear_span(&computed, p)? {
            reproduced.push(i + 1);
        }
    }
    let mut implied = true;
    for c in &computed {
        implied &= in_linear_span(&displayed, c)?;
    }
    let a = b.push(
        "metric-shape",
        "metric-shape-diagonal",
        Status::Reported,
        show_system(&computed),
        show_system(&displayed),
    );
    a.required = false;
    a.note = Some(format!(
        "displayed equations reproduced: {reproduced:?} of 7; computed numerators implied by the displayed ones: {implied}"
    ));
    Ok(())
}

/// Divide out every variable that divides the whole polynomial.
fn strip_variable_factors(p: &DiffPoly) -> DiffPoly {
    let mut p = p.clone();
    for v in p.variables() {
        let x = DiffPoly::var(v);
        while let Some(q) = p.div_exact(&x) {
            if q.as_constant().is_some() {
                break;
            }
            p = q;
        }
    }
    p
}

/// `h5 ≠ 0, p6 = 1, p8 = 0` forces `p3 = p4 = 0, p1 = −p2`, and then `λ`,
/// `q5`, `q6` take the displayed values.
fn forcing_chain(b: &mut Builder, closure: &[DiffPoly], psi: &Form<DiffPoly>) -> Result<()> {
    let p8_zero = zeros(&["p8"]);
    let forced: Vec<DiffPoly> = closure.iter().map(|e| e.substitute_all(&p8_zero).normalized()).collect();
    let p3 = poly("p3")?;
    b.check("forcing.p3", "forcing-p3", forced.contains(&p3), show_system(&forced), "p3 = 0".into());

    let eq4 = poly(METRIC_EQS[3])?.substitute_all(&subs(&[("p6", "1"), ("p8", "0")])?);
    let target = poly("h5*p4")?;
    b.check(
        "forcing.p4",
        "forcing-p4",
        eq4.proportionality(&target).is_some(),
        format!("{eq4} = 0"),
        "h5*p4 = 0 with h5 != 0".into(),
    )
    .note = Some("uses the displayed metric equations".into());

    let eq1 = poly(METRIC_EQS[0])?.substitute_all(&subs(&[("p6", "1"), ("p8", "0"), ("p3", "0"), ("p4", "0")])?);
    b.check(
        "forcing.p1",
        "forcing-p1",
        eq1.proportionality(&poly("p1 + p2")?).is_some(),
        format!("{eq1} = 0"),
        "p1 + p2 = 0".into(),
    )
    .note = Some("uses the displayed metric equations".into());

    let chain = subs(&[("p5", "1"), ("p6", "1"), ("p8", "0"), ("p3", "0"), ("p4", "0"), ("p1", "-p2")])?;
    let psi = psi.substitute(&chain);
    let sym = Symbolic::new(&psi, &unit_volume())?;
    b.identity("lambda.forced", "lambda-forced", &sym.lambda, &poly("-4*p2^2*(p7^2 - 1)")?);
    let n = sym.psi_minus(&psi)?.numerator;
    let q5 = coeff(&n, &[2, 3, 5]);
    let q6 = coeff(&n, &[2, 4, 6]);
    b.identity("q5.forced", "q5-forced", &q5, &poly("-2*(p7^2 - 1)*p2")?);
    b.identity("q6.forced", "q6-forced", &q6, &(-q5));
    Ok(())
}

fn c3() -> Result<CaseReport> {
    let mut b = Builder::new("c3");
    let cf = Coframe::preset("c3")?;
    let omega = poly_form(C3_OMEGA, 2)?;
    let psi = poly_form(C3_PSI, 3)?;
    let vol = unit_volume();

    let closure = cf.closure_system(&psi)?.equations();
    let displayed = polys(&["p6' - 2*sqrt(3)*p2", "p3' + 2*sqrt(3)*p5", "p4", "p4'"])?;
    b.system("closure", "closure-c3", &closure, &displayed)?;

    let psi4 = psi.substitute(&zeros(&["p4"]));
    let sym = Symbolic::new(&psi4, &vol)?;
    b.identity("lambda", "lambda-c3", &sym.lambda, &poly("-4*(p1^2*(p3^2 + p6^2) + (p2*p6 - p3*p5)^2)")?);
    let n = sym.psi_minus(&psi4)?.numerator;
    let q4 = coeff(&n, &[2, 3, 6]);
    b.identity("q4", "q4-c3", &q4, &poly("2*(p3^2 + p6^2)*p1")?);
    let q4_p1 = q4.substitute_all(&zeros(&["p1"]));
    b.check("q4.p1-zero", "q4-c3", q4_p1.is_zero(), q4_p1.to_string(), "0".into());

    let d_omega2 = equations_of(&cf.d(&omega.power(2)?)?);
    let balanced = poly("2*sqrt(3)*h1*h2")? + poly("h2^2 + h3^2 + h4^2")?.derivative();
    b.multiple("balanced", "balanced-c3", &d_omega2, &balanced);

    let d_omega = equations_of(&cf.d(&omega)?);
    b.equivalent("kahler", "kahler-c3", &d_omega, &polys(&["h3", "h4", "sqrt(3)*h1 + h2'"])?)?;

    let compat = equations_of(&omega.wedge(&psi.substitute(&zeros(&["p1", "p4"])))?);
    let comp_displayed = polys(&["h3*p3 + h4*p6", "h3*p2 + h4*p5"])?;
    let mut ok = true;
    for p in &compat {
        ok &= in_linear_span(&comp_displayed, p)?;
    }
    for p in &comp_displayed {
        ok &= in_linear_span(&compat, p)?;
    }
    b.check("compatibility", "compatibility-c3", ok, show_system(&compat), show_system(&comp_displayed));

    normalization_samples(&mut b)?;

    // with h3 = h4 = 0 the balanced equation factors as h2 (√3 h1 + h2′)
    let reduced: Vec<DiffPoly> = d_omega2.iter().map(|e| e.substitute_all(&zeros(&["h3", "h4"]))).collect();
    let kahler = poly("sqrt(3)*h1 + h2'")?;
    let h2 = poly("h2")?;
    let quotients: Vec<DiffPoly> = reduced.iter().filter_map(|e| e.div_exact(&h2)).collect();
    let ok = !reduced.is_empty()
        && quotients.len() == reduced.len()
        && quotients.iter().all(|q| q.proportionality(&kahler).is_some());
    b.check(
        "balanced-forces-kahler",
        "balanced-implies-kahler",
        ok,
        show_system(&reduced),
        format!("h2*({kahler}) = 0"),
    );
    Ok(b.finish())
}

/// Random samples with `p1 = p4 = 0`, `h3 = h4 = 0` and `h1` fixed by the
/// displayed normalization; the 6-form identity must then hold.
fn normalization_samples(b: &mut Builder) -> Result<()> {
    let omega_src = parse_form(C3_OMEGA, Some(2))?;
    let psi_src = parse_form(C3_PSI, Some(3))?;
    let vol: Form<Jet> = Form::volume(Jet::constant(1.0));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let mut draw = || {
            let x: f64 = rng.gen_range(0.3..2.0);
            if rng.gen_bool(0.5) {
                x
            } else {
                -x
            }
        };
        let (p2, p3, p5, p6, h2) = (draw(), draw(), draw(), draw(), draw());
        let h1 = (p2 * p6 - p3 * p5).abs() / (h2 * h2);
        let params: BTreeMap<String, f64> = [
            ("p1", 0.0),
            ("p2", p2),
            ("p3", p3),
            ("p4", 0.0),
            ("p5", p5),
            ("p6", p6),
            ("h1", h1),
            ("h2", h2),
            ("h3", 0.0),
            ("h4", 0.0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        let om = omega_src.eval_jet(0.0, &params)?;
        let ps = psi_src.eval_jet(0.0, &params)?;
        let pm = psi_minus(&ps, &vol)?;
        let lhs = ps.wedge(&pm)?.coeff(MultiIndex::TOP).value().abs();
        let rhs = 2.0 / 3.0 * om.power(3)?.coeff(MultiIndex::TOP).value().abs();
        worst = worst.max((lhs - rhs).abs() / rhs.max(1.0));
    }
    b.check(
        "normalization",
        "normalization-c3",
        worst < 1e-9,
        format!("max relative residual {worst:.3e} over 20 samples"),
        "|p2*p6 - p3*p5| = h1*(h2^2 + h3^2 + h4^2)".into(),
    );
    Ok(())
}

pub const A1_SAMPLES: [f64; 7] = [-0.9, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9];

/// Conditions whose residual measures an equality.
const EQUALITIES: &[&str] = &[
    "compatibility-plus",
    "compatibility-minus",
    "normalization",
    "volume",
    "closed-psi-plus",
    "closed-psi-minus",
    "balanced",
    "metric-symmetric",
];

fn a1() -> Result<CaseReport> {
    let mut b = Builder::new("a1");
    let cf = Coframe::preset("a1")?;
    let generic = poly_form(A1_GENERIC_PSI, 3)?;
    let closure = cf.closure_system(&generic)?.equations();
    let displayed = polys(&[
        "p11'",
        "p12' + 2*p8",
        "p13' + 2*p9",
        "p14' - 2*p6",
        "p15' - 2*p7",
        "p17' + 2*p3",
        "p18' + 2*p4",
        "p16",
        "p19",
        "p20",
    ])?;
    b.system("closure", "closure-a1", &closure, &displayed)?;

    let omega = parse_form(A1_OMEGA, Some(2))?;
    let psi = parse_form(A1_PSI, Some(3))?;
    let opts = CheckOptions {
        orientation: Orientation::Negative,
        samples: A1_SAMPLES.to_vec(),
        ..Default::default()
    };
    let report = su3_check(&cf, &omega, &psi, &opts)?;
    let verdicts: Vec<&str> = report.samples.iter().map(|s| s.verdict.as_str()).collect();
    b.check(
        "verdict",
        "explicit-solution",
        report.verdict == Classification::BalancedNonkahler,
        verdicts.join(", "),
        "balanced-nonkahler at every sample".into(),
    );
    let mut worst: f64 = 0.0;
    for s in &report.samples {
        for c in s.conditions.iter().filter(|c| EQUALITIES.contains(&c.condition.as_str())) {
            worst = worst.max(c.residual);
        }
    }
    b.check("residuals", "explicit-solution", worst < 1e-9, format!("{worst:.3e}"), "< 1e-9".into());

    let at_zero = report.samples.iter().find(|s| s.t == 0.0).and_then(|s| s.condition("non-kahler"));
    let dw = at_zero.map_or(0.0, |c| c.residual);
    b.check("non-kahler", "explicit-solution", dw > 0.1, format!("sup |d omega| = {dw:.6}"), "> 0.1 at t = 0".into());

    let signs: Vec<String> =
        report.samples.iter().map(|s| s.volume_sign.clone().unwrap_or_else(|| "none".into())).collect();
    let a = b.push("volume-sign", "volume", Status::Reported, signs.join(", "), "either sign".into());
    a.required = false;

    let mut metric_err: f64 = 0.0;
    let vol: Form<Jet> = Orientation::Negative.volume();
    let none = BTreeMap::new();
    for &t in &A1_SAMPLES {
        let g = induced_metric(&omega.eval_jet(t, &none)?, &psi.eval_jet(t, &none)?, &vol)?;
        for (i, row) in A1_METRIC.iter().enumerate() {
            for (j, src) in row.iter().enumerate() {
                let shown = Expr::parse(src)?.eval(t, &none)?;
                metric_err = metric_err.max((g.get(i + 1, j + 1).value() - shown).abs());
            }
        }
    }
    b.check(
        "metric",
        "explicit-metric",
        metric_err < 1e-9,
        format!("max entry deviation {metric_err:.3e}"),
        "displayed matrix within 1e-9".into(),
    );

    let fine: Vec<f64> = (0..21).map(|i| -0.9 + 0.09 * i as f64).collect();
    let refined = su3_check(&cf, &omega, &psi, &CheckOptions { samples: fine, ..opts })?;
    b.check(
        "verdict.refined",
        "explicit-solution",
        refined.verdict == report.verdict,
        refined.verdict.as_str().into(),
        report.verdict.as_str().into(),
    );
    Ok(b.finish())
}

fn boundary() -> Result<CaseReport> {
    let mut b = Builder::new("boundary");
    let gen = InvariantActionGenerator::phi_f1();
    let space = invariant_subspace(&gen, 3)?;
    b.check("invariant-dimension", "invariant-forms", space.len() == 8, space.len().to_string(), "8".into());
    let one = invariant_subspace(&gen, 1)?;
    b.check("invariant-dimension.1", "invariant-forms", one.len() == 2, one.len().to_string(), "2".into());

    // the displayed family: each member invariant, eight independent members
    let family = parse_form(BOUNDARY_RHO, Some(3))?.to_poly()?;
    let params = ["c3", "c4", "c6", "c7", "c8", "c9", "c17", "c18"];
    let mut members = Vec::new();
    for p in params {
        let only: Vec<(Symbol, DiffPoly)> = params
            .iter()
            .map(|q| (Symbol::new(q), if *q == p { DiffPoly::one() } else { DiffPoly::zero() }))
            .collect();
        members.push(family.substitute(&only).try_map(|c| {
            c.as_constant().ok_or_else(|| Error::Invalid(format!("non-constant coefficient {c}")))
        })?);
    }
    let mut invariant = true;
    for m in &members {
        invariant &= is_invariant(m, std::slice::from_ref(gen.matrix()))?;
    }
    let basis = MultiIndex::all_of_degree(3);
    let rows: Vec<Vec<ExactScalar>> = members.iter().map(|m| basis.iter().map(|i| m.coeff(*i)).collect()).collect();
    let r = rank(&rows)?;
    b.check(
        "family",
        "invariant-family",
        invariant && r == space.len(),
        format!("members invariant: {invariant}, rank {r}"),
        format!("invariant, rank {}", space.len()),
    );

    let cf = Coframe::preset("a1")?;
    let generic = poly_form(A1_GENERIC_PSI, 3)?;
    let forced_zero = zeros(&["p16", "p19", "p20"]);
    let sys: Vec<DiffPoly> = cf
        .closure_system(&generic)?
        .equations()
        .iter()
        .map(|e| e.substitute_all(&forced_zero))
        .filter(|e| !e.is_zero())
        .collect();
    let parity: BTreeMap<String, Parity> =
        ["p12", "p13", "p14", "p15"].iter().map(|s| (s.to_string(), Parity::Even)).collect();
    let limits = parity_limits(&sys, &parity)?;
    let shown: Vec<String> = limits.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
    let expected = ["p6", "p7", "p8", "p9"];
    let ok = limits.len() == 4 && expected.iter().all(|s| limits.get(*s).is_some_and(ExactScalar::is_zero));
    b.check("parity", "parity-limits", ok, shown.join(", "), "p6, p7, p8, p9 -> 0".into());

    let lam = boundary_lambda(&family, &["c6", "c7", "c8", "c9"])?;
    b.identity("lambda", "boundary-lambda", &lam, &poly("(c18*c3 - c17*c4)^2")?);
    let lam0 = boundary_lambda(&family, &["c6", "c7", "c8", "c9", "c17", "c18"])?;
    b.check("lambda.degenerate", "boundary-lambda", lam0.is_zero(), lam0.to_string(), "0".into());

    let full = parse_form(BOUNDARY_RHO_FULL, Some(3))?.to_poly()?;
    let lam_full = boundary_lambda(&full, &["c6", "c7", "c8", "c9"])?;
    let target = poly("(c18*c3 - c17*c4)^2")?;
    let a = b.push(
        "lambda.second-route",
        "boundary-lambda-second",
        Status::Reported,
        lam_full.display_factored(),
        target.display_factored(),
    );
    a.required = false;
    a.note = Some(if lam_full == target {
        "matches".into()
    } else {
        "differs; no further constraints are imposed".into()
    });
    Ok(b.finish())
}
