//! End-to-end acceptance run: one pass/fail line per criterion.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stableforms::cases::compare::poly;
use stableforms::cases::{self, boundary_lambda, CaseReport, *};
use stableforms::coframe::Coframe;
use stableforms::exterior::{invariant_forms, parse_form, Endo, Form, MultiIndex};
use stableforms::hitchin::{j_endo, lambda, psi_minus, psi_minus_triple, su3_check, CheckOptions, Classification, Orientation};
use stableforms::scalars::{DiffPoly, ExactScalar, Expr, Jet, Scalar};

const TRIALS: usize = 100;

type LambdaCheck<'a> = (&'a str, Box<dyn Fn() -> DiffPoly + 'a>, &'a str);
type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn report(id: &str) -> CaseReport {
    cases::reproduce(id).unwrap()
}

/// Required assertions by name; each must hold.
fn holds(r: &CaseReport, names: &[&str]) -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    for n in names {
        let a = r.get(n).unwrap_or_else(|| panic!("missing assertion {n}"));
        ok &= a.holds();
        let factor = a.factor.as_deref().map(|f| format!(" factor {f}")).unwrap_or_default();
        lines.push(format!("{n}: {:?}{factor}", a.status));
    }
    (ok, lines)
}

fn poly_form(src: &str) -> Form<DiffPoly> {
    parse_form(src, Some(3)).unwrap().to_poly().unwrap()
}

fn criterion_1() -> Outcome {
    let vol: Form<DiffPoly> = Form::volume(DiffPoly::one());
    let zero_p4 = [(stableforms::scalars::Symbol::new("p4"), DiffPoly::zero())];
    let family = parse_form(BOUNDARY_RHO, Some(3)).unwrap().to_poly().unwrap();
    let checks: Vec<LambdaCheck> = vec![
        ("b1 generic", Box::new(|| lambda(&poly_form(B1_GENERIC_PSI), &vol).unwrap()), "(p1*p4 - p2*p3)^2"),
        ("b1 (1,0)", Box::new(|| lambda(&poly_form(B1_ONEZERO_PSI), &vol).unwrap()), "(p1*p8 + p2*p7 - p3*p6 + p4*p5)^2"),
        (
            "c3, p4 = 0",
            Box::new(|| lambda(&poly_form(C3_PSI).substitute(&zero_p4), &vol).unwrap()),
            "-4*(p1^2*(p3^2 + p6^2) + (p2*p6 - p3*p5)^2)",
        ),
        (
            "boundary",
            Box::new(|| boundary_lambda(&family, &["c6", "c7", "c8", "c9"]).unwrap()),
            "(c18*c3 - c17*c4)^2",
        ),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (label, f, expected) in checks {
        let start = Instant::now();
        let got = f();
        let took = start.elapsed();
        let eq = got == poly(expected).unwrap();
        ok &= eq && took < Duration::from_secs(1);
        notes.push(format!("{label} {} in {:.0?}", if eq { "equal" } else { "differs" }, took));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let b1 = report("b1-diagonal");
    let c3 = report("c3");
    let a1 = report("a1");
    let (ok_b1, mut notes) = holds(&b1, &["b1-diagonal.closure"]);
    let (ok_c3, n) = holds(&c3, &["c3.closure"]);
    notes.extend(n);
    let (ok_a1, n) = holds(&a1, &["a1.closure"]);
    notes.extend(n);

    // forced vanishings appear as equations of their own
    let c3_sys = Coframe::preset("c3").unwrap().closure_system(&poly_form(C3_PSI)).unwrap().equations();
    let a1_sys = Coframe::preset("a1").unwrap().closure_system(&poly_form(A1_GENERIC_PSI)).unwrap().equations();
    let forced = c3_sys.contains(&poly("p4").unwrap())
        && ["p16", "p19", "p20"].iter().all(|p| a1_sys.contains(&poly(p).unwrap()));
    notes.push(format!("forced vanishings present: {forced}"));
    outcome(ok_b1 && ok_c3 && ok_a1 && forced, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let (ok_c3, mut notes) = holds(&report("c3"), &["c3.balanced", "c3.kahler"]);
    let (ok_b1, n) = holds(&report("b1-diagonal"), &["b1-diagonal.balanced", "b1-diagonal.kahler"]);
    notes.extend(n);
    outcome(ok_c3 && ok_b1, notes.join("; "))
}

fn criterion_4() -> Outcome {
    let cf = Coframe::preset("a1").unwrap();
    let omega = parse_form(A1_OMEGA, Some(2)).unwrap();
    let psi = parse_form(A1_PSI, Some(3)).unwrap();
    let opts = CheckOptions {
        orientation: Orientation::Negative,
        samples: cases::A1_SAMPLES.to_vec(),
        ..Default::default()
    };
    let start = Instant::now();
    let r = su3_check(&cf, &omega, &psi, &opts).unwrap();
    let took = start.elapsed();
    let verdict = r.verdict == Classification::BalancedNonkahler;
    let (ok, mut notes) = holds(&report("a1"), &["a1.verdict", "a1.residuals", "a1.non-kahler", "a1.metric"]);
    notes.push(format!("battery {:.0?}", took));
    outcome(verdict && ok && took < Duration::from_secs(5), notes.join("; "))
}

fn criterion_5() -> Outcome {
    let (ok, notes) =
        holds(&report("boundary"), &["boundary.invariant-dimension", "boundary.family", "boundary.parity"]);
    outcome(ok, notes.join("; "))
}

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(20_26)
}

fn random_exact_form(rng: &mut ChaCha8Rng, degree: usize) -> Form<ExactScalar> {
    let terms = MultiIndex::all_of_degree(degree).into_iter().map(|i| (i, ExactScalar::integer(rng.gen_range(-2..=2))));
    Form::from_terms(degree, terms).unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut rng = rng();
    let mut failures = Vec::new();
    let mut fail = |name: &str, ok: bool| {
        if !ok && !failures.contains(&name.to_string()) {
            failures.push(name.to_string());
        }
    };
    let exact_vol: Form<ExactScalar> = Form::volume(ExactScalar::one());
    let jet_vol: Form<Jet> = Form::volume(Jet::one());

    // d∘d = 0 on every preset, on random invariant forms
    let presets: Vec<Coframe> = Coframe::preset_names().iter().map(|n| Coframe::preset(n).unwrap()).collect();
    for trial in 0..TRIALS {
        let cf = &presets[trial % presets.len()];
        let degree = rng.gen_range(0..5);
        let mut a: Form<DiffPoly> = Form::zero(degree);
        for b in invariant_forms(cf.isotropy(), degree).unwrap() {
            let c = DiffPoly::symbol(&format!("p{}", rng.gen_range(1..4))).scale(&ExactScalar::integer(rng.gen_range(-3..=3)));
            a = a.add(&b.try_map(DiffPoly::from_exact).unwrap().scale(&c)).unwrap();
        }
        fail("d squared", cf.d(&cf.d(&a).unwrap()).unwrap().is_zero());
    }

    for _ in 0..TRIALS {
        let psi = random_exact_form(&mut rng, 3);
        let entries: Vec<i64> = (0..36).map(|_| rng.gen_range(-2..=2)).collect();
        let a = Endo::from_fn(|i, j| ExactScalar::integer(entries[(i - 1) * 6 + j - 1]));
        let det = a.determinant();
        let lam = lambda(&psi, &exact_vol).unwrap();
        fail("equivariance", lambda(&psi.pullback(&a).unwrap(), &exact_vol).unwrap() == det.clone() * det * lam.clone());
        let c = ExactScalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
        fail("homogeneity", lambda(&psi.scale(&c), &exact_vol).unwrap() == c.pow(4) * lam);
    }

    let flat = parse_form("e135 - e146 - e236 - e245", Some(3)).unwrap().eval_jet(0.0, &BTreeMap::new()).unwrap();
    for _ in 0..TRIALS {
        let entries: Vec<f64> = (0..36).map(|_| 0.3 * rng.gen_range(-1.0..1.0)).collect();
        let a = Endo::<Jet>::identity().add(&Endo::from_fn(|i, j| Jet::constant(entries[(i - 1) * 6 + j - 1])));
        let psi = flat.pullback(&a).unwrap();
        let j = j_endo(&psi, &jet_vol).unwrap();
        fail("J^2 = -1", j.compose(&j).add(&Endo::identity()).max_abs() < 1e-10);
        let minus = psi_minus(&psi, &jet_vol).unwrap();
        let (lp, lm) = (lambda(&psi, &jet_vol).unwrap().value(), lambda(&minus, &jet_vol).unwrap().value());
        fail("lambda(psi-)", (lp - lm).abs() < 1e-8 * lp.abs().max(1.0));
        let triple = psi_minus_triple(&psi, &jet_vol).unwrap();
        fail("one-slot vs triple-slot", minus.sub(&triple).unwrap().sup_norm() < 1e-10);
    }

    let none = BTreeMap::new();
    for _ in 0..TRIALS {
        let (a, b, c, t): (f64, f64, f64, f64) =
            (rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.5..3.0), rng.gen_range(-1.0..1.0));
        let e = Expr::parse(&format!("{a}*exp({b}*t) + sqrt({c} + t^2)/(1 + t^2)")).unwrap();
        let h = 1e-5;
        let fd = (e.eval(t + h, &none).unwrap() - e.eval(t - h, &none).unwrap()) / (2.0 * h);
        fail("jet derivative", (e.eval_jet(t, &none).unwrap().deriv() - fd).abs() < 1e-6);
    }

    let took = start.elapsed();
    let ok = failures.is_empty() && took < Duration::from_secs(30);
    let detail = if failures.is_empty() {
        format!("{TRIALS} trials per property in {took:.1?}")
    } else {
        format!("failed: {}", failures.join(", "))
    };
    outcome(ok, detail)
}

fn criterion_7() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_stableforms"))
            .args(["reproduce", "--all", "--json"])
            .output()
            .expect("binary runs")
    };
    let (first, second) = (run(), run());
    let exit_ok = first.status.code() == Some(0) && second.status.code() == Some(0);
    let same = first.stdout == second.stdout && !first.stdout.is_empty();
    outcome(exit_ok && same, format!("exit codes {:?}/{:?}, identical output: {same}", first.status.code(), second.status.code()))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("exact lambda identities", criterion_1),
        ("closure systems", criterion_2),
        ("balanced and Kahler conditions", criterion_3),
        ("explicit balanced non-Kahler solution", criterion_4),
        ("boundary analysis", criterion_5),
        ("structural property suites", criterion_6),
        ("CLI determinism", criterion_7),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!("criterion {} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}", if all { "PASS" } else { "FAIL" });
    if !all {
        std::process::exit(1);
    }
}
