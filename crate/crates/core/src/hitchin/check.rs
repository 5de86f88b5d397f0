//! The SU(3)-structure condition battery.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{first_slot, j_endo, k_matrix, metric_of, Symbolic};
use crate::coframe::{ClosureSystem, Coframe};
use crate::error::Result;
use crate::exterior::{Endo, Form, MultiIndex, DIM};
use crate::scalars::{DiffPoly, Expr, Jet, Scalar};

/// Sign of the reference volume form `Ω = ±e^{1…6}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn volume<S: Scalar>(self) -> Form<S> {
        Form::volume(S::from_i64(self.sign()))
    }
}

impl std::str::FromStr for Orientation {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "+1" | "1" | "positive" => Ok(Orientation::Positive),
            "-" | "-1" | "negative" => Ok(Orientation::Negative),
            _ => Err(crate::error::Error::Invalid(format!("orientation must be + or -, got `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub orientation: Orientation,
    pub samples: Vec<f64>,
    pub params: BTreeMap<String, f64>,
    /// Residual tolerance for equalities.
    pub tol: f64,
    /// Threshold above which a quantity counts as nonzero.
    pub nonzero_tol: f64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            orientation: Orientation::Positive,
            samples: vec![0.0],
            params: BTreeMap::new(),
            tol: 1e-9,
            nonzero_tol: 1e-6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub condition: String,
    pub verdict: Verdict,
    pub residual: f64,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    NotSu3,
    Su3NotBalanced,
    BalancedKahler,
    BalancedNonkahler,
    Indeterminate,
    Mixed,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::NotSu3 => "not-su3",
            Classification::Su3NotBalanced => "su3-not-balanced",
            Classification::BalancedKahler => "balanced-kahler",
            Classification::BalancedNonkahler => "balanced-nonkahler",
            Classification::Indeterminate => "indeterminate",
            Classification::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleReport {
    pub t: f64,
    pub conditions: Vec<Condition>,
    pub verdict: Classification,
    /// Which sign makes `(1/6)ω³ = ±√det(g) e^{1…6}` hold, if either does.
    pub volume_sign: Option<String>,
}

impl SampleReport {
    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.condition == name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SU3Report {
    pub samples: Vec<SampleReport>,
    pub verdict: Classification,
}

/// A condition as a polynomial system in the parameters and their
/// derivatives, valid under `λ < 0`.
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicCondition {
    pub condition: String,
    pub equations: Vec<String>,
    pub detail: String,
}

/// Conditions forming an SU(3)-structure.
const STRUCTURE: &[&str] = &[
    "stability-omega",
    "stability-psi",
    "compatibility-plus",
    "compatibility-minus",
    "normalization",
    "volume",
    "metric-symmetric",
    "metric-positive",
];
const BALANCED: &[&str] = &["closed-psi-plus", "closed-psi-minus", "balanced"];

/// Run every condition at each sample point of `t`.
pub fn su3_check(cf: &Coframe, omega: &Form<Expr>, psi: &Form<Expr>, opts: &CheckOptions) -> Result<SU3Report> {
    let samples: Vec<SampleReport> =
        opts.samples.par_iter().map(|&t| check_at(cf, omega, psi, t, opts)).collect::<Result<_>>()?;
    let first = samples.first().map_or(Classification::Indeterminate, |s| s.verdict);
    let verdict = if samples.iter().all(|s| s.verdict == first) { first } else { Classification::Mixed };
    Ok(SU3Report { samples, verdict })
}

fn equality(name: &str, residual: f64, tol: f64, detail: String) -> Condition {
    let verdict = if residual < tol { Verdict::Pass } else { Verdict::Fail };
    Condition { condition: name.into(), verdict, residual, detail }
}

fn check_at(cf: &Coframe, omega: &Form<Expr>, psi: &Form<Expr>, t: f64, opts: &CheckOptions) -> Result<SampleReport> {
    let tol = opts.tol;
    let vol: Form<Jet> = opts.orientation.volume();
    let om = omega.eval_jet(t, &opts.params)?;
    let ps = psi.eval_jet(t, &opts.params)?;
    let mut conds = Vec::new();

    let w3 = om.power(3)?.coeff(MultiIndex::TOP).value();
    conds.push(Condition {
        condition: "stability-omega".into(),
        verdict: if w3.abs() > opts.nonzero_tol { Verdict::Pass } else { Verdict::Fail },
        residual: w3.abs(),
        detail: format!("omega^3 = {w3:e} e123456"),
    });
    let k = k_matrix(&ps, &vol)?;
    let lam = (k.compose(&k).trace() * Jet::from_ratio(1, 6)).value();
    let stable = lam < -opts.nonzero_tol;
    conds.push(Condition {
        condition: "stability-psi".into(),
        verdict: if stable { Verdict::Pass } else { Verdict::Fail },
        residual: lam,
        detail: format!("lambda = {lam:e}"),
    });
    conds.push(equality("compatibility-plus", om.wedge(&ps)?.sup_norm(), tol, "omega ^ psi+".into()));
    if !stable {
        return Ok(SampleReport { t, conditions: conds, verdict: Classification::NotSu3, volume_sign: None });
    }

    let j = j_endo(&ps, &vol)?;
    let pm = first_slot(&ps, &j)?.neg();
    conds.push(equality("compatibility-minus", om.wedge(&pm)?.sup_norm(), tol, "omega ^ psi-".into()));
    let pp = ps.wedge(&pm)?.coeff(MultiIndex::TOP).value();
    conds.push(equality(
        "normalization",
        (pp - 2.0 / 3.0 * w3).abs(),
        tol,
        format!("psi+ ^ psi- = {pp:e}, (2/3) omega^3 = {:e}", 2.0 / 3.0 * w3),
    ));

    let g = metric_of(&om, &j)?;
    let gv = g.values();
    let asym = (0..DIM)
        .flat_map(|i| (0..DIM).map(move |j| (i, j)))
        .map(|(i, j)| (gv[i][j] - gv[j][i]).abs())
        .fold(0.0, f64::max);
    let det = g.determinant().value();
    let root = det.max(0.0).sqrt();
    let (plus, minus) = ((w3 / 6.0 - root).abs(), (w3 / 6.0 + root).abs());
    let volume_sign = if det <= 0.0 {
        None
    } else if plus < tol {
        Some("+".to_string())
    } else if minus < tol {
        Some("-".to_string())
    } else {
        None
    };
    conds.push(equality(
        "volume",
        if det > 0.0 { plus.min(minus) } else { f64::INFINITY },
        tol,
        format!("omega^3/6 = {:e}, sqrt(det g) = {root:e}, sign {}", w3 / 6.0, volume_sign.as_deref().unwrap_or("none")),
    ));

    conds.push(equality("closed-psi-plus", cf.d(&ps)?.sup_norm(), tol, "d psi+".into()));
    conds.push(equality("closed-psi-minus", cf.d(&pm)?.sup_norm(), tol, "d psi-".into()));
    conds.push(equality("balanced", cf.d(&om.power(2)?)?.sup_norm(), tol, "d (omega^2)".into()));
    let dw = cf.d(&om)?.sup_norm();
    conds.push(Condition {
        condition: "non-kahler".into(),
        verdict: if dw > opts.nonzero_tol {
            Verdict::Pass
        } else if dw < tol {
            Verdict::Fail
        } else {
            Verdict::Indeterminate
        },
        residual: dw,
        detail: format!("sup |d omega| = {dw:e}"),
    });
    conds.push(equality("metric-symmetric", asym, tol, "max |g_ij - g_ji|".into()));
    let minors = leading_minors(&g);
    let min_minor = minors.iter().copied().fold(f64::INFINITY, f64::min);
    conds.push(Condition {
        condition: "metric-positive".into(),
        verdict: if min_minor > tol { Verdict::Pass } else { Verdict::Fail },
        residual: min_minor,
        detail: format!("leading principal minors {minors:?}"),
    });

    let verdict = classify(&conds);
    Ok(SampleReport { t, conditions: conds, verdict, volume_sign })
}

fn leading_minors(g: &Endo<Jet>) -> Vec<f64> {
    (1..=DIM)
        .map(|n| {
            let idx: Vec<usize> = (1..=n).collect();
            g.minor(&idx, &idx).value()
        })
        .collect()
}

fn classify(conds: &[Condition]) -> Classification {
    let verdict = |name: &str| conds.iter().find(|c| c.condition == name).map(|c| c.verdict);
    let all_pass = |names: &[&str]| names.iter().all(|n| verdict(n) == Some(Verdict::Pass));
    if !all_pass(STRUCTURE) {
        return Classification::NotSu3;
    }
    if !all_pass(BALANCED) {
        return Classification::Su3NotBalanced;
    }
    match verdict("non-kahler") {
        Some(Verdict::Pass) => Classification::BalancedNonkahler,
        Some(Verdict::Fail) => Classification::BalancedKahler,
        _ => Classification::Indeterminate,
    }
}

/// The conditions as polynomial systems, with `ψ₋` and `g` written over
/// powers of `√(−λ)` and the scale cleared.
pub fn su3_system(
    cf: &Coframe,
    omega: &Form<DiffPoly>,
    psi: &Form<DiffPoly>,
    orientation: Orientation,
) -> Result<Vec<SymbolicCondition>> {
    let vol: Form<DiffPoly> = orientation.volume();
    let sym = Symbolic::new(psi, &vol)?;
    let neg_lambda = -sym.lambda.clone();
    let n1 = sym.psi_minus(psi)?.numerator;
    let w3 = omega.power(3)?.coeff(MultiIndex::TOP);
    let form_eqs = |f: &Form<DiffPoly>| -> Vec<String> {
        ClosureSystem::from_form(f).equations().iter().map(|p| p.to_string()).collect()
    };
    let one = |p: DiffPoly| -> Vec<String> {
        if p.is_zero() {
            Vec::new()
        } else {
            vec![p.normalized().to_string()]
        }
    };
    let mut out = Vec::new();
    let mut push = |name: &str, equations: Vec<String>, detail: &str| {
        out.push(SymbolicCondition { condition: name.into(), equations, detail: detail.into() })
    };
    push("stability-omega", vec![w3.to_string()], "must be nonzero");
    push("stability-psi", vec![sym.lambda.to_string()], "lambda, must be negative");
    push("compatibility-plus", form_eqs(&omega.wedge(psi)?), "");
    push("compatibility-minus", form_eqs(&omega.wedge(&n1)?), "numerator over sqrt(-lambda)");
    let pp = psi.wedge(&n1)?.coeff(MultiIndex::TOP);
    let norm = pp.clone() * pp - DiffPoly::from_ratio(4, 9) * neg_lambda.clone() * w3.clone() * w3;
    push("normalization", one(norm), "squared; psi+ ^ psi- and omega^3 must also share a sign");
    push("closed-psi-plus", form_eqs(&cf.d(psi)?), "");
    // d(N (−λ)^{−1/2}) = (−λ)^{−3/2} ((−λ) dN + λ′/2 e¹ ∧ N)
    let dt = Form::basis(MultiIndex::single(1));
    let dpm = cf.d(&n1)?.scale(&(DiffPoly::integer(2) * neg_lambda)).add(
        &dt.wedge(&n1)?.scale(&sym.lambda.derivative()),
    )?;
    push("closed-psi-minus", form_eqs(&dpm), "numerator over (-lambda)^(3/2)");
    push("balanced", form_eqs(&cf.d(&omega.power(2)?)?), "");
    push("kahler", form_eqs(&cf.d(omega)?), "non-Kahler needs one of these nonzero");
    let g = sym.metric(omega)?.numerator;
    let mut asym = Vec::new();
    for i in 1..=DIM {
        for j in i + 1..=DIM {
            let d = g.get(i, j).clone() - g.get(j, i).clone();
            if !d.is_zero() {
                let s = d.normalized().to_string();
                if !asym.contains(&s) {
                    asym.push(s);
                }
            }
        }
    }
    push("metric-symmetric", asym, "numerator over sqrt(-lambda)");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::parse_form;

    #[test]
    fn flat_pair_on_abelian_coframe_is_kahler() {
        let cf = Coframe::preset("abelian").unwrap();
        let omega = parse_form("e12 + e34 + e56", Some(2)).unwrap();
        let psi = parse_form("e135 - e146 - e236 - e245", Some(3)).unwrap();
        let opts = CheckOptions { samples: vec![-0.5, 0.0, 0.5], ..Default::default() };
        let report = su3_check(&cf, &omega, &psi, &opts).unwrap();
        assert_eq!(report.verdict, Classification::BalancedKahler);
        let s = &report.samples[0];
        for c in &s.conditions {
            let expected = if c.condition == "non-kahler" { Verdict::Fail } else { Verdict::Pass };
            assert_eq!(c.verdict, expected, "{c:?}");
        }
        assert_eq!(s.volume_sign.as_deref(), Some("+"));
    }

    #[test]
    fn flat_pair_symbolic_system_is_trivial() {
        let cf = Coframe::preset("abelian").unwrap();
        let omega = parse_form("h*(e12 + e34 + e56)", Some(2)).unwrap().to_poly().unwrap();
        let psi = parse_form("e135 - e146 - e236 - e245", Some(3)).unwrap().to_poly().unwrap();
        let sys = su3_system(&cf, &omega, &psi, Orientation::Positive).unwrap();
        let get = |n: &str| sys.iter().find(|c| c.condition == n).unwrap().equations.clone();
        assert!(get("compatibility-plus").is_empty());
        assert!(get("metric-symmetric").is_empty());
        assert_eq!(get("balanced"), vec!["h*h'".to_string()]);
        // ψ∧ψ₋ = 4·4/... ; normalization pins h up to sign
        assert_eq!(get("normalization").len(), 1);
    }

    #[test]
    fn explicit_solution_is_balanced_nonkahler() {
        let cf = Coframe::preset("a1").unwrap();
        let omega = parse_form(
            "3/2*exp(4*t)/sqrt(9+3*exp(6*t))*e12 - 1/3*(-3+sqrt(9+3*exp(6*t)))*exp(-2*t)*e34 \
             + e35 + e36 + e46 - e45 + 2*exp(2*t)*e56",
            Some(2),
        )
        .unwrap();
        let psi = parse_form("e134 + e234 + exp(2*t)*(e136 + e235 + e246 - e145)", Some(3)).unwrap();
        let opts = CheckOptions {
            orientation: Orientation::Negative,
            samples: vec![-0.9, -0.5, 0.0, 0.5, 0.9],
            ..Default::default()
        };
        let report = su3_check(&cf, &omega, &psi, &opts).unwrap();
        for s in &report.samples {
            assert_eq!(s.verdict, Classification::BalancedNonkahler, "{s:#?}");
        }
    }

    #[test]
    fn degenerate_psi_is_not_su3() {
        let cf = Coframe::preset("abelian").unwrap();
        let omega = parse_form("e12 + e34 + e56", Some(2)).unwrap();
        let psi = parse_form("e123", Some(3)).unwrap();
        let report = su3_check(&cf, &omega, &psi, &CheckOptions::default()).unwrap();
        assert_eq!(report.verdict, Classification::NotSu3);
    }
}
