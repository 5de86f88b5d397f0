//! Invariant exterior calculus on a cohomogeneity-one coframe.
//!
//! The coframe is `e¹ = dt, e², …, e⁶` with constant-coefficient structure
//! equations `de^i`. Coefficients of invariant forms are functions of `t`, so
//! `d(f e^I) = f′ e¹ ∧ e^I + f d(e^I)`.
//!
//! When the principal isotropy is nontrivial the individual `e^i` need not be
//! invariant, and the displayed structure equations only describe `d` on the
//! invariant subcomplex. Such coframes list isotropy generators, encoded as
//! 2-forms (see [`skew_generator`]), and `d∘d = 0` is checked on invariant
//! forms of every degree instead of on the basis 1-forms.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::exterior::{invariant_forms, is_invariant, parse_form, skew_generator, Endo, Form, MultiIndex, DIM};
use crate::scalars::{DiffPoly, ExactScalar, Scalar};

/// Environment variable naming a directory of `<name>.toml` coframe files
/// that take precedence over the built-in presets.
pub const PRESETS_ENV: &str = "STABLEFORMS_PRESETS";

const BUILTIN: &[(&str, &str)] = &[
    ("a1", include_str!("../presets/a1.toml")),
    ("c3", include_str!("../presets/c3.toml")),
    ("b1-diagonal", include_str!("../presets/b1-diagonal.toml")),
    ("abelian", include_str!("../presets/abelian.toml")),
];

#[derive(Clone, Debug)]
pub struct Coframe {
    name: String,
    de: Vec<Form<ExactScalar>>,
    isotropy: Vec<Endo<ExactScalar>>,
    basis_d: BTreeMap<MultiIndex, Form<ExactScalar>>,
}

impl Coframe {
    /// Validate structure equations `de¹, …, de⁶` (all 2-forms) with trivial
    /// isotropy.
    pub fn new(name: &str, de: Vec<Form<ExactScalar>>) -> Result<Self> {
        Self::with_isotropy(name, de, Vec::new())
    }

    /// Validate structure equations together with isotropy generators acting
    /// on 1-forms.
    pub fn with_isotropy(
        name: &str,
        de: Vec<Form<ExactScalar>>,
        isotropy: Vec<Endo<ExactScalar>>,
    ) -> Result<Self> {
        if de.len() != DIM {
            return Err(Error::InvalidStructure(format!("expected 6 structure forms, got {}", de.len())));
        }
        for (i, f) in de.iter().enumerate() {
            if f.degree() != 2 {
                return Err(Error::InvalidStructure(format!("de{} must be a 2-form", i + 1)));
            }
        }
        if !de[0].is_zero() {
            return Err(Error::InvalidStructure("de1 must vanish since e1 = dt".into()));
        }
        // all radicands must agree so that every d lands in one field
        let mut radicand = 0;
        for f in &de {
            for (_, c) in f.terms() {
                match (radicand, c.radicand()) {
                    (_, 0) => {}
                    (0, m) => radicand = m,
                    (a, b) if a == b => {}
                    (a, b) => return Err(Error::MixedRadicand(a, b)),
                }
            }
        }
        let mut basis_d = BTreeMap::new();
        for mask in 0u8..64 {
            let idx = MultiIndex::from_mask(mask)?;
            basis_d.insert(idx, d_basis(&de, idx)?);
        }
        let cf = Coframe { name: name.to_string(), de, isotropy, basis_d };
        cf.check_jacobi()?;
        Ok(cf)
    }

    fn check_jacobi(&self) -> Result<()> {
        if self.isotropy.is_empty() {
            for i in 1..=DIM {
                let dd = self.d(&self.de[i - 1])?;
                if !dd.is_zero() {
                    return Err(Error::JacobiFailure { form: format!("e{i}"), residual: dd.to_string() });
                }
            }
            return Ok(());
        }
        for k in 1..DIM - 1 {
            for a in invariant_forms(&self.isotropy, k)? {
                let da = self.d(&a)?;
                if !is_invariant(&da, &self.isotropy)? {
                    return Err(Error::InvalidStructure(format!(
                        "d of the invariant form {a} is not invariant: {da}"
                    )));
                }
                let dda = self.d(&da)?;
                if !dda.is_zero() {
                    return Err(Error::JacobiFailure { form: a.to_string(), residual: dda.to_string() });
                }
            }
        }
        Ok(())
    }

    /// Read a coframe file:
    ///
    /// ```toml
    /// dim = 6
    /// dt = "e1"
    /// [d]
    /// e2 = "-2*e34"
    /// ```
    ///
    /// An optional `isotropy` array lists generators as 2-forms.
    pub fn from_toml(src: &str) -> Result<Self> {
        let table: toml::Table =
            toml::from_str(src).map_err(|e| Error::InvalidStructure(format!("bad coframe file: {e}")))?;
        let dim = table.get("dim").and_then(|v| v.as_integer()).unwrap_or(DIM as i64);
        if dim != DIM as i64 {
            return Err(Error::InvalidStructure(format!("dimension must be 6, got {dim}")));
        }
        let dt = table.get("dt").and_then(|v| v.as_str()).unwrap_or("e1");
        if dt != "e1" {
            return Err(Error::InvalidStructure(format!("dt must be e1, got {dt}")));
        }
        let name = table.get("name").and_then(|v| v.as_str()).unwrap_or("custom").to_string();
        let mut de = vec![Form::zero(2); DIM];
        if let Some(d) = table.get("d") {
            let d = d.as_table().ok_or_else(|| Error::InvalidStructure("[d] must be a table".into()))?;
            for (key, val) in d {
                let i = key
                    .strip_prefix('e')
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|i| (1..=DIM).contains(i))
                    .ok_or_else(|| Error::InvalidStructure(format!("unknown basis form `{key}`")))?;
                let text = val
                    .as_str()
                    .ok_or_else(|| Error::InvalidStructure(format!("d{key} must be a string")))?;
                de[i - 1] = parse_form(text, Some(2))?.to_exact()?;
            }
        }
        let mut isotropy = Vec::new();
        if let Some(list) = table.get("isotropy") {
            let list =
                list.as_array().ok_or_else(|| Error::InvalidStructure("isotropy must be an array".into()))?;
            for g in list {
                let text =
                    g.as_str().ok_or_else(|| Error::InvalidStructure("isotropy entries must be strings".into()))?;
                isotropy.push(skew_generator(&parse_form(text, Some(2))?.to_exact()?));
            }
        }
        Self::with_isotropy(&name, de, isotropy)
    }

    /// A named preset, looked up first in `$STABLEFORMS_PRESETS`.
    pub fn preset(name: &str) -> Result<Self> {
        if let Ok(dir) = std::env::var(PRESETS_ENV) {
            let path = PathBuf::from(dir).join(format!("{name}.toml"));
            if path.is_file() {
                let src = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                return Self::from_toml(&src);
            }
        }
        let src = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| *s)
            .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
        Self::from_toml(src)
    }

    pub fn preset_names() -> Vec<&'static str> {
        BUILTIN.iter().map(|(n, _)| *n).collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn isotropy(&self) -> &[Endo<ExactScalar>] {
        &self.isotropy
    }

    /// `de^i`, 1-based.
    pub fn structure(&self, i: usize) -> &Form<ExactScalar> {
        &self.de[i - 1]
    }

    /// `d(e^I)` for a basis monomial.
    pub fn d_of_basis(&self, idx: MultiIndex) -> &Form<ExactScalar> {
        &self.basis_d[&idx]
    }

    /// The structure equations as text, one per basis form.
    pub fn structure_equations(&self) -> Vec<String> {
        self.de.iter().enumerate().map(|(i, f)| format!("de{} = {}", i + 1, f)).collect()
    }

    /// Exterior derivative of an invariant form.
    pub fn d<S: Scalar>(&self, a: &Form<S>) -> Result<Form<S>> {
        if a.degree() == DIM {
            return Ok(Form::zero(DIM));
        }
        let dt = Form::<S>::basis(MultiIndex::single(1));
        let mut out = Form::zero(a.degree() + 1);
        for (idx, c) in a.terms() {
            let dc = c.derivative()?;
            if !dc.is_zero() {
                out = out.add(&dt.wedge(&Form::term(dc, *idx))?)?;
            }
            let db = self.d_of_basis(*idx);
            if !db.is_zero() {
                let db: Form<S> = db.try_map(S::from_exact)?;
                out = out.add(&db.scale(c))?;
            }
        }
        Ok(out)
    }

    /// The coefficient equations of `dα = 0`.
    pub fn closure_system(&self, a: &Form<DiffPoly>) -> Result<ClosureSystem> {
        let da = self.d(a)?;
        Ok(ClosureSystem::from_form(&da))
    }
}

fn d_basis(de: &[Form<ExactScalar>], idx: MultiIndex) -> Result<Form<ExactScalar>> {
    let indices = idx.indices();
    let deg = indices.len();
    let mut out = Form::zero((deg + 1).min(DIM));
    if deg == 0 || deg == DIM {
        return Ok(Form::zero(if deg == 0 { 1 } else { DIM }));
    }
    for (pos, &i) in indices.iter().enumerate() {
        let mut term = Form::term(ExactScalar::one(), MultiIndex::EMPTY);
        for (q, &j) in indices.iter().enumerate() {
            let factor = if q == pos { de[i - 1].clone() } else { Form::basis(MultiIndex::single(j)) };
            term = term.wedge(&factor)?;
        }
        out = if pos % 2 == 0 { out.add(&term)? } else { out.sub(&term)? };
    }
    Ok(out)
}

/// The coefficients of `dα`, one equation `= 0` per basis form, each
/// normalized (rational content removed, positive leading coefficient).
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureSystem {
    entries: Vec<(MultiIndex, DiffPoly)>,
}

impl ClosureSystem {
    pub fn from_form(f: &Form<DiffPoly>) -> Self {
        ClosureSystem { entries: f.terms().map(|(k, c)| (*k, c.normalized())).collect() }
    }

    pub fn entries(&self) -> &[(MultiIndex, DiffPoly)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct normalized equations in basis order.
    pub fn equations(&self) -> Vec<DiffPoly> {
        let mut out: Vec<DiffPoly> = Vec::new();
        for (_, p) in &self.entries {
            if !out.contains(p) {
                out.push(p.clone());
            }
        }
        out
    }
}

impl fmt::Display for ClosureSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.equations() {
            writeln!(f, "{p} = 0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Var;

    fn poly_form(src: &str, deg: usize) -> Form<DiffPoly> {
        parse_form(src, Some(deg)).unwrap().to_poly().unwrap()
    }

    #[test]
    fn presets_are_valid() {
        for name in Coframe::preset_names() {
            Coframe::preset(name).unwrap();
        }
        assert!(matches!(Coframe::preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn tampered_structure_fails_jacobi() {
        let src = include_str!("../presets/a1.toml").replace("2*e24", "2*e25");
        assert!(matches!(Coframe::from_toml(&src), Err(Error::JacobiFailure { form, .. }) if form == "e2"));
        let bad = "dim = 6\n[d]\ne1 = \"e23\"\n";
        assert!(matches!(Coframe::from_toml(bad), Err(Error::InvalidStructure(_))));
    }

    #[test]
    fn a1_derivatives() {
        let cf = Coframe::preset("a1").unwrap();
        let f = DiffPoly::symbol("f");
        let fp = DiffPoly::var(Var::new("f", 1));
        let e2 = Form::term(f.clone(), MultiIndex::single(2));
        let expected = poly_form("f'*e12 - 2*f*e34", 2);
        assert_eq!(cf.d(&e2).unwrap(), expected);
        let e34 = Form::from_indices(f, &[3, 4]).unwrap();
        assert_eq!(cf.d(&e34).unwrap(), Form::from_indices(fp, &[1, 3, 4]).unwrap());
        assert!(cf.d(&cf.d(&e2).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn c3_closure_system() {
        let cf = Coframe::preset("c3").unwrap();
        let psi = poly_form(
            "p1*(e123+e145) + p2*(e124-e135) + p3*(e246-e356) + p4*(e236+e456) + p5*(e125+e134) + p6*(e256+e346)",
            3,
        );
        let sys = cf.closure_system(&psi).unwrap();
        let text: Vec<String> = sys.equations().iter().map(|p| p.to_string()).collect();
        assert!(text.contains(&"p4".to_string()), "{text:?}");
        assert!(text.contains(&"p4'".to_string()), "{text:?}");
        assert_eq!(sys.equations().len(), 4);
    }

    #[test]
    fn isotropy_restricts_the_jacobi_check() {
        // the displayed equations fail d^2 = 0 on the non-invariant e2
        let strip = |src: &str| src.lines().filter(|l| !l.starts_with("isotropy")).collect::<Vec<_>>().join("\n");
        let bare = Coframe::from_toml(&strip(include_str!("../presets/c3.toml")));
        assert!(matches!(bare, Err(Error::JacobiFailure { .. })), "{bare:?}");
        let b1 = Coframe::from_toml(&strip(include_str!("../presets/b1-diagonal.toml")));
        assert!(matches!(b1, Err(Error::JacobiFailure { .. })), "{b1:?}");
        let b1 = Coframe::preset("b1-diagonal").unwrap();
        let b1_psi = parse_form(
            "e135 + e146 + e134+e156 + e136+e145 + e235 + e246 + e234+e256 + e236+e245",
            Some(3),
        )
        .unwrap()
        .to_exact()
        .unwrap();
        assert!(is_invariant(&b1_psi, b1.isotropy()).unwrap());
        let cf = Coframe::preset("c3").unwrap();
        let psi = parse_form("e123+e145 + e124-e135 + e246-e356 + e236+e456 + e125+e134 + e256+e346", Some(3))
            .unwrap()
            .to_exact()
            .unwrap();
        let omega = parse_form("e16 + e23+e45 + e24-e35 + e25+e34", Some(2)).unwrap().to_exact().unwrap();
        assert!(is_invariant(&psi, cf.isotropy()).unwrap());
        assert!(is_invariant(&omega, cf.isotropy()).unwrap());
        assert!(!is_invariant(&Form::<ExactScalar>::basis(MultiIndex::single(2)), cf.isotropy()).unwrap());
    }

    #[test]
    fn constant_forms_on_abelian_are_closed() {
        let cf = Coframe::preset("abelian").unwrap();
        let psi = poly_form("e135 - e146 - e236 - e245", 3);
        assert!(cf.closure_system(&psi).unwrap().is_empty());
    }
}
