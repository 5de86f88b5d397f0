//! Reading forms from text.
//!
//! A form is an expression in which identifiers `e<digits>` stand for basis
//! monomials, e.g. `p1*e135 + exp(2*t)*(e236 + e245) - sqrt(3)*e12*e6`.
//! The expression must be linear in the basis monomials; products of basis
//! monomials are wedge products.

use std::collections::BTreeMap;

use super::form::Form;
use super::index::MultiIndex;
use crate::error::{Error, Result};
use crate::scalars::Expr;

type Linear = BTreeMap<MultiIndex, Expr>;

fn basis_ident(name: &str) -> Result<Option<(i32, MultiIndex)>> {
    let Some(digits) = name.strip_prefix('e') else {
        return Ok(None);
    };
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Ok(None);
    }
    let idx: Vec<usize> = digits.chars().map(|c| c as usize - '0' as usize).collect();
    match MultiIndex::from_indices(&idx)? {
        Some(found) => Ok(Some(found)),
        None => Err(Error::Invalid(format!("repeated index in basis monomial `{name}`"))),
    }
}

fn scalar_only(e: &Expr) -> Result<bool> {
    for id in e.identifiers() {
        if basis_ident(&id)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn signed(e: Expr, sign: i32) -> Expr {
    if sign < 0 {
        e.negated()
    } else {
        e
    }
}

fn combine(mut a: Linear, b: Linear, negate_b: bool) -> Linear {
    for (k, v) in b {
        let v = if negate_b { v.negated() } else { v };
        let merged = match a.remove(&k) {
            Some(old) => Expr::plus(old, v),
            None => v,
        };
        a.insert(k, merged);
    }
    a
}

fn linearize(e: &Expr) -> Result<Linear> {
    if scalar_only(e)? {
        return Ok([(MultiIndex::EMPTY, e.clone())].into());
    }
    Ok(match e {
        Expr::Ident(name) => {
            let (sign, mi) = basis_ident(name)?.expect("contains a basis monomial");
            [(mi, signed(Expr::integer(1), sign))].into()
        }
        Expr::Neg(a) => linearize(a)?.into_iter().map(|(k, v)| (k, v.negated())).collect(),
        Expr::Add(a, b) => combine(linearize(a)?, linearize(b)?, false),
        Expr::Sub(a, b) => combine(linearize(a)?, linearize(b)?, true),
        Expr::Mul(a, b) => {
            let (la, lb) = (linearize(a)?, linearize(b)?);
            let mut out = Linear::new();
            for (i, x) in &la {
                for (j, y) in &lb {
                    let s = i.wedge_sign(*j);
                    if s == 0 {
                        continue;
                    }
                    let term = signed(Expr::times(x.clone(), y.clone()), s);
                    out = combine(out, [(i.union(*j), term)].into(), false);
                }
            }
            out
        }
        Expr::Div(a, b) => {
            if !scalar_only(b)? {
                return Err(Error::Invalid("division by a form".into()));
            }
            linearize(a)?
                .into_iter()
                .map(|(k, v)| (k, Expr::Div(Box::new(v), b.clone())))
                .collect()
        }
        _ => {
            return Err(Error::Invalid(format!(
                "basis monomials may only appear linearly, found `{e}`"
            )))
        }
    })
}

/// Parse a form; `degree` is required when the text can be the zero form.
pub fn parse_form(src: &str, degree: Option<usize>) -> Result<Form<Expr>> {
    let e = Expr::parse(src)?;
    let lin = linearize(&e)?;
    let lin: Linear = lin.into_iter().filter(|(_, v)| !is_literal_zero(v)).collect();
    let degrees: Vec<usize> = lin.keys().map(|k| k.degree()).collect();
    let deg = match (degrees.first(), degree) {
        (Some(&d), _) => d,
        (None, Some(d)) => d,
        (None, None) => return Err(Error::Invalid("cannot infer the degree of an empty form".into())),
    };
    if let Some(&bad) = degrees.iter().find(|&&d| d != deg) {
        return Err(Error::DegreeMismatch { expected: deg, found: bad });
    }
    if let Some(expected) = degree {
        if expected != deg {
            return Err(Error::DegreeMismatch { expected, found: deg });
        }
    }
    Form::from_raw(deg, lin)
}

fn is_literal_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(q) if num_traits::Zero::is_zero(q))
}

/// Parse a JSON object mapping basis monomials to coefficient expressions
/// (strings or numbers), e.g. `{"e135": "p1", "e246": -1}`.
pub fn parse_form_json(src: &str, degree: Option<usize>) -> Result<Form<Expr>> {
    let v: serde_json::Value =
        serde_json::from_str(src).map_err(|e| Error::Invalid(format!("bad JSON form: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Error::Invalid("JSON form must be an object".into()))?;
    let mut parts = Vec::new();
    for (key, val) in obj {
        if basis_ident(key)?.is_none() {
            return Err(Error::Invalid(format!("`{key}` is not a basis monomial")));
        }
        let coeff = match val {
            serde_json::Value::String(s) => s.clone(),
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(Error::Invalid(format!("bad coefficient {other} for {key}"))),
        };
        parts.push(format!("({coeff})*{key}"));
    }
    if parts.is_empty() {
        return parse_form("0", degree);
    }
    parse_form(&parts.join(" + "), degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{DiffPoly, ExactScalar};

    #[test]
    fn linear_forms() {
        let f = parse_form("p1*e135 + p2*e146 - e214", None).unwrap();
        assert_eq!(f.degree(), 3);
        let err = parse_form("p1*e135 + e12", None);
        assert!(matches!(err, Err(Error::DegreeMismatch { .. })));
        let g = parse_form("e2*e1", None).unwrap().to_exact().unwrap();
        assert_eq!(g.to_string(), "-e12");
    }

    #[test]
    fn distributes_over_sums() {
        let f = parse_form("-sqrt(3)*(e23+e45)", Some(2)).unwrap().to_exact().unwrap();
        assert_eq!(f.to_string(), "-sqrt(3)*e23 - sqrt(3)*e45");
        let g = parse_form("h4*(e34+e56) - (e34 - e56)*h4", Some(2)).unwrap().to_poly().unwrap();
        assert_eq!(g.to_string(), "2*h4*e56");
        assert!(parse_form("exp(e12)", None).is_err());
        assert!(parse_form("e12/e3", None).is_err());
        assert!(parse_form("e11", None).is_err());
    }

    #[test]
    fn zero_forms_need_a_degree() {
        assert!(parse_form("0", None).is_err());
        assert!(parse_form("0", Some(2)).unwrap().to_exact().unwrap().is_zero());
        assert!(parse_form("e12 - e12", Some(2)).unwrap().to_poly().unwrap().is_zero());
    }

    #[test]
    fn json_maps() {
        let f = parse_form_json(r#"{"e135": "p1", "e246": -1}"#, Some(3)).unwrap().to_poly().unwrap();
        let c = f.coeff(MultiIndex::from_indices(&[2, 4, 6]).unwrap().unwrap().1);
        assert_eq!(c, DiffPoly::constant(ExactScalar::integer(-1)));
        assert!(parse_form_json(r#"{"x": 1}"#, None).is_err());
    }
}
