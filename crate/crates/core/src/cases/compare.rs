//! Comparing computed polynomials and systems with displayed ones.

use crate::error::Result;
use crate::linalg::in_linear_span;
use crate::scalars::{DiffPoly, ExactScalar, Expr};

pub fn poly(src: &str) -> Result<DiffPoly> {
    Expr::parse(src)?.to_diffpoly()
}

pub fn polys(srcs: &[&str]) -> Result<Vec<DiffPoly>> {
    srcs.iter().map(|s| poly(s)).collect()
}

pub fn show_system(eqs: &[DiffPoly]) -> String {
    if eqs.is_empty() {
        return "(empty)".into();
    }
    eqs.iter().map(|p| format!("{p} = 0")).collect::<Vec<_>>().join("; ")
}

/// Whether every displayed equation occurs, up to a constant factor, among
/// the computed ones.
pub fn each_occurs(computed: &[DiffPoly], displayed: &[DiffPoly]) -> bool {
    displayed.iter().all(|p| computed.iter().any(|c| c.proportionality(p).is_some()))
}

/// Whether `target` is a constant combination of `basis` and the first
/// derivatives of its members.
pub fn in_span_with_derivatives(basis: &[DiffPoly], target: &DiffPoly) -> Result<bool> {
    let mut all = basis.to_vec();
    all.extend(basis.iter().map(DiffPoly::derivative));
    all.retain(|p| !p.is_zero());
    in_linear_span(&all, target)
}

/// Two systems generate the same constant-coefficient span once first
/// derivatives are admitted on both sides.
pub fn equivalent_with_derivatives(a: &[DiffPoly], b: &[DiffPoly]) -> Result<bool> {
    for p in a {
        if !in_span_with_derivatives(b, p)? {
            return Ok(false);
        }
    }
    for p in b {
        if !in_span_with_derivatives(a, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn factor_string(c: &ExactScalar) -> String {
    c.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systems_up_to_derivatives() {
        let computed = polys(&["h2' - h1/2", "h3' + h1/2", "h4'", "h4"]).unwrap();
        let displayed = polys(&["-h1/2 + h2'", "h2' + h3'", "h4"]).unwrap();
        assert!(equivalent_with_derivatives(&computed, &displayed).unwrap());
        let short = polys(&["-h1/2 + h2'", "h4"]).unwrap();
        assert!(!equivalent_with_derivatives(&computed, &short).unwrap());
        assert!(each_occurs(&computed, &polys(&["2*h4"]).unwrap()));
    }
}
