//! Coframes, orientations and ansätze for each reproduced case.

use crate::hitchin::Orientation;

#[derive(Clone, Copy, Debug)]
pub struct CaseFixture {
    pub id: &'static str,
    /// Preset name; `None` when only pointwise algebra is involved.
    pub coframe: Option<&'static str>,
    pub orientation: Orientation,
    pub omega: Option<&'static str>,
    pub psi: &'static str,
}

pub const CASE_IDS: &[&str] = &["b1-generic", "b1-onezero", "b1-diagonal", "c3", "a1", "boundary"];

pub const B1_GENERIC_PSI: &str = "p1*e135 + p2*e146 + p3*e235 + p4*e246";

pub const B1_ONEZERO_PSI: &str =
    "p1*e124 + p2*e126 + p3*e135 + p4*e146 + p5*e235 + p6*e246 + p7*e345 + p8*e356";

pub const B1_DIAGONAL_OMEGA: &str = "h1*e12 + h2*e35 + h3*e46 + h4*(e34 + e56) + h5*(e36 + e45)";
pub const B1_DIAGONAL_PSI: &str = "p1*e135 + p2*e146 + p3*(e134 + e156) + p4*(e136 + e145) \
     + p5*e235 + p6*e246 + p7*(e234 + e256) + p8*(e236 + e245)";

pub const C3_OMEGA: &str = "h1*e16 + h2*(e23 + e45) + h3*(e24 - e35) + h4*(e25 + e34)";
pub const C3_PSI: &str = "p1*(e123 + e145) + p2*(e124 - e135) + p3*(e246 - e356) + p4*(e236 + e456) \
     + p5*(e125 + e134) + p6*(e256 + e346)";

pub const A1_OMEGA: &str = "3/2*exp(4*t)/sqrt(9 + 3*exp(6*t))*e12 \
     - 1/3*(-3 + sqrt(9 + 3*exp(6*t)))*exp(-2*t)*e34 \
     + e35 + e36 + e46 - e45 + 2*exp(2*t)*e56";
pub const A1_PSI: &str = "e134 + e234 + exp(2*t)*(e136 + e235 + e246 - e145)";

/// The displayed metric of the explicit solution, row by row.
pub const A1_METRIC: [[&str; 6]; 6] = [
    ["3/2*exp(4*t)/sqrt(9 + 3*exp(6*t))", "0", "0", "0", "0", "0"],
    ["0", "3/2*exp(4*t)/sqrt(9 + 3*exp(6*t))", "0", "0", "0", "0"],
    ["0", "0", "(3 + sqrt(9 + 3*exp(6*t)))/(3*exp(2*t))", "0", "1", "-1"],
    ["0", "0", "0", "(3 + sqrt(9 + 3*exp(6*t)))/(3*exp(2*t))", "1", "1"],
    ["0", "0", "1", "1", "2*exp(2*t)", "0"],
    ["0", "0", "-1", "1", "0", "2*exp(2*t)"],
];

/// Generic 3-form on the trivial-isotropy coframe, with the labels used for
/// the boundary analysis (there is no `p10`).
pub const A1_GENERIC_PSI: &str = "p1*e123 + p2*e124 + p3*e125 + p4*e126 + p5*e134 + p6*e135 + p7*e136 \
     + p8*e145 + p9*e146 + p11*e234 + p12*e235 + p13*e236 + p14*e245 + p15*e246 + p16*e256 \
     + p17*e345 + p18*e346 + p19*e356 + p20*e456";

/// The invariant family at the singular orbit, with the slice coordinate
/// `dx` written as `e2`.
pub const BOUNDARY_RHO: &str = "c3*e125 + c4*e126 + c6*e135 + c7*e136 + c8*e145 + c9*e146 \
     - c8*e235 - c9*e236 + c6*e245 + c7*e246 + c17*e345 + c18*e346";

/// The larger family used by the second route, without `c10` and `c16`.
pub const BOUNDARY_RHO_FULL: &str = "c1*e123 + c2*e124 + c3*e125 + c4*e126 + c5*e134 + c6*e135 \
     + c7*e136 + c8*e145 + c9*e146 + c11*e234 + c12*e235 + c13*e236 + c14*e245 + c15*e246 \
     + c17*e345 + c18*e346";

pub fn fixture(id: &str) -> Option<CaseFixture> {
    let f = |coframe, orientation, omega, psi| CaseFixture { id: "", coframe, orientation, omega, psi };
    let mut out = match id {
        "b1-generic" => f(None, Orientation::Positive, None, B1_GENERIC_PSI),
        "b1-onezero" => f(None, Orientation::Positive, None, B1_ONEZERO_PSI),
        "b1-diagonal" => f(Some("b1-diagonal"), Orientation::Positive, Some(B1_DIAGONAL_OMEGA), B1_DIAGONAL_PSI),
        "c3" => f(Some("c3"), Orientation::Positive, Some(C3_OMEGA), C3_PSI),
        "a1" => f(Some("a1"), Orientation::Negative, Some(A1_OMEGA), A1_PSI),
        "boundary" => f(Some("a1"), Orientation::Positive, None, A1_GENERIC_PSI),
        _ => return None,
    };
    out.id = CASE_IDS.iter().find(|c| **c == id)?;
    Some(out)
}
