//! Alternating multilinear algebra on a fixed six-dimensional frame.

mod form;
mod index;
mod invariant;
mod linear;
mod parse;

pub use form::Form;
pub use index::{MultiIndex, DIM};
pub use invariant::{invariant_forms, is_invariant, skew_generator};
pub use linear::{Endo, Vector};
pub use parse::{parse_form, parse_form_json};
