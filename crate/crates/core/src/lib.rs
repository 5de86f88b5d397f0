//! Stable forms and invariant exterior calculus on six-dimensional coframes.

pub mod error;
pub mod scalars;
pub use error::{Error, Result};
pub mod exterior;
pub mod linalg;
pub mod coframe;
pub mod hitchin;
pub mod cases;
