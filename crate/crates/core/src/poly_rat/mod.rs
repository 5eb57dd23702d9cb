//! Sparse multivariate polynomials over ℚ and rational functions with
//! per-variable degree, properness and delay calculus.

mod gcd;
mod poly;
mod ratfunc;

pub use gcd::{content, gcd, primitive_part};
pub use poly::{Monomial, MultiPoly, Vars};
pub use ratfunc::{Delay, RatFunc};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}

/// Build a shared variable list from names.
pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names
        .iter()
        .map(|s| s.as_ref().to_string())
        .collect::<Vec<_>>()
        .into()
}
