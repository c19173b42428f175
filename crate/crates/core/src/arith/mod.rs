//! Exact integer, rational, and polynomial arithmetic.
//!
//! Every quantity in this crate is either a natural number (block parameters,
//! eigenmap counts), an exact fraction (coordinate-projection fractions and
//! their products), or a polynomial with integer coefficients (symbolic
//! identity certificates). This module fixes the three representations.
//!
//! Integers and rationals are backed by `num-bigint` / `num-rational`.
//! Rationals constructed through [`rational`] or through `num` operations are
//! always in lowest terms with positive denominator, which is what makes the
//! rendered `num/den` forms canonical. Polynomials are implemented here, in
//! [`poly`], because the zero-polynomial checks they support are the actual
//! certificates this crate exists to produce.

pub(crate) mod poly;

pub use crate::serde_big::{parse_rational, rational_string, six_decimals};
pub use poly::{MultiPoly, PolyOp, VarSet};

use num_traits::Zero;
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type ExactInt = num_bigint::BigInt;

/// Arbitrary-precision rational, kept in lowest terms with positive denominator.
pub type ExactRational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}` for this variable set")]
    UnknownVariable(String),
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VarSetMismatch(Vec<String>, Vec<String>),
    #[error("no binding for variable `{0}`")]
    MissingBinding(String),
}

/// Builds an exact rational, rejecting a zero denominator instead of panicking.
pub fn rational(
    num: impl Into<ExactInt>,
    den: impl Into<ExactInt>,
) -> Result<ExactRational, ArithError> {
    let den = den.into();
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    Ok(ExactRational::new(num.into(), den))
}

/// Exact rational from an integer.
pub fn rational_int(num: impl Into<ExactInt>) -> ExactRational {
    ExactRational::from_integer(num.into())
}
