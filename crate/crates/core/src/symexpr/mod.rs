//! Exact arithmetic kernel.
//!
//! Values are fractions of sparse sums of generalized monomials `t^a r^b v^c`
//! (rational exponents) whose coefficients are rational functions of the
//! symbolic parameters. Zero testing is exact: an [`Expr`] is zero iff its
//! numerator has no terms after coefficient normalization.

mod expr;
mod gpoly;
mod param;

pub use expr::{Expr, Point};
pub use gpoly::{BaseMonomial, GPoly, Var};
pub use param::{rational_to_f64, Param, ParamExps, ParamPoly, ParamRat, NPARAMS};


use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: {0}")]
    Pole(String),
    #[error("negative base {base} raised to non-integer exponent {exponent}")]
    BranchCut { base: f64, exponent: String },
    #[error("parameter `{0}` has no numeric value")]
    MissingParam(&'static str),
    #[error("substitution z = {z} hits a pole in {what}")]
    ZPole { z: String, what: String },
}

/// Builds a rational from a numerator and denominator.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Builds an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num_bigint::BigInt = n.parse().ok()?;
    let d: num_bigint::BigInt = d.parse().ok()?;
    if num_traits::Zero::is_zero(&d) {
        return None;
    }
    Some(Rational::new(n, d))
}
