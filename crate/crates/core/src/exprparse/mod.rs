//! Text format for expressions and vector fields.
//!
//! ```text
//! expr   := expr ('+' | '-') expr | expr ('*' | '/') expr | '-' expr
//!         | expr '^' expr | '(' expr ')' | integer | identifier
//! ```
//!
//! `^` binds tightest and is right-associative, then unary minus, then `*` `/`,
//! then binary `+` `-`. Identifiers are `t r v`, the markers `Dt Dr Dv`, the
//! parameter names, `z` (resolved against a supplied rational), `u` (shorthand
//! for `r^(z-1)*v`) and any names bound in an [`Env`]. Exponents must evaluate
//! to rational constants. `#` starts a line comment.

mod elab;
mod lexer;
mod parser;
mod print;

use thiserror::Error;

pub use elab::Env;
pub use print::{print_expr, print_vfield};

use crate::symexpr::{Expr, Rational, SymError};
use crate::vectorfield::VectorField;

pub(crate) const MAX_DEPTH: usize = 256;
pub(crate) const MAX_INT_POWER: i64 = 64;
pub(crate) const MAX_TERMS: usize = 20_000;
pub(crate) const MAX_PARAM_EXPONENT: u16 = 1_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    Unexpected { found: String, expected: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("`z` used but no value for z was supplied")]
    ZRequired,
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("derivative marker inside an exponent")]
    MarkerInExponent,
    #[error("derivative marker raised to a power")]
    MarkerPower,
    #[error("product of two derivative markers")]
    MarkerProduct,
    #[error("division by a derivative marker")]
    MarkerDivision,
    #[error("derivative marker in a scalar expression")]
    MarkerInExpr,
    #[error("exponent `{0}` is not a rational constant")]
    NonConstantExponent(String),
    #[error("non-integer power `{0}` of a non-monomial")]
    BadPower(String),
    #[error("nesting deeper than {MAX_DEPTH}")]
    TooDeep,
    #[error("expression too large")]
    TooLarge,
    #[error(transparent)]
    Sym(SymError),
}

/// Located diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

/// Parsed but not yet elaborated text; elaborate once per value of `z`.
#[derive(Clone, Debug)]
pub struct Template {
    src: String,
    ast: parser::Node,
}

impl Template {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Template {
            src: src.to_string(),
            ast: parser::parse(src)?,
        })
    }

    pub fn source(&self) -> &str {
        &self.src
    }

    fn ctx<'a>(&'a self, z: Option<&'a Rational>, env: Option<&'a Env>) -> elab::Ctx<'a> {
        elab::Ctx {
            src: &self.src,
            z,
            env,
        }
    }

    pub fn expr(&self, z: Option<&Rational>, env: Option<&Env>) -> Result<Expr, ParseError> {
        self.ctx(z, env).scalar(&self.ast)
    }

    pub fn vfield(&self, z: Option<&Rational>, env: Option<&Env>) -> Result<VectorField, ParseError> {
        self.ctx(z, env).field(&self.ast)
    }
}

pub fn parse_expr(text: &str, z: Option<&Rational>) -> Result<Expr, ParseError> {
    Template::new(text)?.expr(z, None)
}

pub fn parse_vfield(text: &str, z: Option<&Rational>) -> Result<VectorField, ParseError> {
    Template::new(text)?.vfield(z, None)
}

/// Substitutes a rational `z` into a template, producing a plain expression.
pub fn expr_subst_z(template: &Template, z: &Rational, env: Option<&Env>) -> Result<Expr, ParseError> {
    template.expr(Some(z), env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{int, rat, Var};

    #[test]
    fn precedence() {
        let a = parse_expr("-t^2", None).unwrap();
        assert_eq!(a, -(Expr::var(Var::T) * Expr::var(Var::T)));
        let b = parse_expr("2^3^2", None).unwrap();
        assert_eq!(b, Expr::int(512));
        let c = parse_expr("1 - 2 - 3", None).unwrap();
        assert_eq!(c, Expr::int(-4));
        let d = parse_expr("6/2/3", None).unwrap();
        assert_eq!(d, Expr::int(1));
    }

    #[test]
    fn z_exponents() {
        let z = int(2);
        let e = parse_expr("v^(z/(1-z))", Some(&z)).unwrap();
        assert_eq!(e, Expr::tv(int(0), int(0), int(-2)));
        let e = parse_expr("v^((2*z-1)/(1-z))", Some(&z)).unwrap();
        assert_eq!(e, Expr::tv(int(0), int(0), int(-3)));
        assert_eq!(parse_expr("(z-2)/z", Some(&z)).unwrap(), Expr::zero());
        let err = parse_expr("v^(z/(1-z))", Some(&int(1))).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Sym(SymError::ZPole { .. })), "{err}");
        assert!(err.to_string().contains("1-z"), "{err}");
        let err = parse_expr("v^z", None).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::ZRequired);
        let half = parse_expr("u^(1/2)", Some(&rat(3, 1))).unwrap();
        assert_eq!(half, Expr::tv(int(0), int(1), rat(1, 2)));
    }

    #[test]
    fn located_errors() {
        let e = parse_expr("t^^2", None).unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
        let e = parse_expr("t +\n  foo", None).unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        assert!(matches!(e.kind, ParseErrorKind::UnknownIdent(_)));
        assert!(parse_vfield("t^Dt", None).is_err());
        assert!(parse_vfield("Dt*Dr", None).is_err());
        assert!(parse_vfield("t/Dr", None).is_err());
        assert!(parse_expr("Dt", None).is_err());
        assert!(parse_expr("(t+r)^(1/2)", None).is_err());
        assert!(parse_expr("t/(r-r)", None).is_err());
        assert!(parse_expr("(t+r)^65", None).is_err());
        let deep = "(".repeat(300) + "t" + &")".repeat(300);
        assert_eq!(parse_expr(&deep, None).unwrap_err().kind, ParseErrorKind::TooDeep);
    }

    #[test]
    fn vector_fields() {
        let x1 = parse_vfield("-(t^2)*Dt - 2*t*r*Dr - mu*r^2*Dr - 2*x*t - 2*gamma*r", None).unwrap();
        assert_eq!(x1.at, parse_expr("-t^2", None).unwrap());
        assert_eq!(x1.ar, parse_expr("-2*t*r - mu*r^2", None).unwrap());
        assert_eq!(x1.a0, parse_expr("-2*x*t - 2*gamma*r", None).unwrap());
        let y = parse_vfield("-v*Dr - r^(1-2*z)*phi0*Dv # comment", Some(&int(2))).unwrap();
        assert_eq!(y.av, parse_expr("-phi0*r^(-3)", None).unwrap());
    }
}
