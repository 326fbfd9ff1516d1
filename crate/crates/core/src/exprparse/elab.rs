//! Turns syntax trees into exact values.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::parser::{Node, NodeKind};
use super::{ParseError, ParseErrorKind, MAX_INT_POWER, MAX_PARAM_EXPONENT, MAX_TERMS};
use crate::symexpr::{BaseMonomial, Expr, Param, Rational, SymError, Var};
use crate::vectorfield::VectorField;

/// Named sub-expressions available during elaboration.
pub type Env = BTreeMap<String, Expr>;

pub(crate) struct Ctx<'a> {
    pub src: &'a str,
    pub z: Option<&'a Rational>,
    pub env: Option<&'a Env>,
}

fn is_marker(s: &str) -> bool {
    matches!(s, "Dt" | "Dr" | "Dv")
}

fn mentions_z(s: &str) -> bool {
    matches!(s, "z" | "u")
}

fn has_markers(f: &VectorField) -> bool {
    !(f.at.is_zero() && f.ar.is_zero() && f.av.is_zero())
}

impl Ctx<'_> {
    fn err(&self, n: &Node, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: n.line,
            col: n.col,
            kind,
        }
    }

    fn text(&self, n: &Node) -> String {
        self.src.get(n.start..n.end).unwrap_or("").trim().to_string()
    }

    fn z(&self, n: &Node) -> Result<&Rational, ParseError> {
        self.z.ok_or_else(|| self.err(n, ParseErrorKind::ZRequired))
    }

    fn check_size(&self, n: &Node, e: &Expr) -> Result<(), ParseError> {
        if e.total_terms() > MAX_TERMS || e.max_param_exponent() > MAX_PARAM_EXPONENT {
            return Err(self.err(n, ParseErrorKind::TooLarge));
        }
        Ok(())
    }

    fn mul_checked(&self, n: &Node, a: &Expr, b: &Expr) -> Result<Expr, ParseError> {
        if a.total_terms().saturating_mul(b.total_terms()) > MAX_TERMS
            || u32::from(a.max_param_exponent()) + u32::from(b.max_param_exponent())
                > u32::from(MAX_PARAM_EXPONENT)
        {
            return Err(self.err(n, ParseErrorKind::TooLarge));
        }
        let p = a * b;
        self.check_size(n, &p)?;
        Ok(p)
    }

    fn div_checked(&self, n: &Node, divisor: &Node, a: &Expr, b: &Expr) -> Result<Expr, ParseError> {
        if b.is_zero() {
            let what = self.text(divisor);
            let kind = match self.z {
                Some(z) if divisor.any_ident(&mentions_z) => ParseErrorKind::Sym(SymError::ZPole {
                    z: z.to_string(),
                    what,
                }),
                _ => ParseErrorKind::DivisionByZero(what),
            };
            return Err(self.err(divisor, kind));
        }
        let inv = b.recip().map_err(|e| self.err(divisor, ParseErrorKind::Sym(e)))?;
        self.mul_checked(n, a, &inv)
    }

    pub(crate) fn field(&self, n: &Node) -> Result<VectorField, ParseError> {
        match &n.kind {
            NodeKind::Num(k) => Ok(VectorField::scalar(Expr::rational(Rational::from_integer(
                k.clone(),
            )))),
            NodeKind::Ident(s) => self.ident(n, s),
            NodeKind::Neg(a) => Ok(self.field(a)?.neg()),
            NodeKind::Sum(xs) => {
                let mut acc = VectorField::zero();
                for (neg, x) in xs {
                    let f = self.field(x)?;
                    acc = if *neg { acc.sub(&f) } else { acc.add(&f) };
                    self.check_field(n, &acc)?;
                }
                Ok(acc)
            }
            NodeKind::Product(xs) => {
                let mut acc = self.field(&xs[0].1)?;
                for (div, x) in &xs[1..] {
                    acc = if *div {
                        if x.any_ident(&is_marker) {
                            return Err(self.err(x, ParseErrorKind::MarkerDivision));
                        }
                        let d = self.scalar(x)?;
                        let inv = self.div_checked(n, x, &Expr::one(), &d)?;
                        self.scale_field(n, &acc, &inv)?
                    } else {
                        let fb = self.field(x)?;
                        match (has_markers(&acc), has_markers(&fb)) {
                            (true, true) => return Err(self.err(n, ParseErrorKind::MarkerProduct)),
                            (true, false) => self.scale_field(n, &acc, &fb.a0)?,
                            _ => self.scale_field(n, &fb, &acc.a0)?,
                        }
                    };
                }
                Ok(acc)
            }
            NodeKind::Pow(a, b) => {
                if b.any_ident(&is_marker) {
                    return Err(self.err(b, ParseErrorKind::MarkerInExponent));
                }
                if a.any_ident(&is_marker) {
                    return Err(self.err(a, ParseErrorKind::MarkerPower));
                }
                let base = self.scalar(a)?;
                let e = self.exponent(b)?;
                Ok(VectorField::scalar(self.power(n, a, &base, &e)?))
            }
        }
    }

    fn check_field(&self, n: &Node, f: &VectorField) -> Result<(), ParseError> {
        for c in f.components() {
            self.check_size(n, c)?;
        }
        Ok(())
    }

    fn scale_field(&self, n: &Node, f: &VectorField, s: &Expr) -> Result<VectorField, ParseError> {
        Ok(VectorField::new(
            self.mul_checked(n, &f.at, s)?,
            self.mul_checked(n, &f.ar, s)?,
            self.mul_checked(n, &f.av, s)?,
            self.mul_checked(n, &f.a0, s)?,
        ))
    }

    /// Elaborates a marker-free subtree.
    pub(crate) fn scalar(&self, n: &Node) -> Result<Expr, ParseError> {
        let f = self.field(n)?;
        if has_markers(&f) {
            return Err(self.err(n, ParseErrorKind::MarkerInExpr));
        }
        Ok(f.a0)
    }

    fn exponent(&self, n: &Node) -> Result<Rational, ParseError> {
        let e = self.scalar(n)?;
        e.as_param_constant()
            .and_then(|c| c.as_rational())
            .ok_or_else(|| self.err(n, ParseErrorKind::NonConstantExponent(self.text(n))))
    }

    fn power(&self, n: &Node, base_node: &Node, base: &Expr, e: &Rational) -> Result<Expr, ParseError> {
        if base.is_zero() {
            if e.is_negative() {
                return self.div_checked(n, base_node, &Expr::one(), base);
            }
            return Ok(if e.is_zero() { Expr::one() } else { Expr::zero() });
        }
        if let Some((c, m)) = base.as_monomial() {
            if c.is_one() {
                return Ok(Expr::monomial(c.clone(), m.pow(e)));
            }
        }
        if !e.is_integer() {
            return Err(self.err(n, ParseErrorKind::BadPower(self.text(n))));
        }
        let k = e.to_integer();
        let k: i64 = match i64::try_from(k) {
            Ok(k) if k.abs() <= MAX_INT_POWER => k,
            _ => return Err(self.err(n, ParseErrorKind::TooLarge)),
        };
        let b = if k < 0 {
            self.div_checked(n, base_node, &Expr::one(), base)?
        } else {
            base.clone()
        };
        let mut acc = Expr::one();
        let mut sq = b;
        let mut k = k.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_checked(n, &acc, &sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul_checked(n, &sq, &sq)?;
            }
        }
        Ok(acc)
    }

    fn ident(&self, n: &Node, s: &str) -> Result<VectorField, ParseError> {
        let one = Rational::from_integer(1.into());
        let e = match s {
            "Dt" => return Ok(VectorField::d(Var::T)),
            "Dr" => return Ok(VectorField::d(Var::R)),
            "Dv" => return Ok(VectorField::d(Var::V)),
            "t" => Expr::var(Var::T),
            "r" => Expr::var(Var::R),
            "v" => Expr::var(Var::V),
            "z" => Expr::rational(self.z(n)?.clone()),
            "u" => {
                let z = self.z(n)?;
                Expr::monomial(
                    1.into(),
                    BaseMonomial::new(Rational::zero(), z - &one, one.clone()),
                )
            }
            _ => {
                if let Some(x) = self.env.and_then(|env| env.get(s)) {
                    x.clone()
                } else if let Some(p) = Param::from_name(s) {
                    Expr::param(p)
                } else {
                    return Err(self.err(n, ParseErrorKind::UnknownIdent(s.to_string())));
                }
            }
        };
        Ok(VectorField::scalar(e))
    }
}
