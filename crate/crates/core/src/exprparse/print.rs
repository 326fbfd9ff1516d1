//! Canonical printer. Terms appear in descending monomial order.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::symexpr::{BaseMonomial, Expr, GPoly, ParamRat, Rational, Var};
use crate::vectorfield::VectorField;

fn fmt_exp(e: &Rational) -> String {
    if e.is_integer() && e.is_positive() {
        e.to_string()
    } else {
        format!("({e})")
    }
}

fn fmt_monomial(m: &BaseMonomial) -> Option<String> {
    let parts: Vec<String> = Var::ALL
        .iter()
        .filter_map(|&x| {
            let e = m.exp(x);
            if e.is_zero() {
                None
            } else if e.is_one() {
                Some(x.name().to_string())
            } else {
                Some(format!("{}^{}", x.name(), fmt_exp(e)))
            }
        })
        .collect();
    (!parts.is_empty()).then(|| parts.join("*"))
}

/// `(negative, body)` for a term `c * m * suffix`.
fn fmt_term(c: &ParamRat, m: &BaseMonomial, suffix: Option<&str>) -> (bool, String) {
    let mut factors: Vec<String> = Vec::new();
    if let Some(s) = fmt_monomial(m) {
        factors.push(s);
    }
    if let Some(s) = suffix {
        factors.push(s.to_string());
    }
    let (neg, coeff) = if let Some(q) = c.as_rational() {
        let a = q.abs();
        (q.is_negative(), (!a.is_one() || factors.is_empty()).then(|| a.to_string()))
    } else if c.denom().is_one() && c.numer().len() == 1 {
        let (_, k) = c.numer().terms().next().expect("one term");
        if k.is_negative() {
            (true, Some(c.neg().to_string()))
        } else {
            (false, Some(c.to_string()))
        }
    } else {
        (false, Some(format!("({c})")))
    };
    let mut all = Vec::new();
    all.extend(coeff);
    all.extend(factors);
    (neg, all.join("*"))
}

fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&body);
    }
    s
}

fn poly_terms(p: &GPoly, suffix: Option<&str>) -> Vec<(bool, String)> {
    p.terms().rev().map(|(m, c)| fmt_term(c, m, suffix)).collect()
}

fn fmt_gpoly(p: &GPoly) -> String {
    join_terms(poly_terms(p, None))
}

pub fn print_expr(e: &Expr) -> String {
    if e.is_polynomial() {
        return fmt_gpoly(e.numer());
    }
    let den: Vec<String> = e
        .den_factors()
        .iter()
        .map(|(f, k)| {
            if *k == 1 {
                format!("({})", fmt_gpoly(f))
            } else {
                format!("({})^{}", fmt_gpoly(f), k)
            }
        })
        .collect();
    format!("({})/({})", fmt_gpoly(e.numer()), den.join("*"))
}

pub fn print_vfield(f: &VectorField) -> String {
    let mut terms = Vec::new();
    for (x, marker) in [
        (Some(Var::T), Some("Dt")),
        (Some(Var::R), Some("Dr")),
        (Some(Var::V), Some("Dv")),
        (None, None),
    ] {
        let c = f.component(x);
        if c.is_zero() {
            continue;
        }
        if c.is_polynomial() {
            terms.extend(poly_terms(c.numer(), marker));
        } else {
            let body = match marker {
                Some(m) => format!("{}*{}", print_expr(c), m),
                None => print_expr(c),
            };
            terms.push((false, body));
        }
    }
    join_terms(terms)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_expr(self))
    }
}

impl fmt::Display for GPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_gpoly(self))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_vfield(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exprparse::{parse_expr, parse_vfield};

    #[test]
    fn canonical_forms() {
        assert_eq!(print_expr(&parse_expr("r*t", None).unwrap()), "t*r");
        assert_eq!(print_expr(&Expr::zero()), "0");
        let e = parse_expr("(k - mu^2)/mu * v^(-1) - 3/2*t^2", None).unwrap();
        let s = print_expr(&e);
        assert_eq!(parse_expr(&s, None).unwrap(), e, "{s}");
        let f = parse_vfield("-v*Dr - r^(-3)*phi0*Dv + mu*x/2", None).unwrap();
        let s = print_vfield(&f);
        assert_eq!(parse_vfield(&s, None).unwrap(), f, "{s}");
        let g = parse_expr("u/(u^2 + phi0)^2", Some(&crate::symexpr::int(2))).unwrap();
        let s = print_expr(&g);
        assert_eq!(parse_expr(&s, None).unwrap(), g, "{s}");
    }
}
