//! Plain-text form of a representation.
//!
//! ```text
//! # comment
//! name = caseA
//! z = 2
//! mu = symbolic
//! x = 1/2
//! X[-1] = -Dr
//! ...
//! B = mu*Dt + v*Dr
//! F = 0
//! ```

use std::fmt::Write as _;

use super::{CatalogError, Representation, BASIS_NAMES};
use crate::exprparse::{print_expr, print_vfield, Template};
use crate::symexpr::{parse_rational, Expr, Param, Rational};
use crate::vectorfield::VectorField;

impl Representation {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "name = {}", self.name);
        if let Some(z) = &self.z {
            let _ = writeln!(s, "z = {z}");
        }
        for (p, v) in &self.params {
            match v {
                Some(v) => {
                    let _ = writeln!(s, "{} = {v}", p.name());
                }
                None => {
                    let _ = writeln!(s, "{} = symbolic", p.name());
                }
            }
        }
        for (label, g) in BASIS_NAMES.iter().zip(&self.basis) {
            let _ = writeln!(s, "{label} = {}", print_vfield(g));
        }
        let _ = writeln!(s, "B = {}", print_vfield(&self.boltzmann));
        let _ = writeln!(s, "F = {}", print_expr(&self.force));
        s
    }

    /// Reads the form written by [`Representation::to_text`]. Predicted multipliers
    /// are not stored, so `expected` is `None`.
    pub fn from_text(text: &str) -> Result<Representation, CatalogError> {
        let mut name = None;
        let mut z: Option<Rational> = None;
        let mut params = Vec::new();
        let mut basis: [Option<VectorField>; 6] = Default::default();
        let mut boltzmann = None;
        let mut force = None;
        let err = |line: usize, msg: String| CatalogError::Text { line, msg };

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, "expected `key = value`".into()))?;
            let (key, val) = (key.trim(), val.trim());
            let parse_err = |e: crate::exprparse::ParseError| {
                err(line_no, format!("{key}: {e}"))
            };
            match key {
                "name" => name = Some(val.to_string()),
                "z" => {
                    z = Some(
                        parse_rational(val)
                            .ok_or_else(|| err(line_no, format!("bad value for z: `{val}`")))?,
                    )
                }
                "B" => {
                    boltzmann = Some(Template::new(val).and_then(|t| t.vfield(z.as_ref(), None)).map_err(parse_err)?)
                }
                "F" => force = Some(Template::new(val).and_then(|t| t.expr(z.as_ref(), None)).map_err(parse_err)?),
                _ => {
                    if let Some(idx) = Representation::index_of(key) {
                        if basis[idx].is_some() {
                            return Err(err(line_no, format!("duplicate generator {key}")));
                        }
                        basis[idx] = Some(Template::new(val).and_then(|t| t.vfield(z.as_ref(), None)).map_err(parse_err)?);
                    } else if let Some(p) = Param::from_name(key) {
                        let v = if val == "symbolic" {
                            None
                        } else {
                            Some(parse_rational(val).ok_or_else(|| {
                                err(line_no, format!("bad value for {key}: `{val}`"))
                            })?)
                        };
                        params.push((p, v));
                    } else {
                        return Err(err(line_no, format!("unknown key `{key}`")));
                    }
                }
            }
        }
        let end = text.lines().count().max(1);
        let mut out = Vec::with_capacity(6);
        for (label, g) in BASIS_NAMES.iter().zip(basis) {
            out.push(g.ok_or_else(|| err(end, format!("missing generator {label}")))?);
        }
        Ok(Representation {
            name: name.unwrap_or_else(|| "custom".into()),
            z,
            params,
            basis: out.try_into().expect("six generators"),
            boltzmann: boltzmann.ok_or_else(|| err(end, "missing `B`".into()))?,
            force: force.unwrap_or_else(Expr::zero),
            expected: None,
        })
    }
}
