use std::collections::BTreeMap;

use clap::Args;
use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use vlasym::catalog::Assignments;
use vlasym::symexpr::{parse_rational, rational_to_f64, Param, Rational};

use crate::CliError;

/// Exact value of `p`, `p/q` or a decimal such as `-1.25e-3`.
pub fn parse_number(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some(r) = parse_rational(s) {
        return Some(r);
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.is_empty() && int.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let shift = exp - i32::try_from(frac.len()).ok()?;
    let ten = BigInt::from(10);
    Some(if shift >= 0 {
        Rational::from_integer(digits * ten.pow(shift.unsigned_abs()))
    } else {
        Rational::new(digits, ten.pow(shift.unsigned_abs()))
    })
}

pub fn parse_rational_arg(what: &str, s: &str) -> Result<Rational, CliError> {
    parse_number(s).ok_or_else(|| CliError::Usage(format!("{what}: `{s}` is not a number")))
}

/// Rational z values; zero is rejected.
pub fn parse_z_list(values: &[String]) -> Result<Vec<Rational>, CliError> {
    values
        .iter()
        .map(|s| {
            let z = parse_rational_arg("--z", s)?;
            if z.is_zero() {
                return Err(CliError::Usage("--z: z = 0 is not admissible".into()));
            }
            Ok(z)
        })
        .collect()
}

pub fn default_z() -> Vec<Rational> {
    ["2", "3", "-1", "1/2"].iter().map(|s| parse_number(s).unwrap()).collect()
}

/// Parameter values; each is a number or `symbolic`.
#[derive(Args, Clone, Debug, Default)]
pub struct ParamArgs {
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub mu: Option<String>,
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub x: Option<String>,
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub k: Option<String>,
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub gamma: Option<String>,
    #[arg(long = "A110", alias = "a110", value_name = "VALUE", allow_negative_numbers = true)]
    pub a110: Option<String>,
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub phi0: Option<String>,
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub b120: Option<String>,
    #[arg(long, value_name = "VALUE", allow_negative_numbers = true)]
    pub b121: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Symbolic,
    Value(Rational),
}

impl ParamArgs {
    fn raw(&self) -> [(Param, &Option<String>); 8] {
        [
            (Param::Mu, &self.mu),
            (Param::X, &self.x),
            (Param::K, &self.k),
            (Param::Gamma, &self.gamma),
            (Param::A110, &self.a110),
            (Param::Phi0, &self.phi0),
            (Param::B120, &self.b120),
            (Param::B121, &self.b121),
        ]
    }

    /// Parameters given on the command line.
    pub fn given(&self) -> Result<BTreeMap<Param, ParamValue>, CliError> {
        let mut out = BTreeMap::new();
        for (p, v) in self.raw() {
            let Some(s) = v else { continue };
            let val = if s.trim() == "symbolic" {
                ParamValue::Symbolic
            } else {
                ParamValue::Value(parse_rational_arg(&format!("--{}", p.name()), s)?)
            };
            out.insert(p, val);
        }
        Ok(out)
    }

    /// Assignments for a construction using `allowed`; anything else is an error.
    pub fn assignments(&self, allowed: &[Param], owner: &str) -> Result<Assignments, CliError> {
        let mut a = Assignments::new();
        for (p, v) in self.given()? {
            if !allowed.contains(&p) {
                return Err(CliError::Usage(format!("parameter `{}` is not used by {owner}", p.name())));
            }
            if let ParamValue::Value(r) = v {
                a = a.with(p, r);
            }
        }
        Ok(a)
    }

    /// Like [`ParamArgs::assignments`], but every parameter in `allowed` gets a
    /// value: the given one, else `defaults`, else an error.
    pub fn numeric(
        &self,
        allowed: &[Param],
        defaults: &[(Param, i64)],
        owner: &str,
    ) -> Result<Assignments, CliError> {
        let given = self.given()?;
        let mut a = Assignments::new();
        for (p, v) in &given {
            if !allowed.contains(p) {
                return Err(CliError::Usage(format!("parameter `{}` is not used by {owner}", p.name())));
            }
            match v {
                ParamValue::Value(r) => a = a.with(*p, r.clone()),
                ParamValue::Symbolic => {
                    return Err(CliError::Usage(format!("--{} needs a numeric value for {owner}", p.name())))
                }
            }
        }
        for p in allowed {
            if a.get(*p).is_none() {
                match defaults.iter().find(|(q, _)| q == p) {
                    Some((_, d)) => a = a.with(*p, Rational::from_integer((*d).into())),
                    None => return Err(CliError::Usage(format!("{owner} needs --{}", p.name()))),
                }
            }
        }
        Ok(a)
    }
}

pub fn value_f64(a: &Assignments, p: Param) -> f64 {
    a.get(p).map(rational_to_f64).expect("numeric parameter")
}

/// Echo of assignments: the value, or `symbolic` for the listed parameters without one.
pub fn echo_params(cfg: &mut BTreeMap<String, String>, a: &Assignments, params: &[Param]) {
    for p in params {
        let v = a.get(*p).map(|r| r.to_string()).unwrap_or_else(|| "symbolic".into());
        cfg.insert(p.name().to_string(), v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use vlasym::symexpr::rat;

    #[test]
    fn numbers() {
        assert_eq!(parse_number("3"), Some(rat(3, 1)));
        assert_eq!(parse_number("-1/2"), Some(rat(-1, 2)));
        assert_eq!(parse_number("0.7"), Some(rat(7, 10)));
        assert_eq!(parse_number("-1.25e-3"), Some(rat(-1, 800)));
        assert_eq!(parse_number("2.5e2"), Some(rat(250, 1)));
        assert_eq!(parse_number(".5"), Some(rat(1, 2)));
        assert_eq!(parse_number("1e"), None);
        assert_eq!(parse_number("."), None);
        assert_eq!(parse_number("abc"), None);
    }
}
