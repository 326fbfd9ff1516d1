use num_traits::{One, Zero};

use super::{u_to_trv, Assignments, CatalogError, Expected, Representation};
use crate::exprparse::{Env, Template};
use crate::symexpr::{Expr, Param, ParamRat, Rational, Var};
use crate::vectorfield::VectorField;

/// The named representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RepKind {
    Standard,
    CaseA,
    CaseB1,
    CaseB2,
    Example1,
    Example2Z2,
}

impl RepKind {
    pub const ALL: [RepKind; 6] = [
        RepKind::Standard,
        RepKind::CaseA,
        RepKind::CaseB1,
        RepKind::CaseB2,
        RepKind::Example1,
        RepKind::Example2Z2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RepKind::Standard => "standard",
            RepKind::CaseA => "caseA",
            RepKind::CaseB1 => "caseB1",
            RepKind::CaseB2 => "caseB2",
            RepKind::Example1 => "example1",
            RepKind::Example2Z2 => "example2_z2",
        }
    }

    pub fn from_name(s: &str) -> Option<RepKind> {
        Self::ALL.into_iter().find(|k| k.name().eq_ignore_ascii_case(s))
    }

    /// Whether the construction depends on the exponent `z`.
    pub fn uses_z(self) -> bool {
        matches!(self, RepKind::CaseA | RepKind::CaseB1 | RepKind::CaseB2 | RepKind::Example1)
    }

    pub fn params(self) -> &'static [Param] {
        use Param::*;
        match self {
            RepKind::Standard => &[Mu, X, Gamma],
            RepKind::CaseA | RepKind::CaseB2 => &[Mu, X],
            RepKind::CaseB1 => &[Mu, X, A110],
            RepKind::Example1 => &[Mu, X, K],
            RepKind::Example2Z2 => &[Mu, X, Phi0, B120, B121],
        }
    }
}

/// Builds a representation by name. `z` is ignored by the z-free constructions.
pub fn make_rep(kind: RepKind, z: &Rational, a: &Assignments) -> Result<Representation, CatalogError> {
    match kind {
        RepKind::Standard => make_standard(a),
        RepKind::CaseA => make_caseA(z, a),
        RepKind::CaseB1 => make_caseB1(z, a),
        RepKind::CaseB2 => make_caseB2(z, a),
        RepKind::Example1 => make_example1(z, a),
        RepKind::Example2Z2 => make_example2_z2(a),
    }
}

struct RepDef<'a> {
    kind: RepKind,
    z: Option<Rational>,
    gens: [&'a str; 6],
    boltzmann: &'a str,
    force: &'a str,
    k: &'a str,
    q: &'a str,
    lambdas: [&'a str; 6],
    rhos: [&'a str; 6],
}

fn check_common(kind: RepKind, z: Option<&Rational>, a: &Assignments) -> Result<(), CatalogError> {
    if a.get(Param::Mu).is_some_and(|m| m.is_zero()) {
        return Err(CatalogError::ZeroMu);
    }
    if let Some(z) = z {
        if z.is_zero() {
            return Err(CatalogError::ZeroZ);
        }
        if kind == RepKind::CaseB1 && z.is_one() {
            return Err(CatalogError::CaseB1AtZ1);
        }
    }
    Ok(())
}

fn build(def: RepDef<'_>, env: Option<&Env>, a: &Assignments) -> Result<Representation, CatalogError> {
    check_common(def.kind, def.z.as_ref(), a)?;
    let z = def.z.as_ref();
    let field = |s: &str| -> Result<VectorField, CatalogError> {
        let f = Template::new(s)?.vfield(z, env)?;
        Ok(a.apply_field(&f)?)
    };
    let expr = |s: &str| -> Result<Expr, CatalogError> {
        let e = Template::new(s)?.expr(z, env)?;
        Ok(a.apply_expr(&e)?)
    };
    let constant = |s: &str| -> Result<ParamRat, CatalogError> {
        let e = expr(s)?;
        Ok(e.as_param_constant().expect("constant template"))
    };
    let mut basis: [VectorField; 6] = Default::default();
    for (b, s) in basis.iter_mut().zip(def.gens) {
        *b = field(s)?;
    }
    let mut multipliers = Vec::with_capacity(6);
    for (l, r) in def.lambdas.iter().zip(def.rhos) {
        multipliers.push((expr(l)?, constant(r)?));
    }
    let multipliers: [(Expr, ParamRat); 6] = multipliers.try_into().expect("six entries");
    let params = def
        .kind
        .params()
        .iter()
        .map(|p| (*p, a.get(*p).cloned()))
        .collect();
    Ok(Representation {
        name: def.kind.name().to_string(),
        z: def.z.clone(),
        params,
        basis,
        boltzmann: field(def.boltzmann)?,
        force: expr(def.force)?,
        expected: Some(Expected {
            k: constant(def.k)?,
            q: constant(def.q)?,
            multipliers,
        }),
    })
}

const CASE_A_X: [&str; 3] = [
    "-Dt",
    "-t*Dt - r/z*Dr - (1-z)/z*v*Dv - x/z",
    "-t^2*Dt - (2/z*t*r + (z-2)/z*mu*r^2*v^(-1))*Dr - 2*(1-z)/z*(v*t - mu*r)*Dv \
     - 2/z*x*t + 2/z*mu*x*r*v^(-1)",
];

/// Standard representation with transport operator `-mu Dt + Dr`.
pub fn make_standard(a: &Assignments) -> Result<Representation, CatalogError> {
    build(
        RepDef {
            kind: RepKind::Standard,
            z: None,
            gens: [
                "-Dt",
                "-t*Dt - r*Dr - x",
                "-t^2*Dt - (2*t*r + mu*r^2)*Dr - 2*x*t - 2*gamma*r",
                "-Dr",
                "-(t + mu*r)*Dr - gamma",
                "-(t + mu*r)^2*Dr - 2*gamma*t - 2*gamma*mu*r",
            ],
            boltzmann: "-mu*Dt + Dr",
            force: "0",
            k: "0",
            q: "mu",
            lambdas: ["0", "-1", "-2*t", "0", "0", "0"],
            rhos: ["0", "0", "2*(mu*x - gamma)", "0", "0", "0"],
        },
        None,
        a,
    )
}

/// `(X_n, Y_n)` of the standard family for `n >= -1`.
pub fn make_standard_n(n: i64, a: &Assignments) -> Result<(VectorField, VectorField), CatalogError> {
    if n < -1 {
        return Err(CatalogError::UnsupportedN(n));
    }
    if n > 60 {
        return Err(CatalogError::UnsupportedN(n));
    }
    check_common(RepKind::Standard, None, a)?;
    let m = n + 1;
    let xs = format!(
        "-t^({m})*Dt - ((t + mu*r)^({m}) - t^({m}))/mu*Dr - {m}*x*t^({n}) \
         - {m}*gamma/mu*((t + mu*r)^({n}) - t^({n}))"
    );
    let ys = format!("-(t + mu*r)^({m})*Dr - {m}*gamma*(t + mu*r)^({n})");
    let x = a.apply_field(&Template::new(&xs)?.vfield(None, None)?)?;
    let y = a.apply_field(&Template::new(&ys)?.vfield(None, None)?)?;
    Ok((x, y))
}

#[allow(non_snake_case)]
pub fn make_caseA(z: &Rational, a: &Assignments) -> Result<Representation, CatalogError> {
    build(
        RepDef {
            kind: RepKind::CaseA,
            z: Some(z.clone()),
            gens: [
                CASE_A_X[0],
                CASE_A_X[1],
                CASE_A_X[2],
                "-v*Dr",
                "-(t*v - mu/z*r)*Dr - (z-1)/z*mu*v*Dv + mu*x/z",
                "-(t^2*v - 2/z*mu*t*r - (z-2)/z*mu^2*r^2*v^(-1))*Dr - 2/z*(z-1)*mu*(v*t - mu*r)*Dv \
                 + 2/z*mu*x*t - 2/z*mu^2*x*r*v^(-1)",
            ],
            boltzmann: "mu*Dt + v*Dr",
            force: "0",
            k: "0",
            q: "-mu",
            lambdas: ["0", "-1", "-2*t", "0", "0", "0"],
            rhos: ["0"; 6],
        },
        None,
        a,
    )
}

#[allow(non_snake_case)]
pub fn make_caseB1(z: &Rational, a: &Assignments) -> Result<Representation, CatalogError> {
    build(
        RepDef {
            kind: RepKind::CaseB1,
            z: Some(z.clone()),
            gens: [
                CASE_A_X[0],
                CASE_A_X[1],
                "-(t^2 + A110*r*v^((2*z-1)/(1-z)) + A110^2/(4*mu^2)*v^(2*z/(1-z)))*Dt \
                 - (2/z*t*r + (z-2)/z*mu*r^2*v^(-1) + A110/mu*r*v^(z/(1-z)) \
                    + A110^2/(4*mu^3)*v^((z+1)/(1-z)))*Dr \
                 - 2*(1-z)/z*(v*t - mu*r)*Dv - 2/z*x*t + 2/z*mu*x*r*v^(-1)",
                "-v*Dr",
                "-A110/2*v^(z/(1-z))*Dt - (t*v - mu/z*r + A110/(2*mu)*v^(1/(1-z)))*Dr \
                 - (z-1)/z*mu*v*Dv + mu*x/z",
                "-A110*(t*v^(z/(1-z)) - mu*r*v^((2*z-1)/(1-z)))*Dt \
                 - (t^2*v - 2/z*mu*t*r - (z-2)/z*mu^2*r^2*v^(-1) \
                    + A110/mu*(t*v^(1/(1-z)) - mu*r*v^(z/(1-z))))*Dr \
                 - 2/z*(z-1)*mu*(v*t - mu*r)*Dv + 2/z*mu*x*t - 2/z*mu^2*x*r*v^(-1)",
            ],
            boltzmann: "mu*Dt + v*Dr",
            force: "0",
            k: "0",
            q: "-mu",
            lambdas: ["0", "-1", "-2*t - A110/mu*v^(z/(1-z))", "0", "0", "0"],
            rhos: ["0"; 6],
        },
        None,
        a,
    )
}

#[allow(non_snake_case)]
pub fn make_caseB2(z: &Rational, a: &Assignments) -> Result<Representation, CatalogError> {
    build(
        RepDef {
            kind: RepKind::CaseB2,
            z: Some(z.clone()),
            gens: [
                CASE_A_X[0],
                CASE_A_X[1],
                "-(t^2 + mu*r^2*v^(-2))*Dt - (2/z*t*r + (z + mu*(z-2))/z*r^2*v^(-1))*Dr \
                 - 2*(1-z)/z*(v*t - mu*r)*Dv - 2/z*x*t + 2/z*mu*x*r*v^(-1)",
                "-v*Dr",
                "-mu*r*v^(-1)*Dt - (t*v - (mu/z - 1)*r)*Dr - (z-1)/z*mu*v*Dv + mu*x/z",
                "-mu*(2*t*r*v^(-1) + (1-mu)*r^2*v^(-2))*Dt \
                 - (t^2*v + 2/z*(z-mu)*t*r + (z*(1-mu) - (z-2)*mu^2)/z*r^2*v^(-1))*Dr \
                 - 2/z*(z-1)*mu*(v*t - mu*r)*Dv + 2/z*mu*x*t - 2/z*mu^2*x*r*v^(-1)",
            ],
            boltzmann: "mu*Dt + v*Dr",
            force: "0",
            k: "mu",
            q: "1 - mu",
            lambdas: [
                "0",
                "-1",
                "-2*(t + r*v^(-1))",
                "0",
                "-1",
                "-2*(t + r*v^(-1))",
            ],
            rhos: ["0"; 6],
        },
        None,
        a,
    )
}

pub fn make_example1(z: &Rational, a: &Assignments) -> Result<Representation, CatalogError> {
    build(
        RepDef {
            kind: RepKind::Example1,
            z: Some(z.clone()),
            gens: [
                CASE_A_X[0],
                CASE_A_X[1],
                "-(t^2 + k/z^2*r^2*v^(-2))*Dt - (2/z*t*r + (k-mu^2)/(z^2*mu)*r^2*v^(-1))*Dr \
                 - (1-z)*(2/z*t*v + (k-mu^2)/(z^2*mu)*r)*Dv - 2/z*x*t + 2*mu*x/z^2*r*v^(-1)",
                "-v*Dr - (1-z)*r^(-1)*v^2*Dv",
                "-k/z*r*v^(-1)*Dt - (t*v + (k-mu^2)/(z*mu)*r)*Dr \
                 - (1-z)*(t*r^(-1)*v^2 + (k-mu^2)/(z*mu)*v)*Dv + mu*x/z",
                "-(2*k/z*t*r*v^(-1) + k*(k-mu^2)/(z^2*mu)*r^2*v^(-2))*Dt \
                 - (t^2*v + 2*(k-mu^2)/(z*mu)*t*r + (k*(k-mu^2) + mu^4)/(z^2*mu^2)*r^2*v^(-1))*Dr \
                 - (1-z)*(t^2*r^(-1)*v^2 + 2*(k-mu^2)/(z*mu)*t*v \
                    + (k*(k-mu^2) + mu^4)/(z^2*mu^2)*r)*Dv \
                 + 2/z*mu*x*t - 2*mu^2*x/z^2*r*v^(-1)",
            ],
            boltzmann: "mu*Dt + v*Dr + (1-z)*r^(-1)*v^2*Dv",
            force: "(1-z)*r^(-1)*v^2",
            k: "k",
            q: "(k - mu^2)/mu",
            lambdas: [
                "0",
                "-1",
                "-2*(t + k/(z*mu)*r*v^(-1))",
                "0",
                "-k/mu",
                "-2*(k/mu*t + k^2/(z*mu^2)*r*v^(-1))",
            ],
            rhos: ["0"; 6],
        },
        None,
        a,
    )
}

/// Coefficient functions of the constant-force family at `z = 2`, as functions of `u`.
///
/// Returned in the `u` chart (the `v` slot holds `u`): `(b12, c12, d12)`.
pub fn example2_coefficients_u() -> (Expr, Expr, Expr) {
    let z = Rational::from_integer(2.into());
    let b12 = Template::new("(b120*v + b121*(v^2 - phi0))/(v^2 + phi0)^2")
        .and_then(|t| t.expr(None, None))
        .expect("static template");
    let d12 = Template::new("-mu*x*v/(v^2 + phi0)")
        .and_then(|t| t.expr(None, None))
        .expect("static template");
    let u = Expr::var(Var::V);
    let phi = Template::new("(z-1)*v^2 + phi0")
        .and_then(|t| t.expr(Some(&z), None))
        .expect("static template");
    let two_z = Expr::rational(&z * Rational::from_integer(2.into()));
    let c12 = &two_z * &u * &b12
        + &phi * b12.diff(Var::V)
        + Expr::param(Param::Mu).scale(&ParamRat::from_rational(
            Rational::from_integer(2.into()) / &z,
        ));
    (b12, c12, d12)
}

pub fn make_example2_z2(a: &Assignments) -> Result<Representation, CatalogError> {
    let z = Rational::from_integer(2.into());
    let (b12, c12, d12) = example2_coefficients_u();
    let mut env = Env::new();
    env.insert("b12".into(), u_to_trv(&b12, &z));
    env.insert("c12".into(), u_to_trv(&c12, &z));
    env.insert("d12".into(), u_to_trv(&d12, &z));
    build(
        RepDef {
            kind: RepKind::Example2Z2,
            z: Some(z),
            gens: [
                CASE_A_X[0],
                CASE_A_X[1],
                "-t^2*Dt - (2/z*t*r + r^(z+1)*b12)*Dr \
                 - ((1-z)*(2/z*t*v + r^z*v*b12) + r*c12)*Dv - 2/z*x*t - r^z*d12",
                "-v*Dr - r^(1-2*z)*phi0*Dv",
                "-(t*v - mu/z*r)*Dr - (r^(1-2*z)*phi0*t - (1-z)*mu/z*v)*Dv + mu*x/z",
                "-(t^2*v - 2*mu/z*t*r - mu*r^(z+1)*b12)*Dr \
                 - (t^2*r^(1-2*z)*phi0 - (1-z)*2/z*mu*t*v - (1-z)*mu*r^z*v*b12 - mu*r*c12)*Dv \
                 + 2/z*mu*x*t + mu*r^z*d12",
            ],
            boltzmann: "mu*Dt + v*Dr + phi0*r^(1-2*z)*Dv",
            force: "phi0*r^(1-2*z)",
            k: "0",
            q: "-mu",
            lambdas: ["0", "-1", "-2*t", "0", "0", "0"],
            rhos: ["0"; 6],
        },
        Some(&env),
        a,
    )
}
