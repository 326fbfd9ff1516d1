//! The coefficient-function system of the force family `F = r^(1-2z) phi(u)`,
//! evaluated on the closed-form Example 1 solution.
//!
//! All functions live in the `u` chart: an [`Expr`] whose `v` slot is `u`.

use super::{Assignments, CatalogError};
use crate::exprparse::Template;
use crate::symexpr::{Expr, Rational, Var};

#[derive(Clone, Debug)]
pub struct SystemResidual {
    pub name: &'static str,
    pub residual: Expr,
}

impl SystemResidual {
    pub fn ok(&self) -> bool {
        self.residual.is_zero()
    }
}

fn d(f: &Expr) -> Expr {
    f.diff(Var::V)
}

/// Substitutes the closed forms into every equation of the system with `Phi = 0`
/// and `q = (k - mu^2)/mu`, returning the residuals in order.
pub fn verify_example1_system(z: &Rational, a: &Assignments) -> Result<Vec<SystemResidual>, CatalogError> {
    if num_traits::Zero::is_zero(z) {
        return Err(CatalogError::ZeroZ);
    }
    let e = |s: &str| -> Result<Expr, CatalogError> {
        let x = Template::new(s)?.expr(Some(z), None)?;
        Ok(a.apply_expr(&x)?)
    };
    let u = Expr::var(Var::V);
    let zz = e("z")?;
    let k = e("k")?;
    let mu = e("mu")?;
    let x = e("x")?;
    let two = Expr::int(2);
    let three = Expr::int(3);
    let phi = Expr::zero();
    let dphi = d(&phi);
    let q = e("(k - mu^2)/mu")?;

    let a0 = e("k/z*v^(-1)")?;
    let b0 = e("k/(z*mu) - mu/z")?;
    let c0 = Expr::zero();
    let d0 = e("-mu*x/z")?;
    let a12 = e("k/z^2*v^(-2)")?;
    let b12 = e("(k - mu^2)/(mu*z^2)*v^(-1)")?;
    let c12 = Expr::zero();
    let d12 = e("-2*mu*x/z^2*v^(-1)")?;

    // Generator coefficients of Y1 from X1 and Y0.
    let ca = &two * &zz * &b0 * &a12 + &c0 * d(&a12) - &zz * &a0 * &b12 - d(&a0) * &c12;
    let cb = (&two / &zz) * &a0 + &zz * &b0 * &b12 + &c0 * d(&b12) - &u * &a12 - d(&b0) * &c12;
    let cc = &zz * &b0 * &c12 + &c0 * d(&c12) - d(&c0) * &c12 - &a12 * &phi;
    let cd = (&two / &zz) * &x * &a0 + &zz * &b0 * &d12 + &c0 * d(&d12);

    let zu = &zz * &u;
    let u_mu = &u / &mu;
    let mut out = Vec::new();
    let mut push = |name: &'static str, r: Expr| out.push(SystemResidual { name, residual: r });

    // Closed-form Y1 coefficients.
    push("A", &ca - e("k*(k - mu^2)/(mu*z^2)*v^(-2)")?);
    push("B", &cb - e("(k*(k - mu^2) + mu^4)/(mu^2*z^2)*v^(-1)")?);
    push("C", cc.clone());
    push("D", &cd - e("2*mu^2*x/z^2*v^(-1)")?);

    push("eq1", &zu * &a0 + &phi * d(&a0) - &k);
    push("eq2", &zu * &b0 + &phi * d(&b0) - &c0 - &q * &u);
    push("eq3", &dphi * &c0 - &phi * d(&c0) + (&q - &zz * &b0) * &phi);
    push("eq3bis", &phi * d(&d0));
    push(
        "eq4",
        &c12 - ((&two / &zz) * &mu - &u_mu * (&two * &zu * &a12 + &phi * d(&a12))
            + (&two * &zu * &b12 + &phi * d(&b12))),
    );
    push("eq5", &zu * &c12 + &phi * d(&c12) - &c12 * &dphi + &zz * &b12 * &phi - &two * &c0);
    push("eq6", &zu * &d12 + &phi * d(&d12) + &two * &mu * &x / &zz);
    push(
        "eq7",
        &phi * &phi * d(&d(&b12)) + &three * &zu * &phi * d(&b12)
            + &zz * (&two * &zu * &u + &three * &phi - &two * &u * &dphi) * &b12
            - &u_mu * &phi * &phi * d(&d(&a12))
            - (&three * &zu * &u + &two * &phi) * (&phi / &mu) * d(&a12)
            - (&zu * &u + &three * &phi - &u * &dphi) * (&two * &zu / &mu) * &a12
            + (&two * &mu / &zz) * (&zu - &dphi),
    );
    push("eq8", &two * &zu * &a12 + &phi * d(&a12) - &two * &a0);
    push("eq9", &two * &zu * &b12 + &phi * d(&b12) - &c12 - &two * &b0);
    push("eq10", &b0 - (&u_mu * &a0 - &mu / &zz));
    push("eq11", &c0 - (&phi / &mu) * &a0);
    push("eq12", &d0 + &mu * &x / &zz);
    push("eq13", &two * &zu * &ca + &phi * d(&ca) - &two * &q * &a0);
    push(
        "eq14",
        &two * &zu * &cb + &phi * d(&cb) - &cc - &two * (&k / &zz + &q * &b0),
    );
    push(
        "eq15",
        &zu * &cc + &phi * d(&cc) - &dphi * &cc + &zz * &phi * &cb - &two * &q * &c0,
    );
    push(
        "eq16",
        &zu * &cd + &phi * d(&cd) - (&two * &x / &zz) * (&k - &mu * &q),
    );
    push(
        "eq17",
        (&q - &two * &zz * &b0) * &ca - &c0 * d(&ca) + &zz * &a0 * &cb + d(&a0) * &cc + &k * &a12
            - &two * &a0 * &a0,
    );
    push(
        "eq18",
        (&q - &zz * &b0) * &cb - &c0 * d(&cb) + &u * &ca + d(&b0) * &cc + &k * &b12
            - &two * &a0 * &b0,
    );
    push(
        "eq19",
        (&q - &zz * &b0 + d(&c0)) * &cc - &c0 * d(&cc) + &phi * &ca + &k * &c12 - &two * &a0 * &c0,
    );
    push(
        "eq20",
        (&q - &zz * &b0) * &cd - &c0 * d(&cd) + &k * &d12 + &two * &a0 * &mu * &x / &zz,
    );
    push(
        "eq21",
        &two * &zz * (&b12 * &ca - &a12 * &cb) + &c12 * d(&ca) - d(&a12) * &cc + &two * &a0 * &a12,
    );
    push(
        "eq22",
        (&two / &zz) * &ca - &c12 * d(&cb) + d(&b12) * &cc - &two * &b0 * &a12,
    );
    push(
        "eq23",
        (&zz * &b12 - d(&c12)) * &cc + &c12 * d(&cc) - &zz * &c12 * &cb + &two * &c0 * &a12,
    );
    push(
        "eq24",
        (&two * &x / &zz) * (&mu * &a12 + &ca) + &zz * &d12 * &cb + d(&d12) * &cc
            - &zz * &b12 * &cd
            - &c12 * d(&cd),
    );
    Ok(out)
}

/// Residuals of the `b12` and `d12` equations at `z = 2`, constant `phi = phi0`, for
/// the closed forms of [`super::reps::example2_coefficients_u`] (in the `u` chart).
pub fn verify_example2_odes_z2() -> Result<Vec<SystemResidual>, CatalogError> {
    let z = crate::symexpr::int(2);
    let (b12, _, d12) = super::reps::example2_coefficients_u();
    let e = |s: &str| -> Result<Expr, CatalogError> { Ok(Template::new(s)?.expr(Some(&z), None)?) };
    let u = Expr::var(Var::V);
    let zz = e("z")?;
    let phi = e("(z-1)*v^2 + phi0")?;
    let phi0 = e("phi0")?;
    let mu = e("mu")?;
    let x = e("x")?;
    let two = Expr::int(2);
    let three = Expr::int(3);
    let db = d(&b12);
    let ddb = d(&db);
    let b12_res = &phi * &phi * &ddb
        + &three * &zz * &u * &phi * &db
        + &zz * ((&zz + Expr::one()) * &u * &u + &three * &phi0) * &b12
        + &two * &mu * (&two - &zz) / &zz * &u;
    let d12_res = &zz * &u * &d12 + &phi * d(&d12) + &two * &mu * &x / &zz;
    Ok(vec![
        SystemResidual {
            name: "b12_constant_phi",
            residual: b12_res,
        },
        SystemResidual {
            name: "d12",
            residual: d12_res,
        },
    ])
}
