//! Obstruction to extending the case-A representation by a generator `X[2]`.

use super::{make_caseA, Assignments, CatalogError};
use crate::exprparse::Template;
use crate::symexpr::{Point, Rational};
use crate::vectorfield::VectorField;

/// Leading part of `X[2]`; the t-independent tails are set to zero.
const X2: &str = "-t^3*Dt - (3/z*t^2*r + 3*(z-2)/z*mu*t*r^2*v^(-1))*Dr \
                  - 3*(1-z)/z*(v*t^2/2 - mu*r*t)*Dv \
                  - 3/z*x*t^2 + 6/z*mu*x*t*r*v^(-1)";

#[derive(Clone, Debug)]
pub struct NogoReport {
    pub z: Rational,
    /// Terms of `[X2, Y-1] - 3 Y1` with positive power of `t`.
    pub projection: VectorField,
    /// Componentwise value of the projection at `(t, r, v) = (1, 1, 1)` with all
    /// parameters set to one.
    pub sample: [f64; 4],
}

impl NogoReport {
    pub fn obstructed(&self) -> bool {
        !self.projection.is_zero()
    }
}

fn x2(z: &Rational, a: &Assignments) -> Result<VectorField, CatalogError> {
    Ok(a.apply_field(&Template::new(X2)?.vfield(Some(z), None)?)?)
}

fn positive_t(f: &VectorField) -> VectorField {
    let keep = |m: &crate::symexpr::BaseMonomial| m.t >= Rational::from_integer(1.into());
    VectorField::new(
        f.at.filter_terms(keep),
        f.ar.filter_terms(keep),
        f.av.filter_terms(keep),
        f.a0.filter_terms(keep),
    )
}

/// Projects `[X2, Y-1] - 3 Y1` (case A) onto monomials with t-exponent at least one.
///
/// `Y-1 = -v Dr` carries no `t`, so t-independent tails of `X2` cannot cancel
/// these terms; a nonzero projection means `X2` does not exist.
pub fn nogo_obstruction(z: &Rational, a: &Assignments) -> Result<NogoReport, CatalogError> {
    let rep = make_caseA(z, a)?;
    let x2 = x2(z, a)?;
    let r = x2.bracket(&rep.basis[3]).sub(&rep.basis[5].scale(&crate::symexpr::ParamRat::from_int(3)));
    let projection = positive_t(&r);
    let ones = |_| Some(1.0);
    let p = Point::new(1.0, 1.0, 1.0);
    let mut sample = [0.0; 4];
    for (s, c) in sample.iter_mut().zip(projection.components()) {
        *s = c.eval(p, &ones)?;
    }
    Ok(NogoReport {
        z: z.clone(),
        projection,
        sample,
    })
}

/// `[X2, X-1] - 3 X1` for the same leading part of `X2`.
pub fn lowering_defect(z: &Rational, a: &Assignments) -> Result<VectorField, CatalogError> {
    let rep = make_caseA(z, a)?;
    let x2 = x2(z, a)?;
    Ok(x2.bracket(&rep.basis[0]).sub(&rep.basis[2].scale(&crate::symexpr::ParamRat::from_int(3))))
}
