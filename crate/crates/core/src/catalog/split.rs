//! Decoupling of the six-dimensional algebra into two commuting copies.

use super::{CatalogError, Representation};
use crate::symexpr::{Param, ParamRat, Point, SymError};
use crate::vectorfield::VectorField;

/// Exact witness `alpha beta = k`, `alpha - beta = q`.
#[derive(Clone, Debug)]
pub struct SplitWitness {
    pub alpha: ParamRat,
    pub beta: ParamRat,
    /// `ell_n = (beta X_n + Y_n)/(alpha + beta)` for `n = -1, 0, 1`.
    pub ell: [VectorField; 3],
    /// `ellbar_n = (alpha X_n - Y_n)/(alpha + beta)`.
    pub ell_bar: [VectorField; 3],
    pub commute: bool,
    pub ell_closes: bool,
    pub ell_bar_closes: bool,
}

impl SplitWitness {
    pub fn ok(&self) -> bool {
        self.commute && self.ell_closes && self.ell_bar_closes
    }
}

fn witt_closes(f: &[VectorField; 3]) -> bool {
    for n in -1i64..=1 {
        for m in -1i64..=1 {
            let b = f[(n + 1) as usize].bracket(&f[(m + 1) as usize]);
            let expect = if (n + m).abs() <= 1 {
                f[(n + m + 1) as usize].scale(&ParamRat::from_int(n - m))
            } else {
                VectorField::zero()
            };
            if !b.sub(&expect).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Solves `alpha beta = k`, `alpha - beta = q` exactly and verifies the split on `rep`.
pub fn split_isomorphism(
    k: &ParamRat,
    q: &ParamRat,
    rep: &Representation,
) -> Result<SplitWitness, CatalogError> {
    let disc = q.mul(q).add(&k.scale(&crate::symexpr::int(4)));
    if disc.is_zero() {
        return Err(CatalogError::DegenerateSplit);
    }
    let s = disc
        .sqrt()
        .ok_or_else(|| CatalogError::NoRationalWitness(disc.to_string()))?;
    let half = ParamRat::from_rational(crate::symexpr::rat(1, 2));
    let alpha = q.add(&s).mul(&half);
    let beta = alpha.sub(q);
    let inv = s.recip()?;
    let x = &rep.basis[..3];
    let y = &rep.basis[3..];
    let ell: [VectorField; 3] =
        std::array::from_fn(|i| x[i].scale(&beta).add(&y[i]).scale(&inv));
    let ell_bar: [VectorField; 3] =
        std::array::from_fn(|i| x[i].scale(&alpha).sub(&y[i]).scale(&inv));
    let commute = ell
        .iter()
        .all(|a| ell_bar.iter().all(|b| a.bracket(b).is_zero()));
    let ell_closes = witt_closes(&ell);
    let ell_bar_closes = witt_closes(&ell_bar);
    Ok(SplitWitness {
        alpha,
        beta,
        ell,
        ell_bar,
        commute,
        ell_closes,
        ell_bar_closes,
    })
}

/// Floating-point split used when `q^2 + 4k` has no exact root.
#[derive(Clone, Debug)]
pub struct NumericSplit {
    pub alpha: f64,
    pub beta: f64,
    /// Largest component of any commutator defect over the test points, relative
    /// to the size of the brackets involved.
    pub max_residual: f64,
    pub points_used: usize,
}

/// Evaluates `sum c_i F_i` componentwise at `p`.
fn eval_combo(
    terms: &[(f64, &VectorField)],
    p: Point,
    vals: &dyn Fn(Param) -> Option<f64>,
) -> Result<([f64; 4], f64), SymError> {
    let mut out = [0.0; 4];
    let mut scale: f64 = 0.0;
    for (c, f) in terms {
        for (slot, comp) in out.iter_mut().zip(f.components()) {
            let x = comp.eval(p, vals)?;
            *slot += c * x;
            scale = scale.max((c * x).abs());
        }
    }
    Ok((out, scale))
}

/// Numeric fallback: builds `alpha, beta` in floating point from parameter values and
/// checks the split brackets at the given points using exact brackets of the basis.
pub fn split_isomorphism_numeric(
    k: &ParamRat,
    q: &ParamRat,
    rep: &Representation,
    vals: &dyn Fn(Param) -> Option<f64>,
    points: &[Point],
) -> Result<NumericSplit, CatalogError> {
    let kf = k.eval(vals)?;
    let qf = q.eval(vals)?;
    let disc = qf * qf + 4.0 * kf;
    if disc <= 0.0 {
        return Err(CatalogError::DegenerateSplit);
    }
    let s = disc.sqrt();
    let alpha = (qf + s) / 2.0;
    let beta = alpha - qf;
    let b = &rep.basis;
    let br: Vec<Vec<VectorField>> = (0..6)
        .map(|i| (0..6).map(|j| b[i].bracket(&b[j])).collect())
        .collect();
    let xi = |n: i64| (n + 1) as usize;
    let yi = |n: i64| (n + 4) as usize;
    let mut max_residual: f64 = 0.0;
    let mut used = 0;
    for &p in points {
        let mut point_ok = true;
        let mut local: f64 = 0.0;
        for n in -1i64..=1 {
            for m in -1i64..=1 {
                // [ell_n, ellbar_m] (alpha + beta)^2
                let mixed = [
                    (alpha * beta, &br[xi(n)][xi(m)]),
                    (-beta, &br[xi(n)][yi(m)]),
                    (alpha, &br[yi(n)][xi(m)]),
                    (-1.0, &br[yi(n)][yi(m)]),
                ];
                // [ell_n, ell_m] (alpha+beta)^2 - (n-m)(alpha+beta) ell_{n+m}(alpha+beta)
                let nm = (n - m) as f64 * s;
                let mut ell = vec![
                    (beta * beta, &br[xi(n)][xi(m)]),
                    (beta, &br[xi(n)][yi(m)]),
                    (beta, &br[yi(n)][xi(m)]),
                    (1.0, &br[yi(n)][yi(m)]),
                ];
                let mut ell_bar = vec![
                    (alpha * alpha, &br[xi(n)][xi(m)]),
                    (-alpha, &br[xi(n)][yi(m)]),
                    (-alpha, &br[yi(n)][xi(m)]),
                    (1.0, &br[yi(n)][yi(m)]),
                ];
                if (n + m).abs() <= 1 {
                    ell.push((-nm * beta, &b[xi(n + m)]));
                    ell.push((-nm, &b[yi(n + m)]));
                    ell_bar.push((-nm * alpha, &b[xi(n + m)]));
                    ell_bar.push((nm, &b[yi(n + m)]));
                }
                for combo in [&mixed[..], &ell[..], &ell_bar[..]] {
                    match eval_combo(combo, p, vals) {
                        Ok((v, sc)) => {
                            let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                            local = local.max(m / sc.max(1.0));
                        }
                        Err(_) => point_ok = false,
                    }
                }
            }
        }
        if point_ok {
            used += 1;
            max_residual = max_residual.max(local);
        }
    }
    Ok(NumericSplit {
        alpha,
        beta,
        max_residual,
        points_used: used,
    })
}
