use rayon::prelude::*;

use super::{CatalogError, Representation, BASIS_NAMES};
use crate::symexpr::{Expr, ParamRat};
use crate::vectorfield::{expand_in_basis, symmetry_multiplier, BasisExpansion, SymmetryReport, VectorField};

/// Mode index `n` of basis element `i`.
fn mode(i: usize) -> i64 {
    (i % 3) as i64 - 1
}

fn is_y(i: usize) -> bool {
    i >= 3
}

fn index(y: bool, n: i64) -> usize {
    (n + 1) as usize + if y { 3 } else { 0 }
}

#[derive(Clone, Debug)]
pub struct PairRecord {
    pub i: usize,
    pub j: usize,
    /// Predicted `[B_i, B_j]` as basis coefficients.
    pub expected: Vec<(usize, ParamRat)>,
    /// Expansion of the computed bracket, when it lies in the span.
    pub computed: Option<BasisExpansion>,
    /// `computed - expected`.
    pub residual: VectorField,
    pub ok: bool,
}

impl PairRecord {
    pub fn label(&self) -> String {
        format!("[{}, {}]", BASIS_NAMES[self.i], BASIS_NAMES[self.j])
    }
}

#[derive(Clone, Debug)]
pub struct StructureTable {
    pub k: ParamRat,
    pub q: ParamRat,
    /// Whether `[Y0, Y-1]` was found to be exactly `k X[-1] + q Y[-1]`.
    pub inferred: bool,
    pub inference_remainder: VectorField,
    pub pairs: Vec<PairRecord>,
    pub ok: bool,
}

impl StructureTable {
    pub fn passed(&self) -> usize {
        self.pairs.iter().filter(|p| p.ok).count()
    }
}

/// Predicted bracket of basis elements `i < j` given `(k, q)`.
fn expected_pair(i: usize, j: usize, k: &ParamRat, q: &ParamRat) -> Vec<(usize, ParamRat)> {
    let (n, m) = (mode(i), mode(j));
    let s = n - m;
    if s == 0 || (n + m).abs() > 1 {
        return Vec::new();
    }
    let w = ParamRat::from_int(s);
    let out = match (is_y(i), is_y(j)) {
        (false, false) => vec![(index(false, n + m), w)],
        (false, true) => vec![(index(true, n + m), w)],
        (true, false) => vec![(index(true, n + m), w.neg())],
        (true, true) => vec![(index(false, n + m), w.mul(k)), (index(true, n + m), w.mul(q))],
    };
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

fn combination(basis: &[VectorField; 6], coeffs: &[(usize, ParamRat)]) -> VectorField {
    coeffs
        .iter()
        .fold(VectorField::zero(), |acc, (i, c)| acc.add(&basis[*i].scale(c)))
}

/// Infers `(k, q)` from `[Y0, Y-1]` and checks all 15 brackets against the table.
pub fn verify_table(rep: &Representation) -> Result<StructureTable, CatalogError> {
    let basis = &rep.basis;
    let w = basis[4].bracket(&basis[3]);
    let e = expand_in_basis(&w, basis)?;
    let k = e.coeff(0);
    let q = e.coeff(3);
    let stray = e
        .coefficients
        .iter()
        .any(|(i, c)| *i != 0 && *i != 3 && !c.is_zero());
    let inferred = e.in_span() && !stray;
    let inference_remainder = w.sub(&combination(basis, &[(0, k.clone()), (3, q.clone())]));

    let pairs_idx: Vec<(usize, usize)> = (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
    let pairs: Vec<PairRecord> = pairs_idx
        .par_iter()
        .map(|&(i, j)| {
            let c = basis[i].bracket(&basis[j]);
            let expected = expected_pair(i, j, &k, &q);
            let residual = c.sub(&combination(basis, &expected));
            let computed = expand_in_basis(&c, basis).ok().filter(|x| x.in_span());
            let ok = residual.is_zero();
            PairRecord {
                i,
                j,
                expected,
                computed,
                residual,
                ok,
            }
        })
        .collect();
    let ok = inferred && pairs.iter().all(|p| p.ok);
    Ok(StructureTable {
        k,
        q,
        inferred,
        inference_remainder,
        pairs,
        ok,
    })
}

#[derive(Clone, Debug)]
pub struct SymmetryCheck {
    pub index: usize,
    pub report: SymmetryReport,
    pub expected_lambda: Option<Expr>,
    pub expected_rho: Option<ParamRat>,
    /// `report.ok` and agreement with the predicted multiplier and remainder.
    pub ok: bool,
}

/// Checks every generator against the transport operator of `rep`.
pub fn verify_symmetries(rep: &Representation) -> Result<Vec<SymmetryCheck>, CatalogError> {
    let results: Vec<Result<SymmetryCheck, CatalogError>> = (0..6)
        .into_par_iter()
        .map(|i| {
            let report = symmetry_multiplier(&rep.boltzmann, &rep.basis[i])?;
            let (el, er) = match &rep.expected {
                Some(ex) => (Some(ex.multipliers[i].0.clone()), Some(ex.multipliers[i].1.clone())),
                None => (None, None),
            };
            let lambda_ok = el.as_ref().is_none_or(|l| *l == report.lambda);
            let rho_ok = match (&er, &report.rho) {
                (Some(e), Some(r)) => e == r,
                (None, Some(_)) => true,
                _ => false,
            };
            let ok = report.ok && lambda_ok && rho_ok;
            Ok(SymmetryCheck {
                index: i,
                report,
                expected_lambda: el,
                expected_rho: er,
                ok,
            })
        })
        .collect();
    results.into_iter().collect()
}
