//! First-order differential operators `A_t Dt + A_r Dr + A_v Dv + A_0`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::symexpr::{BaseMonomial, Expr, Param, ParamRat, SymError, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VfError {
    #[error("operator has zero Dt component; cannot normalize the multiplier")]
    ZeroPivot,
    #[error("operator must have no scalar part")]
    ScalarPart,
    #[error("basis is degenerate (rank {rank} < {size})")]
    DegenerateBasis { rank: usize, size: usize },
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// `X = A_t Dt + A_r Dr + A_v Dv + A_0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VectorField {
    pub at: Expr,
    pub ar: Expr,
    pub av: Expr,
    pub a0: Expr,
}

impl VectorField {
    pub fn new(at: Expr, ar: Expr, av: Expr, a0: Expr) -> Self {
        VectorField { at, ar, av, a0 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The pure derivation `Dx`.
    pub fn d(x: Var) -> Self {
        let mut f = Self::zero();
        *f.component_mut(Some(x)) = Expr::one();
        f
    }

    pub fn scalar(a0: Expr) -> Self {
        VectorField {
            a0,
            ..Self::zero()
        }
    }

    /// Component for `Some(var)` or the scalar part for `None`.
    pub fn component(&self, x: Option<Var>) -> &Expr {
        match x {
            Some(Var::T) => &self.at,
            Some(Var::R) => &self.ar,
            Some(Var::V) => &self.av,
            None => &self.a0,
        }
    }

    pub fn component_mut(&mut self, x: Option<Var>) -> &mut Expr {
        match x {
            Some(Var::T) => &mut self.at,
            Some(Var::R) => &mut self.ar,
            Some(Var::V) => &mut self.av,
            None => &mut self.a0,
        }
    }

    pub fn components(&self) -> [&Expr; 4] {
        [&self.at, &self.ar, &self.av, &self.a0]
    }

    fn map(&self, mut g: impl FnMut(&Expr) -> Expr) -> Self {
        VectorField::new(g(&self.at), g(&self.ar), g(&self.av), g(&self.a0))
    }

    fn try_map(&self, mut g: impl FnMut(&Expr) -> Result<Expr, SymError>) -> Result<Self, SymError> {
        Ok(VectorField::new(g(&self.at)?, g(&self.ar)?, g(&self.av)?, g(&self.a0)?))
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField::new(&self.at + &o.at, &self.ar + &o.ar, &self.av + &o.av, &self.a0 + &o.a0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        VectorField::new(&self.at - &o.at, &self.ar - &o.ar, &self.av - &o.av, &self.a0 - &o.a0)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c)
    }

    /// Multiplies every component (including the scalar part) by `f`.
    pub fn mul_expr(&self, f: &Expr) -> Self {
        self.map(|c| c * f)
    }

    pub fn scale(&self, c: &ParamRat) -> Self {
        self.map(|x| x.scale(c))
    }

    /// Action of the derivation part on `f`.
    pub fn derive(&self, f: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for x in Var::ALL {
            let a = self.component(Some(x));
            if !a.is_zero() {
                acc = acc + a * f.diff(x);
            }
        }
        acc
    }

    /// `X f = A_t f_t + A_r f_r + A_v f_v + A_0 f`.
    pub fn apply(&self, f: &Expr) -> Expr {
        self.derive(f) + &self.a0 * f
    }

    /// Commutator `[self, o]`.
    pub fn bracket(&self, o: &Self) -> Self {
        let comp = |x: Option<Var>| self.derive(o.component(x)) - o.derive(self.component(x));
        VectorField::new(
            comp(Some(Var::T)),
            comp(Some(Var::R)),
            comp(Some(Var::V)),
            comp(None),
        )
    }

    pub fn subst_param(&self, p: Param, value: &ParamRat) -> Result<Self, SymError> {
        self.try_map(|c| c.subst_param(p, value))
    }

    pub fn map_monomials(&self, g: impl Fn(&BaseMonomial) -> BaseMonomial) -> Self {
        self.map(|c| c.map_monomials(&g))
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> = self.components().iter().flat_map(|c| c.params()).collect();
        ps.sort();
        ps.dedup();
        ps
    }
}

/// Outcome of checking `[L, X] = lambda L + rho`.
#[derive(Clone, Debug)]
pub struct SymmetryReport {
    pub lambda: Expr,
    /// Scalar part of the commutator when it is a parameter constant.
    pub rho: Option<ParamRat>,
    pub residual_r: Expr,
    pub residual_v: Expr,
    pub residual_scalar: Expr,
    pub ok: bool,
}

/// Extracts the multiplier of `X` with respect to the transport operator `L`.
pub fn symmetry_multiplier(l: &VectorField, x: &VectorField) -> Result<SymmetryReport, VfError> {
    if l.at.is_zero() {
        return Err(VfError::ZeroPivot);
    }
    if !l.a0.is_zero() {
        return Err(VfError::ScalarPart);
    }
    let c = l.bracket(x);
    let lambda = c.at.div(&l.at)?;
    let residual_r = &c.ar - &lambda * &l.ar;
    let residual_v = &c.av - &lambda * &l.av;
    let rho = c.a0.as_param_constant();
    let ok = residual_r.is_zero() && residual_v.is_zero() && rho.is_some();
    Ok(SymmetryReport {
        lambda,
        rho,
        residual_r,
        residual_v,
        residual_scalar: c.a0,
        ok,
    })
}

/// `W = sum c_i B_i + remainder`.
#[derive(Clone, Debug)]
pub struct BasisExpansion {
    pub coefficients: Vec<(usize, ParamRat)>,
    pub remainder: VectorField,
}

impl BasisExpansion {
    pub fn in_span(&self) -> bool {
        self.remainder.is_zero()
    }

    /// Coefficient of basis element `i` (zero when absent).
    pub fn coeff(&self, i: usize) -> ParamRat {
        self.coefficients
            .iter()
            .find(|(j, _)| *j == i)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(ParamRat::zero)
    }
}

/// Complexity of a coefficient, used to prefer cheap pivots.
fn weight(c: &ParamRat) -> usize {
    c.numer().len() + c.denom().len()
}

/// Expresses `w` in the span of `basis` over parameter-rational constants.
///
/// Denominators are cleared per component and monomial coefficients matched;
/// the resulting linear system is reduced exactly. Nonzero coefficients are
/// listed in basis order.
pub fn expand_in_basis(w: &VectorField, basis: &[VectorField]) -> Result<BasisExpansion, VfError> {
    let n = basis.len();
    let mut rows: Vec<(Vec<ParamRat>, ParamRat)> = Vec::new();
    for x in [Some(Var::T), Some(Var::R), Some(Var::V), None] {
        let exprs: Vec<&Expr> = basis
            .iter()
            .map(|b| b.component(x))
            .chain(std::iter::once(w.component(x)))
            .collect();
        if exprs.iter().all(|e| e.is_zero()) {
            continue;
        }
        let den = Expr::common_denominator(exprs.iter().copied());
        let polys: Vec<_> = exprs.iter().map(|e| e.numer_over(&den)).collect();
        let mut eqs: BTreeMap<BaseMonomial, (Vec<ParamRat>, ParamRat)> = BTreeMap::new();
        for (j, p) in polys.iter().enumerate() {
            for (m, c) in p.terms() {
                let row = eqs
                    .entry(m.clone())
                    .or_insert_with(|| (vec![ParamRat::zero(); n], ParamRat::zero()));
                if j < n {
                    row.0[j] = c.clone();
                } else {
                    row.1 = c.clone();
                }
            }
        }
        rows.extend(eqs.into_values());
    }

    // Gaussian elimination with cheapest nonzero pivot.
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; rows.len()];
    for col in 0..n {
        let pick = (0..rows.len())
            .filter(|&i| !used[i] && !rows[i].0[col].is_zero())
            .min_by_key(|&i| weight(&rows[i].0[col]));
        let Some(pr) = pick else { continue };
        used[pr] = true;
        let inv = rows[pr].0[col].recip()?;
        let (prow, prhs) = {
            let (r, b) = &rows[pr];
            (
                r.iter().map(|c| c.mul(&inv)).collect::<Vec<_>>(),
                b.mul(&inv),
            )
        };
        for (i, (r, b)) in rows.iter_mut().enumerate() {
            if i == pr || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for k in 0..n {
                if !prow[k].is_zero() {
                    r[k] = r[k].sub(&f.mul(&prow[k]));
                }
            }
            *b = b.sub(&f.mul(&prhs));
        }
        rows[pr] = (prow, prhs);
        pivots.push((col, pr));
    }
    if pivots.len() < n {
        return Err(VfError::DegenerateBasis {
            rank: pivots.len(),
            size: n,
        });
    }
    let mut coefficients = Vec::new();
    let mut remainder = w.clone();
    pivots.sort();
    for (col, pr) in pivots {
        let c = rows[pr].1.clone();
        if !c.is_zero() {
            remainder = remainder.sub(&basis[col].scale(&c));
            coefficients.push((col, c));
        }
    }
    Ok(BasisExpansion {
        coefficients,
        remainder,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Expr {
        Expr::var(Var::T)
    }
    fn r() -> Expr {
        Expr::var(Var::R)
    }

    #[test]
    fn lowering_bracket() {
        let x0 = VectorField::new(-t(), -r(), Expr::zero(), -Expr::param(Param::X));
        let xm1 = VectorField::new(Expr::int(-1), Expr::zero(), Expr::zero(), Expr::zero());
        assert_eq!(x0.bracket(&xm1), xm1);
        assert!(x0.bracket(&x0).is_zero());
    }

    #[test]
    fn expansion_and_remainder() {
        let b = vec![VectorField::d(Var::T), VectorField::d(Var::T).mul_expr(&t())];
        let w = b[0].scale(&ParamRat::param(Param::Mu)).sub(&b[1]);
        let e = expand_in_basis(&w, &b).unwrap();
        assert!(e.in_span());
        assert_eq!(e.coeff(0), ParamRat::param(Param::Mu));
        assert_eq!(e.coeff(1), ParamRat::from_int(-1));
        let cube = VectorField::d(Var::T).mul_expr(&(&t() * &t() * t()));
        assert!(!expand_in_basis(&cube, &b).unwrap().in_span());
        let dup = vec![b[0].clone(), b[0].clone()];
        assert!(matches!(expand_in_basis(&w, &dup), Err(VfError::DegenerateBasis { .. })));
    }
}
