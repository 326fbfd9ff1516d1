use std::ops;

use num_traits::{One, Zero};

use super::gpoly::{BaseMonomial, GPoly, Var};
use super::param::{Param, ParamRat};
use super::{Rational, SymError};

/// A point of the `(t, r, v)` phase space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub t: f64,
    pub r: f64,
    pub v: f64,
}

impl Point {
    pub fn new(t: f64, r: f64, v: f64) -> Self {
        Point { t, r, v }
    }
}

/// Exact symbolic function `num / prod(f_i^e_i)`.
///
/// Each denominator factor has at least two terms, no monomial content and
/// leading coefficient one. Numerator factors that divide a denominator factor
/// exactly are cancelled after every operation, so the numerator is empty iff
/// the function is identically zero.
#[derive(Clone, Debug)]
pub struct Expr {
    num: GPoly,
    den: Vec<(GPoly, u32)>,
}

impl Default for Expr {
    fn default() -> Self {
        Expr::zero()
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }
}

/// Splits a nonzero polynomial into `unit * factor` with the unit a single term.
fn split_unit(g: &GPoly) -> (ParamRat, BaseMonomial, Option<GPoly>) {
    let m = g.monomial_content().expect("nonzero polynomial");
    let (_, lc) = g.leading().expect("nonzero polynomial");
    let lc = lc.clone();
    if g.len() == 1 {
        return (lc, m, None);
    }
    let inv = lc.recip().expect("leading coefficient is nonzero");
    let f = g.mul_term(&inv, &m.inv());
    (lc, m, Some(f))
}

fn merge_factor(den: &mut Vec<(GPoly, u32)>, f: GPoly, e: u32) {
    if e == 0 {
        return;
    }
    for (g, k) in den.iter_mut() {
        if *g == f {
            *k += e;
            return;
        }
    }
    den.push((f, e));
}

impl Expr {
    pub fn zero() -> Self {
        Expr {
            num: GPoly::zero(),
            den: Vec::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_gpoly(GPoly::one())
    }

    pub fn from_gpoly(num: GPoly) -> Self {
        Expr { num, den: Vec::new() }
    }

    pub fn constant(c: ParamRat) -> Self {
        Self::from_gpoly(GPoly::constant(c))
    }

    pub fn rational(c: Rational) -> Self {
        Self::constant(ParamRat::from_rational(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(ParamRat::from_int(n))
    }

    pub fn param(p: Param) -> Self {
        Self::constant(ParamRat::param(p))
    }

    pub fn var(x: Var) -> Self {
        Self::from_gpoly(GPoly::var(x))
    }

    pub fn monomial(c: ParamRat, m: BaseMonomial) -> Self {
        Self::from_gpoly(GPoly::term(c, m))
    }

    /// `t^a r^b v^c` with unit coefficient.
    pub fn tv(a: Rational, b: Rational, c: Rational) -> Self {
        Self::monomial(ParamRat::one(), BaseMonomial::new(a, b, c))
    }

    pub fn numer(&self) -> &GPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(GPoly, u32)] {
        &self.den
    }

    /// Expanded denominator polynomial.
    pub fn denom(&self) -> GPoly {
        let mut d = GPoly::one();
        for (f, e) in &self.den {
            d = d.mul(&f.pow(*e));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    fn build(num: GPoly, den: Vec<(GPoly, u32)>) -> Self {
        let mut e = Expr { num, den };
        e.cancel();
        e
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.exact_div(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    pub fn neg(&self) -> Self {
        Expr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Expr::from_gpoly(self.num.add(&o.num));
        }
        let lcm = Expr::common_denominator([self, o]);
        let num = self.numer_over(&lcm).add(&o.numer_over(&lcm));
        Self::build(num, lcm)
    }

    /// Least common multiple of the factored denominators.
    pub fn common_denominator<'a>(exprs: impl IntoIterator<Item = &'a Expr>) -> Vec<(GPoly, u32)> {
        let mut lcm: Vec<(GPoly, u32)> = Vec::new();
        for x in exprs {
            for (f, e) in &x.den {
                match lcm.iter_mut().find(|(g, _)| g == f) {
                    Some((_, k)) => *k = (*k).max(*e),
                    None => lcm.push((f.clone(), *e)),
                }
            }
        }
        lcm
    }

    /// Numerator after rewriting over `den`, which must be a multiple of `self`'s denominator.
    pub fn numer_over(&self, den: &[(GPoly, u32)]) -> GPoly {
        let mut n = self.num.clone();
        for (f, e) in den {
            let have = self
                .den
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, k)| *k)
                .unwrap_or(0);
            if *e > have {
                n = n.mul(&f.pow(*e - have));
            }
        }
        n
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Expr::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &o.den {
            merge_factor(&mut den, f.clone(), *e);
        }
        Self::build(self.num.mul(&o.num), den)
    }

    pub fn scale(&self, c: &ParamRat) -> Self {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        let (lc, m, f) = split_unit(&self.num);
        let inv = lc.recip()?;
        let mut num = GPoly::term(inv, m.inv());
        for (g, e) in &self.den {
            num = num.mul(&g.pow(*e));
        }
        let den = f.map(|f| vec![(f, 1)]).unwrap_or_default();
        Ok(Self::build(num, den))
    }

    pub fn div(&self, o: &Self) -> Result<Self, SymError> {
        if o.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow_int(&self, n: i64) -> Result<Self, SymError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Expr::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Single-term view `c * m` of a polynomial expression.
    pub fn as_monomial(&self) -> Option<(&ParamRat, &BaseMonomial)> {
        if !self.den.is_empty() {
            return None;
        }
        self.num.single_term().map(|(m, c)| (c, m))
    }

    /// Rational power. Non-integer exponents are defined only for single
    /// terms whose coefficient is one (positive-branch convention).
    pub fn pow_rational(&self, e: &Rational) -> Option<Self> {
        if e.is_integer() {
            let n = i64::try_from(e.to_integer()).ok()?;
            return self.pow_int(n).ok();
        }
        let (c, m) = self.as_monomial()?;
        if !c.is_one() {
            return None;
        }
        Some(Expr::monomial(ParamRat::one(), m.pow(e)))
    }

    pub fn diff(&self, x: Var) -> Self {
        let dn = self.num.diff(x);
        let active: Vec<(usize, GPoly)> = self
            .den
            .iter()
            .enumerate()
            .filter_map(|(i, (f, _))| {
                let d = f.diff(x);
                (!d.is_zero()).then_some((i, d))
            })
            .collect();
        if active.is_empty() {
            return Self::build(dn, self.den.clone());
        }
        let prod_except = |skip: Option<usize>| {
            let mut p = GPoly::one();
            for (i, _) in &active {
                if Some(*i) != skip {
                    p = p.mul(&self.den[*i].0);
                }
            }
            p
        };
        let mut num = dn.mul(&prod_except(None));
        for (i, df) in &active {
            let e = self.den[*i].1 as i64;
            let term = self
                .num
                .mul(df)
                .mul(&prod_except(Some(*i)))
                .scale(&ParamRat::from_int(e));
            num = num.sub(&term);
        }
        let mut den = self.den.clone();
        for (i, _) in &active {
            den[*i].1 += 1;
        }
        Self::build(num, den)
    }

    fn rebuild(
        &self,
        mut g: impl FnMut(&GPoly) -> Result<GPoly, SymError>,
    ) -> Result<Self, SymError> {
        let mut out = Expr::from_gpoly(g(&self.num)?);
        for (f, e) in &self.den {
            let f2 = Expr::from_gpoly(g(f)?);
            if f2.is_zero() {
                return Err(SymError::Pole("denominator vanishes".into()));
            }
            out = out.div(&f2.pow_int(*e as i64)?)?;
        }
        Ok(out)
    }

    /// Substitutes a parameter by a parameter-rational value.
    pub fn subst_param(&self, p: Param, value: &ParamRat) -> Result<Self, SymError> {
        self.rebuild(|g| g.map_coeffs(|c| c.subst(p, value)))
    }

    /// Applies a multiplicative monomial map, e.g. a change of chart.
    pub fn map_monomials(&self, g: impl Fn(&BaseMonomial) -> BaseMonomial) -> Self {
        self.rebuild(|p| Ok(p.map_monomials(&g)))
            .expect("monomial maps do not create poles")
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps = self.num.params();
        for (f, _) in &self.den {
            for p in f.params() {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        ps.sort();
        ps
    }

    /// `Some(c)` if the expression does not depend on `t, r, v`.
    pub fn as_param_constant(&self) -> Option<ParamRat> {
        if self.is_zero() {
            return Some(ParamRat::zero());
        }
        if self.den.is_empty() {
            return self.num.as_constant();
        }
        if Var::ALL.iter().any(|x| !self.diff(*x).is_zero()) {
            return None;
        }
        let (_, a) = self.num.leading()?;
        let d = self.denom();
        let (_, b) = d.leading()?;
        a.div(b).ok()
    }

    pub fn is_param_constant(&self) -> bool {
        self.as_param_constant().is_some()
    }

    pub fn eval(
        &self,
        pt: Point,
        params: &dyn Fn(Param) -> Option<f64>,
    ) -> Result<f64, SymError> {
        let n = self.num.eval(pt.t, pt.r, pt.v, params)?;
        let mut d = 1.0;
        for (f, e) in &self.den {
            d *= f.eval(pt.t, pt.r, pt.v, params)?.powi(*e as i32);
        }
        if d == 0.0 {
            return Err(SymError::Pole(format!(
                "denominator vanishes at (t, r, v) = ({}, {}, {})",
                pt.t, pt.r, pt.v
            )));
        }
        Ok(n / d)
    }

    /// Keeps only numerator terms accepted by `keep`; intended for polynomial expressions.
    pub fn filter_terms(&self, keep: impl FnMut(&BaseMonomial) -> bool) -> Self {
        Self::build(self.num.filter_terms(keep), self.den.clone())
    }

    /// Largest exponent of `x` among numerator terms.
    pub fn max_exponent(&self, x: Var) -> Option<Rational> {
        self.num.terms().map(|(m, _)| m.exp(x).clone()).max()
    }

    pub fn max_param_exponent(&self) -> u16 {
        self.den
            .iter()
            .map(|(f, _)| f.max_param_exponent())
            .fold(self.num.max_param_exponent(), u16::max)
    }

    pub fn total_terms(&self) -> usize {
        self.num.len() + self.den.iter().map(|(f, _)| f.len()).sum::<usize>()
    }
}

impl From<Param> for Expr {
    fn from(p: Param) -> Self {
        Expr::param(p)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<ParamRat> for Expr {
    fn from(c: ParamRat) -> Self {
        Expr::constant(c)
    }
}

impl From<Rational> for Expr {
    fn from(c: Rational) -> Self {
        Expr::rational(c)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:path) => {
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                $f(self, o)
            }
        }
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                $f(&self, &o)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, o: &Expr) -> Expr {
                $f(&self, o)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, o: Expr) -> Expr {
                $f(self, &o)
            }
        }
    };
}

binop!(Add, add, Expr::add);
binop!(Sub, sub, Expr::sub);
binop!(Mul, mul, Expr::mul);

fn div_or_panic(a: &Expr, b: &Expr) -> Expr {
    a.div(b).expect("division by the zero expression")
}

// Panics when the divisor is zero, like integer division.
binop!(Div, div, div_or_panic);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
}

impl One for Expr {
    fn one() -> Self {
        Expr::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::{int, rat};

    fn t() -> Expr {
        Expr::var(Var::T)
    }
    fn r() -> Expr {
        Expr::var(Var::R)
    }
    fn v() -> Expr {
        Expr::var(Var::V)
    }

    #[test]
    fn rational_function_cancels() {
        let a = &t() + &r();
        let b = &t() - &r();
        let q = a.mul(&b).div(&b).unwrap();
        assert!(q.is_polynomial());
        assert_eq!(q, a);
    }

    #[test]
    fn quotient_rule() {
        // d/dv [1/(v^2+1)] = -2v/(v^2+1)^2
        let f = (&v() * &v() + Expr::one()).recip().unwrap();
        let df = f.diff(Var::V);
        let expect = (Expr::int(-2) * v()).mul(&f).mul(&f);
        assert_eq!(df, expect);
    }

    #[test]
    fn fractional_powers_and_chart_map() {
        let half = rat(1, 2);
        let s = v().pow_rational(&half).unwrap();
        assert_eq!(s.mul(&s), v());
        let u = Expr::tv(int(0), int(0), int(1));
        let mapped = u.map_monomials(|m| BaseMonomial::new(m.t.clone(), &m.v * int(1), m.v.clone()));
        assert_eq!(mapped, r() * v());
    }

    #[test]
    fn param_constant_detection() {
        let mu = Expr::param(Param::Mu);
        let a = (&mu * &t() + Expr::one()).div(&(&t() + &mu.recip().unwrap())).unwrap();
        assert_eq!(a.as_param_constant(), Some(ParamRat::param(Param::Mu)));
        assert!(t().as_param_constant().is_none());
    }

    #[test]
    fn eval_reports_poles() {
        let f = (&t() - &r()).recip().unwrap();
        let none = |_| None;
        assert!(matches!(f.eval(Point::new(1.0, 1.0, 1.0), &none), Err(SymError::Pole(_))));
        assert_eq!(f.eval(Point::new(2.0, 1.0, 1.0), &none).unwrap(), 1.0);
    }
}
