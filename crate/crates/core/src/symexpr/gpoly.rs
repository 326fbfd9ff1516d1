use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::param::{rational_to_f64, Param, ParamRat};
use super::{Rational, SymError};

/// Base variables of phase space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    R,
    V,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::T, Var::R, Var::V];

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::R => "r",
            Var::V => "v",
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `t^et r^er v^ev` with rational exponents. Ordered lexicographically on `(et, er, ev)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseMonomial {
    pub t: Rational,
    pub r: Rational,
    pub v: Rational,
}

impl BaseMonomial {
    pub fn one() -> Self {
        BaseMonomial {
            t: Rational::zero(),
            r: Rational::zero(),
            v: Rational::zero(),
        }
    }

    pub fn new(t: Rational, r: Rational, v: Rational) -> Self {
        BaseMonomial { t, r, v }
    }

    pub fn var(x: Var, e: Rational) -> Self {
        let mut m = Self::one();
        *m.exp_mut(x) = e;
        m
    }

    pub fn exp(&self, x: Var) -> &Rational {
        match x {
            Var::T => &self.t,
            Var::R => &self.r,
            Var::V => &self.v,
        }
    }

    fn exp_mut(&mut self, x: Var) -> &mut Rational {
        match x {
            Var::T => &mut self.t,
            Var::R => &mut self.r,
            Var::V => &mut self.v,
        }
    }

    pub fn is_one(&self) -> bool {
        self.t.is_zero() && self.r.is_zero() && self.v.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Self {
        BaseMonomial::new(&self.t + &o.t, &self.r + &o.r, &self.v + &o.v)
    }

    pub fn div(&self, o: &Self) -> Self {
        BaseMonomial::new(&self.t - &o.t, &self.r - &o.r, &self.v - &o.v)
    }

    pub fn inv(&self) -> Self {
        BaseMonomial::new(-&self.t, -&self.r, -&self.v)
    }

    pub fn pow(&self, e: &Rational) -> Self {
        BaseMonomial::new(&self.t * e, &self.r * e, &self.v * e)
    }

    fn gcd(&self, o: &Self) -> Self {
        BaseMonomial::new(
            self.t.clone().min(o.t.clone()),
            self.r.clone().min(o.r.clone()),
            self.v.clone().min(o.v.clone()),
        )
    }

    pub fn eval(&self, t: f64, r: f64, v: f64) -> Result<f64, SymError> {
        let mut acc = 1.0;
        for (x, val) in [(Var::T, t), (Var::R, r), (Var::V, v)] {
            acc *= real_pow(val, self.exp(x), x)?;
        }
        Ok(acc)
    }
}

fn real_pow(base: f64, e: &Rational, x: Var) -> Result<f64, SymError> {
    if e.is_zero() {
        return Ok(1.0);
    }
    if e.is_integer() {
        let n = e.to_integer();
        let n: i32 = i32::try_from(n).map_err(|_| SymError::Pole(format!("exponent of {x} too large")))?;
        if base == 0.0 && n < 0 {
            return Err(SymError::Pole(format!("{x} = 0 with exponent {n}")));
        }
        return Ok(base.powi(n));
    }
    if base < 0.0 {
        return Err(SymError::BranchCut {
            base,
            exponent: e.to_string(),
        });
    }
    if base == 0.0 {
        if e.is_negative() {
            return Err(SymError::Pole(format!("{x} = 0 with exponent {e}")));
        }
        return Ok(0.0);
    }
    Ok(base.powf(rational_to_f64(e)))
}

/// Sparse sum of base monomials with parameter-rational coefficients.
#[derive(Clone, Debug, Default)]
pub struct GPoly {
    terms: BTreeMap<BaseMonomial, ParamRat>,
}

impl PartialEq for GPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(other.terms.iter())
                .all(|((m1, c1), (m2, c2))| m1 == m2 && c1 == c2)
    }
}

impl GPoly {
    pub fn zero() -> Self {
        GPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(ParamRat::one())
    }

    pub fn constant(c: ParamRat) -> Self {
        Self::term(c, BaseMonomial::one())
    }

    pub fn term(c: ParamRat, m: BaseMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        GPoly { terms }
    }

    pub fn var(x: Var) -> Self {
        Self::term(ParamRat::one(), BaseMonomial::var(x, Rational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&BaseMonomial, &ParamRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &BaseMonomial) -> Option<&ParamRat> {
        self.terms.get(m)
    }

    pub fn leading(&self) -> Option<(&BaseMonomial, &ParamRat)> {
        self.terms.iter().next_back()
    }

    pub fn lowest(&self) -> Option<(&BaseMonomial, &ParamRat)> {
        self.terms.iter().next()
    }

    pub fn single_term(&self) -> Option<(&BaseMonomial, &ParamRat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// `Some(c)` when the polynomial is a parameter constant.
    pub fn as_constant(&self) -> Option<ParamRat> {
        match self.terms.len() {
            0 => Some(ParamRat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, m: BaseMonomial, c: ParamRat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        GPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = GPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_term(&self, c: &ParamRat, m: &BaseMonomial) -> Self {
        if c.is_zero() {
            return GPoly::zero();
        }
        GPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.mul(c))).collect(),
        }
    }

    pub fn scale(&self, c: &ParamRat) -> Self {
        self.mul_term(c, &BaseMonomial::one())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = GPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn diff(&self, x: Var) -> Self {
        let mut out = GPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(x);
            if e.is_zero() {
                continue;
            }
            let mut dm = m.clone();
            *dm.exp_mut(x) = e - Rational::one();
            out.add_term(dm, c.scale(e));
        }
        out
    }

    /// Componentwise minimum of exponents over all terms.
    pub fn monomial_content(&self) -> Option<BaseMonomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    /// Per-variable `(min, max)` exponents, `None` for the zero polynomial.
    fn exponent_box(&self) -> Option<[(Rational, Rational); 3]> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let mut b = Var::ALL.map(|x| (first.exp(x).clone(), first.exp(x).clone()));
        for m in it {
            for (i, x) in Var::ALL.iter().enumerate() {
                let e = m.exp(*x);
                if *e < b[i].0 {
                    b[i].0 = e.clone();
                } else if *e > b[i].1 {
                    b[i].1 = e.clone();
                }
            }
        }
        Some(b)
    }

    /// Exact quotient `self / f`, or `None` if `f` does not divide `self`.
    ///
    /// Extreme degrees in each variable add under multiplication, so every
    /// quotient monomial lies in the box `box(self) - box(f)`; the first one
    /// outside it proves non-divisibility.
    pub fn exact_div(&self, f: &GPoly) -> Option<GPoly> {
        let (lf_m, lf_c) = f.leading()?;
        if self.is_zero() {
            return Some(GPoly::zero());
        }
        let (sb, fb) = (self.exponent_box()?, f.exponent_box()?);
        let qbox: Vec<(Rational, Rational)> = sb
            .iter()
            .zip(&fb)
            .map(|(s, f)| (&s.0 - &f.0, &s.1 - &f.1))
            .collect();
        if qbox.iter().any(|(lo, hi)| lo > hi) {
            return None;
        }
        let inside = |m: &BaseMonomial| {
            Var::ALL
                .iter()
                .zip(&qbox)
                .all(|(x, (lo, hi))| m.exp(*x) >= lo && m.exp(*x) <= hi)
        };
        let mut rem = self.clone();
        let mut quot = GPoly::zero();
        loop {
            let Some((rm, rc)) = rem.leading() else {
                return Some(quot);
            };
            let qm = rm.div(lf_m);
            if !inside(&qm) {
                return None;
            }
            let qc = rc.div(lf_c).ok()?.neg();
            for (m, c) in &f.terms {
                rem.add_term(m.mul(&qm), c.mul(&qc));
            }
            quot.add_term(qm, qc.neg());
        }
    }

    pub fn map_coeffs(
        &self,
        mut g: impl FnMut(&ParamRat) -> Result<ParamRat, SymError>,
    ) -> Result<Self, SymError> {
        let mut out = GPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), g(c)?);
        }
        Ok(out)
    }

    /// Applies a monomial map. `g` must be multiplicative for products to be preserved.
    pub fn map_monomials(&self, mut g: impl FnMut(&BaseMonomial) -> BaseMonomial) -> Self {
        let mut out = GPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(g(m), c.clone());
        }
        out
    }

    pub fn max_param_exponent(&self) -> u16 {
        self.terms.values().map(|c| c.max_exponent()).max().unwrap_or(0)
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps: Vec<Param> = Vec::new();
        for c in self.terms.values() {
            for p in c.params() {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
        ps.sort();
        ps
    }

    pub fn eval(
        &self,
        t: f64,
        r: f64,
        v: f64,
        params: &dyn Fn(Param) -> Option<f64>,
    ) -> Result<f64, SymError> {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += c.eval(params)? * m.eval(t, r, v)?;
        }
        Ok(acc)
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&BaseMonomial) -> bool) -> Self {
        GPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}
