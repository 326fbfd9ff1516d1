//! Polynomials and rational functions in the symbolic parameters.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Rational, SymError};

/// The fixed set of symbolic constants that may appear in coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    Mu,
    X,
    Gamma,
    K,
    Q,
    A12,
    A110,
    A100,
    B110,
    B100,
    D0,
    Phi0,
    B120,
    B121,
    Delta0,
    Alpha,
    Beta,
    Eps,
}

pub const NPARAMS: usize = 18;

impl Param {
    pub const ALL: [Param; NPARAMS] = [
        Param::Mu,
        Param::X,
        Param::Gamma,
        Param::K,
        Param::Q,
        Param::A12,
        Param::A110,
        Param::A100,
        Param::B110,
        Param::B100,
        Param::D0,
        Param::Phi0,
        Param::B120,
        Param::B121,
        Param::Delta0,
        Param::Alpha,
        Param::Beta,
        Param::Eps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Mu => "mu",
            Param::X => "x",
            Param::Gamma => "gamma",
            Param::K => "k",
            Param::Q => "q",
            Param::A12 => "A12",
            Param::A110 => "A110",
            Param::A100 => "A100",
            Param::B110 => "B110",
            Param::B100 => "B100",
            Param::D0 => "D0",
            Param::Phi0 => "phi0",
            Param::B120 => "b120",
            Param::B121 => "b121",
            Param::Delta0 => "delta0",
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::Eps => "eps",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.iter().copied().find(|p| p.name() == name)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponent vector over [`Param::ALL`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ParamExps([u16; NPARAMS]);

impl ParamExps {
    pub fn one() -> Self {
        ParamExps([0; NPARAMS])
    }

    pub fn single(p: Param, e: u16) -> Self {
        let mut v = [0; NPARAMS];
        v[p.index()] = e;
        ParamExps(v)
    }

    pub fn get(&self, p: Param) -> u16 {
        self.0[p.index()]
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn max_exponent(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        ParamExps(v)
    }

    fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Self) -> Self {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(other.0.iter()) {
            *a -= *b;
        }
        ParamExps(v)
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut v = self.0;
        for (a, b) in v.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        ParamExps(v)
    }

    fn all_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    fn halved(&self) -> Self {
        let mut v = self.0;
        for a in v.iter_mut() {
            *a /= 2;
        }
        ParamExps(v)
    }

    fn fmt_monomial(&self) -> Option<String> {
        let parts: Vec<String> = Param::ALL
            .iter()
            .filter_map(|&p| match self.get(p) {
                0 => None,
                1 => Some(p.name().to_string()),
                e => Some(format!("{}^{}", p.name(), e)),
            })
            .collect();
        if parts.is_empty() {
            None
        } else {
            Some(parts.join("*"))
        }
    }
}

/// Sparse polynomial in the parameters with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamExps, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(ParamExps::one(), c);
        }
        ParamPoly { terms }
    }

    pub fn param(p: Param) -> Self {
        Self::term(Rational::one(), ParamExps::single(p, 1))
    }

    pub fn term(c: Rational, e: ParamExps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamExps, &Rational)> {
        self.terms.iter()
    }

    /// `Some(c)` when the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest exponent of any single parameter.
    pub fn max_exponent(&self) -> u16 {
        self.terms.keys().map(|e| e.max_exponent()).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&ParamExps, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn params(&self) -> Vec<Param> {
        Param::ALL
            .iter()
            .copied()
            .filter(|&p| self.terms.keys().any(|e| e.get(p) > 0))
            .collect()
    }

    fn add_term(&mut self, e: ParamExps, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = ParamPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = ParamPoly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    fn mul_term(&self, e: &ParamExps, c: &Rational) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(k, a)| (k.mul(e), a * c)).collect(),
        }
    }

    /// Largest monomial dividing every term.
    fn monomial_content(&self) -> Option<ParamExps> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        Some(it.fold(first, |acc, e| acc.gcd(e)))
    }

    fn div_monomial(&self, m: &ParamExps) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(e, c)| (e.div(m), c.clone())).collect(),
        }
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (le, lc) = divisor.leading()?;
        let (le, lc) = (*le, lc.clone());
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((re, rc)) = rem.leading() {
            if !le.divides(re) {
                return None;
            }
            let qe = re.div(&le);
            let qc = rc / &lc;
            rem = rem.sub(&divisor.mul_term(&qe, &qc));
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Exact square root with positive leading coefficient, if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(ParamPoly::zero());
        }
        let (le, lc) = self.leading()?;
        if !le.all_even() {
            return None;
        }
        let c = rational_sqrt(lc)?;
        let root_e = le.halved();
        let mut root = ParamPoly::term(c.clone(), root_e);
        let two_lead = c * Rational::from_integer(2.into());
        let max_steps = 4 * self.terms.len() + 16;
        for _ in 0..max_steps {
            let rem = self.sub(&root.mul(&root));
            let Some((re, rc)) = rem.leading() else {
                return Some(root);
            };
            if !root_e.divides(re) {
                return None;
            }
            let ne = re.div(&root_e);
            if ne >= root_e {
                return None;
            }
            root.add_term(ne, rc / &two_lead);
        }
        None
    }

    /// Substitutes `p := value`.
    pub fn subst(&self, p: Param, value: &ParamRat) -> ParamRat {
        let mut out = ParamRat::zero();
        for (e, c) in &self.terms {
            let n = e.get(p);
            let mut rest = *e;
            rest.0[p.index()] = 0;
            let base = ParamRat::from_poly(ParamPoly::term(c.clone(), rest));
            out = out.add(&base.mul(&value.pow(n as i32).expect("nonnegative power")));
        }
        out
    }

    pub fn eval(&self, values: &dyn Fn(Param) -> Option<f64>) -> Result<f64, SymError> {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut term = rational_to_f64(c);
            for p in Param::ALL {
                let k = e.get(p);
                if k > 0 {
                    let x = values(p).ok_or(SymError::MissingParam(p.name()))?;
                    term *= x.powi(k as i32);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    fn fmt_terms(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match e.fmt_monomial() {
                None => write!(f, "{}", a)?,
                Some(m) if a.is_one() => f.write_str(&m)?,
                Some(m) => write!(f, "{}*{}", a, m)?,
            }
        }
        Ok(())
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_terms(f)
    }
}

pub fn rational_to_f64(c: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

fn rational_sqrt(c: &Rational) -> Option<Rational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Quotient of two parameter polynomials.
///
/// Not canonical: equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct ParamRat {
    num: ParamPoly,
    den: ParamPoly,
}

impl PartialEq for ParamRat {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl ParamRat {
    pub fn zero() -> Self {
        ParamRat {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(ParamPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamRat {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn param(p: Param) -> Self {
        Self::from_poly(ParamPoly::param(p))
    }

    /// Builds `num/den` and normalizes it.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(ParamRat { num, den }.normalized())
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// `Some(c)` when the value is a plain rational number.
    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn max_exponent(&self) -> u16 {
        self.num.max_exponent().max(self.den.max_exponent())
    }

    pub fn params(&self) -> Vec<Param> {
        let mut ps = self.num.params();
        for p in self.den.params() {
            if !ps.contains(&p) {
                ps.push(p);
            }
        }
        ps.sort();
        ps
    }

    fn normalized(self) -> Self {
        let ParamRat { mut num, mut den } = self;
        if num.is_zero() {
            return ParamRat::zero();
        }
        if let (Some(a), Some(b)) = (num.monomial_content(), den.monomial_content()) {
            let g = a.gcd(&b);
            if !g.is_one() {
                num = num.div_monomial(&g);
                den = den.div_monomial(&g);
            }
        }
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if den.is_one() {
            return ParamRat { num, den };
        }
        if den.len() > 1 || num.len() > 1 {
            if let Some(q) = num.exact_div(&den) {
                return ParamRat {
                    num: q,
                    den: ParamPoly::one(),
                };
            }
        }
        ParamRat { num, den }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return ParamRat {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .normalized();
        }
        if let Some(q) = self.den.exact_div(&other.den) {
            return ParamRat {
                num: self.num.add(&other.num.mul(&q)),
                den: self.den.clone(),
            }
            .normalized();
        }
        if let Some(q) = other.den.exact_div(&self.den) {
            return ParamRat {
                num: self.num.mul(&q).add(&other.num),
                den: other.den.clone(),
            }
            .normalized();
        }
        ParamRat {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn neg(&self) -> Self {
        ParamRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ParamRat::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return ParamRat {
                num: self.num.mul(&other.num),
                den: ParamPoly::one(),
            };
        }
        // cross-cancel before multiplying out
        let (mut n1, mut d2) = (self.num.clone(), other.den.clone());
        if d2.len() > 1 {
            if let Some(q) = n1.exact_div(&d2) {
                n1 = q;
                d2 = ParamPoly::one();
            }
        }
        let (mut n2, mut d1) = (other.num.clone(), self.den.clone());
        if d1.len() > 1 {
            if let Some(q) = n2.exact_div(&d1) {
                n2 = q;
                d1 = ParamPoly::one();
            }
        }
        ParamRat {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        }
        .normalized()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return ParamRat::zero();
        }
        ParamRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self, SymError> {
        ParamRat::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Result<Self, SymError> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, n: i32) -> Result<Self, SymError> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(ParamRat {
            num: base.num.pow(k),
            den: base.den.pow(k),
        }
        .normalized())
    }

    /// Exact square root when numerator and denominator are perfect squares.
    pub fn sqrt(&self) -> Option<Self> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        ParamRat::new(n, d).ok()
    }

    pub fn subst(&self, p: Param, value: &ParamRat) -> Result<Self, SymError> {
        self.num.subst(p, value).div(&self.den.subst(p, value))
    }

    pub fn eval(&self, values: &dyn Fn(Param) -> Option<f64>) -> Result<f64, SymError> {
        let d = self.den.eval(values)?;
        if d == 0.0 {
            return Err(SymError::Pole(format!("parameter denominator {}", self.den)));
        }
        Ok(self.num.eval(values)? / d)
    }
}

impl fmt::Display for ParamRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den = if self.den.len() > 1 || self.den.as_constant().is_none() {
            format!("({})", self.den)
        } else {
            self.den.to_string()
        };
        write!(f, "{}/{}", num, den)
    }
}

impl From<Param> for ParamRat {
    fn from(p: Param) -> Self {
        ParamRat::param(p)
    }
}

impl From<i64> for ParamRat {
    fn from(n: i64) -> Self {
        ParamRat::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: Param) -> ParamRat {
        ParamRat::param(x)
    }

    #[test]
    fn monomial_content_cancels() {
        let mu = p(Param::Mu);
        let k = p(Param::K);
        let a = k.sub(&mu.mul(&mu)).div(&mu).unwrap();
        let b = a.mul(&mu);
        assert_eq!(b, k.sub(&mu.mul(&mu)));
        assert!(b.denom().is_one());
    }

    #[test]
    fn sqrt_of_perfect_square() {
        let mu = p(Param::Mu);
        let one = ParamRat::one();
        // (1-mu)^2 + 4 mu = (1+mu)^2
        let q = one.sub(&mu);
        let disc = q.mul(&q).add(&mu.scale(&Rational::from_integer(4.into())));
        let s = disc.sqrt().unwrap();
        assert_eq!(s, one.add(&mu));
        assert!(mu.scale(&Rational::from_integer(4.into())).sqrt().is_none());
    }

    #[test]
    fn exact_division() {
        let mu = ParamPoly::param(Param::Mu);
        let one = ParamPoly::one();
        let a = mu.add(&one).mul(&mu.sub(&one));
        assert_eq!(a.exact_div(&mu.add(&one)), Some(mu.sub(&one)));
        assert_eq!(a.exact_div(&mu.add(&mu)), None);
    }

    #[test]
    fn common_denominators_stay_small() {
        let mu = p(Param::Mu);
        let den = ParamRat::one().add(&mu);
        let a = ParamRat::param(Param::K).div(&den).unwrap();
        let s = a.add(&a).add(&a);
        assert_eq!(s.denom().len(), 2);
    }

    #[test]
    fn zero_denominator_is_error() {
        assert!(ParamRat::one().div(&ParamRat::zero()).is_err());
    }
}
