//! The conformal representations and their verification.
//!
//! Generators are stored in the order `X[-1], X[0], X[1], Y[-1], Y[0], Y[1]`
//! with the sign convention `X = -a Dt - b Dr - c Dv - d`.

mod nogo;
mod reps;
mod split;
mod system;
mod table;
mod text;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::exprparse::ParseError;
use crate::symexpr::{BaseMonomial, Expr, Param, ParamRat, Rational, SymError};
use crate::vectorfield::{VectorField, VfError};

pub use nogo::{lowering_defect, nogo_obstruction, NogoReport};
pub use reps::{
    make_caseA, make_caseB1, make_caseB2, make_example1, make_example2_z2, make_rep, make_standard,
    make_standard_n, RepKind,
};
pub use split::{split_isomorphism, split_isomorphism_numeric, NumericSplit, SplitWitness};
pub use reps::example2_coefficients_u;
pub use system::{verify_example1_system, verify_example2_odes_z2, SystemResidual};
pub use table::{verify_symmetries, verify_table, PairRecord, StructureTable, SymmetryCheck};

/// Labels of the six basis elements.
pub const BASIS_NAMES: [&str; 6] = ["X[-1]", "X[0]", "X[1]", "Y[-1]", "Y[0]", "Y[1]"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("mu = 0 is not supported")]
    ZeroMu,
    #[error("z = 0 is not admissible")]
    ZeroZ,
    #[error("case B1 is singular at z = 1: set A110=0 before z→1 (use caseA)")]
    CaseB1AtZ1,
    #[error("X_n, Y_n are only representable for n >= -1 (got {0})")]
    UnsupportedN(i64),
    #[error("q^2 + 4k vanishes: degenerate split")]
    DegenerateSplit,
    #[error("q^2 + 4k = {0} has no exact square root: no rational witness")]
    NoRationalWitness(String),
    #[error("parameter `{0}` needs a numeric value")]
    MissingValue(&'static str),
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Vf(#[from] VfError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Rational values for some parameters; unassigned parameters stay symbolic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignments(pub BTreeMap<Param, Rational>);

impl Assignments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: Param, value: Rational) -> Self {
        self.0.insert(p, value);
        self
    }

    pub fn get(&self, p: Param) -> Option<&Rational> {
        self.0.get(&p)
    }

    pub fn apply_expr(&self, e: &Expr) -> Result<Expr, SymError> {
        let mut e = e.clone();
        for (p, val) in &self.0 {
            e = e.subst_param(*p, &ParamRat::from_rational(val.clone()))?;
        }
        Ok(e)
    }

    pub fn apply_rat(&self, c: &ParamRat) -> Result<ParamRat, SymError> {
        let mut c = c.clone();
        for (p, val) in &self.0 {
            c = c.subst(*p, &ParamRat::from_rational(val.clone()))?;
        }
        Ok(c)
    }

    pub fn apply_field(&self, f: &VectorField) -> Result<VectorField, SymError> {
        let mut f = f.clone();
        for (p, val) in &self.0 {
            f = f.subst_param(*p, &ParamRat::from_rational(val.clone()))?;
        }
        Ok(f)
    }
}

/// What the construction predicts, used by the verifiers.
#[derive(Clone, Debug)]
pub struct Expected {
    pub k: ParamRat,
    pub q: ParamRat,
    /// Multiplier `lambda` and affine remainder `rho` of each basis element.
    pub multipliers: [(Expr, ParamRat); 6],
}

#[derive(Clone, Debug)]
pub struct Representation {
    pub name: String,
    pub z: Option<Rational>,
    /// Parameters of the construction, with their value when assigned.
    pub params: Vec<(Param, Option<Rational>)>,
    pub basis: [VectorField; 6],
    pub boltzmann: VectorField,
    /// Force `F(t, r, v)`; zero where absent.
    pub force: Expr,
    pub expected: Option<Expected>,
}

impl Representation {
    pub fn generator(&self, i: usize) -> &VectorField {
        &self.basis[i]
    }

    /// Index of a generator from its label (`X1`, `X[-1]`, `Y0`, ...).
    pub fn index_of(label: &str) -> Option<usize> {
        let s: String = label.chars().filter(|c| !matches!(c, '[' | ']' | ' ')).collect();
        let (fam, n) = s.split_at(s.len().min(1));
        let off = match fam {
            "X" | "x" => 0,
            "Y" | "y" => 3,
            _ => return None,
        };
        let n: i64 = n.parse().ok()?;
        (-1..=1).contains(&n).then(|| off + (n + 1) as usize)
    }
}

/// Maps a function of `u` (stored in the `v` slot) to `(t, r, v)` with `u = r^(z-1) v`.
pub fn u_to_trv(e: &Expr, z: &Rational) -> Expr {
    let zm1 = z - Rational::from_integer(1.into());
    e.map_monomials(|m| BaseMonomial::new(m.t.clone(), &m.r + &zm1 * &m.v, m.v.clone()))
}

/// Evaluates a parameter lookup from assignments only.
pub fn numeric_params(a: &Assignments) -> impl Fn(Param) -> Option<f64> + '_ {
    move |p| a.get(p).map(crate::symexpr::rational_to_f64)
}
