//! Coefficient-function ODEs of the force family `F = r^(1-2z) phi(u)`, `u = r^(z-1) v`.
//!
//! With `Phi(u) = (z-1) u^2 + phi(u)`:
//!
//! ```text
//! d12:  z u d + Phi d' + 2 mu x / z = 0
//! b12:  Phi^2 b'' + 3 z u Phi b' + z((z+1)u^2 - 2u phi' + 3 phi) b + ((2-z)u - phi') 2 mu / z = 0
//! b0:   Phi^2 b'' + z u Phi b' + (2 z Phi - z u Phi') b - 2 s Phi = 0
//! ```
//!
//! Solutions are fixed-step RK4 on the grid supplied by the caller. Each solution
//! records the residual of its defining equation at every grid point, with the
//! highest derivative taken from a five-point stencil on the integrator state.

mod numeric;
mod solvers;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use numeric::{fornberg_weights, Grid, NumericFn1D};
pub use solvers::{
    c12_from_b12, closed_b12_z2, closed_c12_z2, closed_d12_z2, fit_quadrature, quadrature_d12, solve_b0, solve_b0_from,
    solve_b12, solve_d12, B0Solutions, QuadratureFit,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoeffError {
    #[error("Phi(u) = (z-1)u^2 + phi(u) vanishes or changes sign near u = {u}")]
    Singular { u: f64 },
    #[error("integrand singular near u = {u}")]
    SingularIntegrand { u: f64 },
    #[error("grid: {0}")]
    BadGrid(String),
    #[error("u = {u} lies outside the domain ({lo}, {hi}) of phi")]
    Domain { u: f64, lo: f64, hi: f64 },
    #[error("z = {0} is not admissible here")]
    BadZ(String),
    #[error("non-finite value at u = {u}")]
    NonFinite { u: f64 },
}

type F64Fn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Real function of one variable on an open interval.
#[derive(Clone)]
pub struct ScalarFn {
    f: F64Fn,
    df: Option<F64Fn>,
    pub domain: (f64, f64),
}

/// Step of the centered difference used when no derivative is supplied.
pub const FD_STEP: f64 = 1e-5;

impl ScalarFn {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        ScalarFn {
            f: Arc::new(f),
            df: None,
            domain: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    pub fn with_derivative(mut self, df: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.df = Some(Arc::new(df));
        self
    }

    pub fn on(mut self, lo: f64, hi: f64) -> Self {
        self.domain = (lo, hi);
        self
    }

    pub fn constant(c: f64) -> Self {
        ScalarFn::new(move |_| c).with_derivative(|_| 0.0)
    }

    pub fn eval(&self, u: f64) -> f64 {
        (self.f)(u)
    }

    pub fn has_derivative(&self) -> bool {
        self.df.is_some()
    }

    /// Supplied derivative, or a centered difference with step [`FD_STEP`].
    pub fn derivative(&self, u: f64) -> f64 {
        match &self.df {
            Some(df) => df(u),
            None => (self.eval(u + FD_STEP) - self.eval(u - FD_STEP)) / (2.0 * FD_STEP),
        }
    }

    pub fn contains(&self, u: f64) -> bool {
        u > self.domain.0 && u < self.domain.1
    }

    pub(crate) fn check_domain(&self, u: f64) -> Result<(), CoeffError> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(CoeffError::Domain {
                u,
                lo: self.domain.0,
                hi: self.domain.1,
            })
        }
    }
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFn")
            .field("domain", &self.domain)
            .field("has_derivative", &self.df.is_some())
            .finish()
    }
}

/// Fixed-step classical Runge-Kutta over the points of `grid`.
pub fn rk4<const N: usize>(
    grid: &[f64],
    y0: [f64; N],
    f: impl Fn(f64, &[f64; N]) -> Result<[f64; N], CoeffError>,
) -> Result<Vec<[f64; N]>, CoeffError> {
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y);
    for w in grid.windows(2) {
        let (u, h) = (w[0], w[1] - w[0]);
        let axpy = |a: &[f64; N], s: f64, b: &[f64; N]| -> [f64; N] { std::array::from_fn(|i| a[i] + s * b[i]) };
        let k1 = f(u, &y)?;
        let k2 = f(u + h / 2.0, &axpy(&y, h / 2.0, &k1))?;
        let k3 = f(u + h / 2.0, &axpy(&y, h / 2.0, &k2))?;
        let k4 = f(u + h, &axpy(&y, h, &k3))?;
        y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        if y.iter().any(|x| !x.is_finite()) {
            return Err(CoeffError::NonFinite { u: w[1] });
        }
        out.push(y);
    }
    Ok(out)
}
