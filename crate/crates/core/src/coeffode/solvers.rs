use super::numeric::{Grid, NumericFn1D};
use super::{rk4, CoeffError, ScalarFn};
use crate::symexpr::{rational_to_f64, Rational};

/// `Phi(u) = (z-1) u^2 + phi(u)` with a fixed sign on the integration range.
struct BigPhi<'a> {
    z: f64,
    phi: &'a ScalarFn,
    sign: f64,
}

impl<'a> BigPhi<'a> {
    fn raw(z: f64, phi: &ScalarFn, u: f64) -> f64 {
        (z - 1.0) * u * u + phi.eval(u)
    }

    /// Checks every grid point and interval midpoint (the RK4 stage abscissae).
    fn new(z: f64, phi: &'a ScalarFn, grid: &Grid) -> Result<Self, CoeffError> {
        let g = grid.points();
        let first = Self::raw(z, phi, g[0]);
        let sign = if first > 0.0 { 1.0 } else { -1.0 };
        let s = BigPhi { z, phi, sign };
        s.value(g[0])?;
        for w in g.windows(2) {
            s.value(0.5 * (w[0] + w[1]))?;
            s.value(w[1])?;
        }
        Ok(s)
    }

    fn value(&self, u: f64) -> Result<f64, CoeffError> {
        self.phi.check_domain(u)?;
        let p = self.phi.eval(u);
        let v = (self.z - 1.0) * u * u + p;
        let tol = 1e-12 * (1.0 + ((self.z - 1.0) * u * u).abs() + p.abs());
        if !(v * self.sign > tol) {
            return Err(CoeffError::Singular { u });
        }
        Ok(v)
    }

    /// `(Phi, Phi', phi, phi')`.
    fn all(&self, u: f64) -> Result<(f64, f64, f64, f64), CoeffError> {
        let v = self.value(u)?;
        let dp = self.phi.derivative(u);
        Ok((v, 2.0 * (self.z - 1.0) * u + dp, self.phi.eval(u), dp))
    }
}

fn z_f64(z: &Rational) -> Result<f64, CoeffError> {
    if num_traits::Zero::is_zero(z) {
        return Err(CoeffError::BadZ(z.to_string()));
    }
    Ok(rational_to_f64(z))
}

/// Integrates `z u d + Phi d' + 2 mu x / z = 0` from `d(grid[0]) = anchor`.
pub fn solve_d12(
    z: &Rational,
    phi: &ScalarFn,
    mu: f64,
    x: f64,
    grid: &Grid,
    anchor: f64,
) -> Result<NumericFn1D, CoeffError> {
    let zf = z_f64(z)?;
    let big = BigPhi::new(zf, phi, grid)?;
    let src = 2.0 * mu * x / zf;
    let rhs = |u: f64, y: &[f64; 1]| -> Result<[f64; 1], CoeffError> {
        let p = big.value(u)?;
        Ok([-(zf * u * y[0] + src) / p])
    };
    let states = rk4(grid.points(), [anchor], rhs)?;
    let values: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let g = grid.points();
    let mut derivs = Vec::with_capacity(g.len());
    let mut res = Vec::with_capacity(g.len());
    for (i, &u) in g.iter().enumerate() {
        derivs.push(rhs(u, &states[i])?[0]);
        let p = big.value(u)?;
        res.push(zf * u * values[i] + p * grid.stencil_derivative(&values, i, 1) + src);
    }
    Ok(NumericFn1D::new(grid.clone(), values, derivs, res))
}

/// Integrates the `b12` equation from `(b, b')` at `grid[0]`.
pub fn solve_b12(
    z: &Rational,
    phi: &ScalarFn,
    mu: f64,
    grid: &Grid,
    init: (f64, f64),
) -> Result<NumericFn1D, CoeffError> {
    let zf = z_f64(z)?;
    let big = BigPhi::new(zf, phi, grid)?;
    // b'' expressed through (b, b')
    let lower = |u: f64, b: f64, db: f64| -> Result<f64, CoeffError> {
        let (p, _, ph, dph) = big.all(u)?;
        Ok(3.0 * zf * u * p * db
            + zf * ((zf + 1.0) * u * u - 2.0 * u * dph + 3.0 * ph) * b
            + ((2.0 - zf) * u - dph) * 2.0 * mu / zf)
    };
    let rhs = |u: f64, y: &[f64; 2]| -> Result<[f64; 2], CoeffError> {
        let p = big.value(u)?;
        Ok([y[1], -lower(u, y[0], y[1])? / (p * p)])
    };
    let states = rk4(grid.points(), [init.0, init.1], rhs)?;
    finish_second_order(grid, &states, |u| big.value(u), lower)
}

fn finish_second_order(
    grid: &Grid,
    states: &[[f64; 2]],
    phi: impl Fn(f64) -> Result<f64, CoeffError>,
    lower: impl Fn(f64, f64, f64) -> Result<f64, CoeffError>,
) -> Result<NumericFn1D, CoeffError> {
    let values: Vec<f64> = states.iter().map(|s| s[0]).collect();
    let derivs: Vec<f64> = states.iter().map(|s| s[1]).collect();
    let mut res = Vec::with_capacity(values.len());
    for (i, &u) in grid.points().iter().enumerate() {
        let p = phi(u)?;
        let d2 = grid.stencil_derivative(&derivs, i, 1);
        res.push(p * p * d2 + lower(u, values[i], derivs[i])?);
    }
    Ok(NumericFn1D::new(grid.clone(), values, derivs, res))
}

/// Two solutions of the `b0` equation and their Wronskian.
#[derive(Clone, Debug)]
pub struct B0Solutions {
    /// Started from `(b, b') = (1, 0)`.
    pub first: NumericFn1D,
    /// Started from `(0, 1)`.
    pub second: NumericFn1D,
    /// `W = b1 b2' - b1' b2`; its residual column compares the stencil derivative
    /// of `W` with the value implied by the equation.
    pub wronskian: NumericFn1D,
    pub min_abs_wronskian: f64,
    /// Set when `|W|` drops below `1e-10` somewhere on the grid.
    pub dependent: bool,
}

fn b0_parts<'a>(
    z: &Rational,
    phi: &'a ScalarFn,
    grid: &Grid,
) -> Result<(f64, BigPhi<'a>), CoeffError> {
    let zf = z_f64(z)?;
    Ok((zf, BigPhi::new(zf, phi, grid)?))
}

/// One solution of `Phi^2 b'' + z u Phi b' + (2 z Phi - z u Phi') b - 2 s Phi = 0`.
pub fn solve_b0_from(
    z: &Rational,
    phi: &ScalarFn,
    s: f64,
    grid: &Grid,
    init: (f64, f64),
) -> Result<NumericFn1D, CoeffError> {
    let (zf, big) = b0_parts(z, phi, grid)?;
    b0_single(zf, &big, s, grid, init)
}

fn b0_single(zf: f64, big: &BigPhi<'_>, s: f64, grid: &Grid, init: (f64, f64)) -> Result<NumericFn1D, CoeffError> {
    let lower = |u: f64, b: f64, db: f64| -> Result<f64, CoeffError> {
        let (p, dp, _, _) = big.all(u)?;
        Ok(zf * u * p * db + (2.0 * zf * p - zf * u * dp) * b - 2.0 * s * p)
    };
    let rhs = |u: f64, y: &[f64; 2]| -> Result<[f64; 2], CoeffError> {
        let p = big.value(u)?;
        Ok([y[1], -lower(u, y[0], y[1])? / (p * p)])
    };
    let states = rk4(grid.points(), [init.0, init.1], rhs)?;
    finish_second_order(grid, &states, |u| big.value(u), lower)
}

/// Solutions from `(1, 0)` and `(0, 1)` at the left end, with their Wronskian.
pub fn solve_b0(z: &Rational, phi: &ScalarFn, s: f64, grid: &Grid) -> Result<B0Solutions, CoeffError> {
    let (zf, big) = b0_parts(z, phi, grid)?;
    let (first, second) = rayon::join(
        || b0_single(zf, &big, s, grid, (1.0, 0.0)),
        || b0_single(zf, &big, s, grid, (0.0, 1.0)),
    );
    let (first, second) = (first?, second?);
    let n = grid.len();
    let mut w = Vec::with_capacity(n);
    let mut dw = Vec::with_capacity(n);
    for i in 0..n {
        let u = grid.points()[i];
        let (a, da) = (first.values[i], first.derivatives[i]);
        let (b, db) = (second.values[i], second.derivatives[i]);
        w.push(a * db - da * b);
        let (p, dp, _, _) = big.all(u)?;
        let dd = |y: f64, dy: f64| -(zf * u * p * dy + (2.0 * zf * p - zf * u * dp) * y - 2.0 * s * p) / (p * p);
        dw.push(a * dd(b, db) - dd(a, da) * b);
    }
    let res: Vec<f64> = (0..n).map(|i| grid.stencil_derivative(&w, i, 1) - dw[i]).collect();
    let min_abs_wronskian = w.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    Ok(B0Solutions {
        first,
        second,
        wronskian: NumericFn1D::new(grid.clone(), w, dw, res),
        min_abs_wronskian,
        dependent: min_abs_wronskian < 1e-10,
    })
}

/// `c12 = 2 z u b12 + Phi b12' + 2 mu / z` on the grid of `b12`, with `b12'` from the
/// integrator state.
pub fn c12_from_b12(z: &Rational, phi: &ScalarFn, mu: f64, b12: &NumericFn1D) -> Result<Vec<f64>, CoeffError> {
    let zf = z_f64(z)?;
    let big = BigPhi::new(zf, phi, &b12.grid)?;
    b12.grid
        .points()
        .iter()
        .enumerate()
        .map(|(i, &u)| Ok(2.0 * zf * u * b12.values[i] + big.value(u)? * b12.derivatives[i] + 2.0 * mu / zf))
        .collect()
}

struct QuadParts {
    /// Prefactor `Phi^(z/(2(1-z)))`.
    pre: Vec<f64>,
    dpre: Vec<f64>,
    /// `int_base^u Phi^((z-2)/(2(1-z)))`.
    integral: Vec<f64>,
    integrand: Vec<f64>,
}

fn quad_parts(z: &Rational, phi0: f64, base: f64, grid: &Grid) -> Result<(f64, QuadParts), CoeffError> {
    let zf = z_f64(z)?;
    if num_traits::One::is_one(z) {
        return Err(CoeffError::BadZ(z.to_string()));
    }
    let a = zf / (2.0 * (1.0 - zf));
    let b = (zf - 2.0) / (2.0 * (1.0 - zf));
    let big = |u: f64| (zf - 1.0) * u * u + phi0;
    let integrand = |u: f64| -> Result<f64, CoeffError> {
        let p = big(u);
        if !(p > 0.0) {
            return Err(CoeffError::SingularIntegrand { u });
        }
        Ok(p.powf(b))
    };
    let simpson = |lo: f64, hi: f64| -> Result<f64, CoeffError> {
        let m = (2.0 * ((hi - lo).abs() / 2e-3).ceil()).max(8.0) as usize;
        let h = (hi - lo) / m as f64;
        let mut acc = integrand(lo)? + integrand(hi)?;
        for k in 1..m {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * integrand(lo + h * k as f64)?;
        }
        Ok(acc * h / 3.0)
    };
    let g = grid.points();
    let mut integral = Vec::with_capacity(g.len());
    let mut acc = simpson(base, g[0])?;
    integral.push(acc);
    for w in g.windows(2) {
        acc += simpson(w[0], w[1])?;
        integral.push(acc);
    }
    let mut pre = Vec::with_capacity(g.len());
    let mut dpre = Vec::with_capacity(g.len());
    let mut integ = Vec::with_capacity(g.len());
    for &u in g {
        let p = big(u);
        integ.push(integrand(u)?);
        pre.push(p.powf(a));
        dpre.push(a * 2.0 * (zf - 1.0) * u * p.powf(a - 1.0));
    }
    Ok((
        zf,
        QuadParts {
            pre,
            dpre,
            integral,
            integrand: integ,
        },
    ))
}

/// Product form `d12 = -delta0 Phi^(z/(2(1-z))) int_base^u Phi^((z-2)/(2(1-z)))` with
/// `Phi = (z-1) u^2 + phi0`, integral by composite Simpson.
///
/// It solves `z u d + Phi d' + delta0 = 0`, so `delta0 = 2 mu x / z` recovers the
/// `d12` equation. The residual column is measured against that equation.
pub fn quadrature_d12(
    z: &Rational,
    phi0: f64,
    delta0: f64,
    base: f64,
    grid: &Grid,
) -> Result<NumericFn1D, CoeffError> {
    let (zf, q) = quad_parts(z, phi0, base, grid)?;
    let g = grid.points();
    let values: Vec<f64> = (0..g.len()).map(|i| -delta0 * q.pre[i] * q.integral[i]).collect();
    let derivs: Vec<f64> = (0..g.len())
        .map(|i| -delta0 * (q.dpre[i] * q.integral[i] + q.pre[i] * q.integrand[i]))
        .collect();
    let res = (0..g.len())
        .map(|i| {
            let u = g[i];
            let p = (zf - 1.0) * u * u + phi0;
            zf * u * values[i] + p * grid.stencil_derivative(&values, i, 1) + delta0
        })
        .collect();
    Ok(NumericFn1D::new(grid.clone(), values, derivs, res))
}

/// Least-squares fit `d ~ -delta0 P I + c P` of a tabulated `d12` against the
/// quadrature form, `P` the prefactor and `I` the integral from `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureFit {
    pub delta0: f64,
    /// Coefficient of the homogeneous solution `P`.
    pub homogeneous: f64,
    pub max_misfit: f64,
}

pub fn fit_quadrature(z: &Rational, phi0: f64, base: f64, d12: &NumericFn1D) -> Result<QuadratureFit, CoeffError> {
    let (_, q) = quad_parts(z, phi0, base, &d12.grid)?;
    let n = d12.grid.len();
    let cols: Vec<(f64, f64)> = (0..n).map(|i| (-q.pre[i] * q.integral[i], q.pre[i])).collect();
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, (a, b)) in cols.iter().enumerate() {
        let y = d12.values[i];
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
        t1 += a * y;
        t2 += b * y;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() < 1e-300 {
        return Err(CoeffError::BadGrid("quadrature fit is degenerate".into()));
    }
    let delta0 = (t1 * s22 - t2 * s12) / det;
    let homogeneous = (s11 * t2 - s12 * t1) / det;
    let max_misfit = cols
        .iter()
        .zip(&d12.values)
        .fold(0.0f64, |m, ((a, b), y)| m.max((delta0 * a + homogeneous * b - y).abs()));
    Ok(QuadratureFit {
        delta0,
        homogeneous,
        max_misfit,
    })
}

fn pole_domain(phi0: f64) -> (f64, f64) {
    if phi0 > 0.0 {
        (f64::NEG_INFINITY, f64::INFINITY)
    } else {
        ((-phi0).sqrt(), f64::INFINITY)
    }
}

/// `d12 = -mu x u / (u^2 + phi0)` at `z = 2`. For `phi0 <= 0` the domain is the
/// branch to the right of the pole.
pub fn closed_d12_z2(mu: f64, x: f64, phi0: f64) -> ScalarFn {
    let (lo, hi) = pole_domain(phi0);
    ScalarFn::new(move |u| -mu * x * u / (u * u + phi0))
        .with_derivative(move |u| -mu * x * (phi0 - u * u) / (u * u + phi0).powi(2))
        .on(lo, hi)
}

/// `b12 = (b120 u + b121 (u^2 - phi0)) / (u^2 + phi0)^2` at `z = 2`.
pub fn closed_b12_z2(b120: f64, b121: f64, phi0: f64) -> ScalarFn {
    let (lo, hi) = pole_domain(phi0);
    ScalarFn::new(move |u| (b120 * u + b121 * (u * u - phi0)) / (u * u + phi0).powi(2))
        .with_derivative(move |u| {
            let s = u * u + phi0;
            let n = b120 * u + b121 * (u * u - phi0);
            ((b120 + 2.0 * b121 * u) * s - 4.0 * u * n) / s.powi(3)
        })
        .on(lo, hi)
}

/// `c12 = 4 u b12 + (u^2 + phi0) b12' + mu` at `z = 2`.
pub fn closed_c12_z2(mu: f64, b120: f64, b121: f64, phi0: f64) -> ScalarFn {
    let b = closed_b12_z2(b120, b121, phi0);
    let (lo, hi) = b.domain;
    ScalarFn::new(move |u| 4.0 * u * b.eval(u) + (u * u + phi0) * b.derivative(u) + mu).on(lo, hi)
}
