//! Characteristics of `mu f_t + v f_r + F f_v = 0` and numerical symmetry checks.
//!
//! Along a characteristic `dr/dt = v/mu`, `dv/dt = F/mu`, and every solution is
//! constant.

mod solution;
mod symmetry;

use std::fmt::Write as _;

use thiserror::Error;

use crate::catalog::CatalogError;
use crate::coeffode::ScalarFn;
use crate::symexpr::SymError;

pub use solution::{ExactSolution, Profile, SolutionFamily};
pub use symmetry::{
    boltzmann_residual_fd, symmetry_firstorder_check, symmetry_firstorder_check_field, FirstOrderReport, PointCloud,
    FD_H,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VlasovError {
    #[error("characteristic reached r = {r} <= 0 at t = {t}")]
    NonPositiveRadius { t: f64, r: f64 },
    #[error("step must be positive and finite (got {0})")]
    BadStep(f64),
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("{0}")]
    Unsupported(String),
    #[error("parameter `{0}` needs a numeric value")]
    MissingParam(String),
    #[error("no usable points in the cloud ({discarded} discarded)")]
    EmptyCloud { discarded: usize },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Force term `F(t, r, v)`.
#[derive(Clone, Debug)]
pub enum ForceField {
    Zero,
    /// `(1-z) v^2 / r`.
    Example1 { z: f64 },
    /// `r^(1-2z) phi(r^(z-1) v)`.
    GeneralPhi { z: f64, phi: ScalarFn },
}

impl ForceField {
    pub fn const_phi(z: f64, phi0: f64) -> ForceField {
        ForceField::GeneralPhi {
            z,
            phi: ScalarFn::constant(phi0),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ForceField::Zero => "zero",
            ForceField::Example1 { .. } => "example1",
            ForceField::GeneralPhi { .. } => "general_phi",
        }
    }

    pub fn eval(&self, _t: f64, r: f64, v: f64) -> f64 {
        match self {
            ForceField::Zero => 0.0,
            ForceField::Example1 { z } => (1.0 - z) * v * v / r,
            ForceField::GeneralPhi { z, phi } => r.powf(1.0 - 2.0 * z) * phi.eval(r.powf(z - 1.0) * v),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharState {
    pub t: f64,
    pub r: f64,
    pub v: f64,
}

impl CharState {
    pub fn new(t: f64, r: f64, v: f64) -> Self {
        CharState { t, r, v }
    }
}

fn rhs(force: &ForceField, mu: f64, s: CharState) -> Result<(f64, f64), VlasovError> {
    if !(s.r > 0.0) {
        return Err(VlasovError::NonPositiveRadius { t: s.t, r: s.r });
    }
    Ok((s.v / mu, force.eval(s.t, s.r, s.v) / mu))
}

/// RK4 trajectory from `start` to `t_end` (either direction); the last step is
/// shortened to land on `t_end`.
pub fn integrate_trajectory(
    force: &ForceField,
    mu: f64,
    start: CharState,
    t_end: f64,
    step: f64,
) -> Result<Vec<CharState>, VlasovError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(VlasovError::BadStep(step));
    }
    let span = t_end - start.t;
    let n = ((span.abs() / step) - 1e-9).ceil().max(0.0) as usize;
    let mut out = Vec::with_capacity(n + 1);
    let mut s = start;
    rhs(force, mu, s)?;
    out.push(s);
    for i in 0..n {
        let t_next = if i + 1 == n { t_end } else { start.t + span * (i + 1) as f64 / n as f64 };
        let h = t_next - s.t;
        let at = |s: CharState, dt: f64, k: (f64, f64)| CharState::new(s.t + dt, s.r + dt * k.0, s.v + dt * k.1);
        let k1 = rhs(force, mu, s)?;
        let k2 = rhs(force, mu, at(s, h / 2.0, k1))?;
        let k3 = rhs(force, mu, at(s, h / 2.0, k2))?;
        let k4 = rhs(force, mu, at(s, h, k3))?;
        s = CharState::new(
            t_next,
            s.r + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            s.v + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        if !(s.r.is_finite() && s.v.is_finite()) {
            return Err(VlasovError::NonFinite { t: s.t });
        }
        rhs(force, mu, s)?;
        out.push(s);
    }
    Ok(out)
}

pub fn integrate_characteristic(
    force: &ForceField,
    mu: f64,
    start: CharState,
    t_end: f64,
    step: f64,
) -> Result<CharState, VlasovError> {
    Ok(*integrate_trajectory(force, mu, start, t_end, step)?
        .last()
        .expect("trajectory holds its start"))
}

/// Largest `|f(end) - f(start)|` over trajectories given as `(start, t_end)`.
pub fn constancy_along_characteristics(
    force: &ForceField,
    mu: f64,
    f: &(dyn Fn(CharState) -> f64 + Sync),
    trajectories: &[(CharState, f64)],
    step: f64,
) -> Result<f64, VlasovError> {
    use rayon::prelude::*;
    let drifts: Vec<Result<f64, VlasovError>> = trajectories
        .par_iter()
        .map(|(s, t_end)| {
            let e = integrate_characteristic(force, mu, *s, *t_end, step)?;
            Ok((f(e) - f(*s)).abs())
        })
        .collect();
    let mut m: f64 = 0.0;
    for d in drifts {
        m = m.max(d?);
    }
    Ok(m)
}

/// `t,r,v,f,residual` with `residual = f - f(start)`.
pub fn trajectory_csv(traj: &[CharState], f: &dyn Fn(CharState) -> f64) -> String {
    let mut s = String::from("t,r,v,f,residual\n");
    let f0 = traj.first().map(|p| f(*p)).unwrap_or(0.0);
    for p in traj {
        let fv = f(*p);
        let _ = writeln!(s, "{:e},{:e},{:e},{:e},{:e}", p.t, p.r, p.v, fv, fv - f0);
    }
    s
}

/// `v^2/2 - phi0 r^(2-2z)/(2-2z)` for constant `phi`; conserved along characteristics.
pub fn energy_invariant(z: f64, phi0: f64, s: CharState) -> f64 {
    if (z - 1.0).abs() < 1e-15 {
        0.5 * s.v * s.v - phi0 * s.r.ln()
    } else {
        0.5 * s.v * s.v - phi0 * s.r.powf(2.0 - 2.0 * z) / (2.0 - 2.0 * z)
    }
}
