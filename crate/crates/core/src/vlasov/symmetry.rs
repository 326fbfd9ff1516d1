use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ExactSolution, VlasovError};
use crate::catalog::Representation;
use crate::symexpr::{Param, Point};
use crate::vectorfield::VectorField;

/// Centered-difference step for derivatives of numerically evaluated functions.
pub const FD_H: f64 = 1e-5;

type Params<'a> = &'a (dyn Fn(Param) -> Option<f64> + Sync);

/// Fixed-seed sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point>,
}

impl PointCloud {
    /// `n` points in `t in [0.1, 1]`, `r in [0.5, 2]`, `v in [0.5, 2]`.
    pub fn standard(n: usize, seed: u64) -> PointCloud {
        PointCloud::in_box(n, seed, (0.1, 1.0), (0.5, 2.0), (0.5, 2.0))
    }

    pub fn in_box(n: usize, seed: u64, t: (f64, f64), r: (f64, f64), v: (f64, f64)) -> PointCloud {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = (0..n)
            .map(|_| Point::new(rng.gen_range(t.0..t.1), rng.gen_range(r.0..r.1), rng.gen_range(v.0..v.1)))
            .collect();
        PointCloud { points }
    }
}

fn eval4(f: &VectorField, p: Point, params: Params<'_>) -> Option<[f64; 4]> {
    let mut out = [0.0; 4];
    for (o, c) in out.iter_mut().zip(f.components()) {
        *o = c.eval(p, params).ok()?;
        if !o.is_finite() {
            return None;
        }
    }
    Some(out)
}

/// Fourth-order centered differences at spacing [`FD_H`].
fn gradient_fd(f: &dyn Fn(Point) -> Option<f64>, p: Point) -> Option<[f64; 3]> {
    let h = FD_H;
    let shift = |i: usize, s: f64| match i {
        0 => Point::new(p.t + s, p.r, p.v),
        1 => Point::new(p.t, p.r + s, p.v),
        _ => Point::new(p.t, p.r, p.v + s),
    };
    let mut g = [0.0; 3];
    for (i, gi) in g.iter_mut().enumerate() {
        let (a, b) = (f(shift(i, h))? - f(shift(i, -h))?, f(shift(i, 2.0 * h))? - f(shift(i, -2.0 * h))?);
        *gi = (8.0 * a - b) / (12.0 * h);
    }
    Some(g)
}

/// `L f` at `p` for the operator `L = a_t D_t + a_r D_r + a_v D_v + a_0`, derivatives
/// by fourth-order centered differences at spacing [`FD_H`]. `None` when anything fails to evaluate.
pub fn boltzmann_residual_fd(
    op: &VectorField,
    params: Params<'_>,
    f: &dyn Fn(Point) -> Option<f64>,
    p: Point,
) -> Option<f64> {
    let c = eval4(op, p, params)?;
    let g = gradient_fd(f, p)?;
    let r = c[0] * g[0] + c[1] * g[1] + c[2] * g[2] + c[3] * f(p)?;
    r.is_finite().then_some(r)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderReport {
    /// `(eps, max |B f_eps|)`.
    pub residuals: Vec<(f64, f64)>,
    /// Least-squares slope of `log R` against `log eps` over residuals above the
    /// noise floor; `None` when fewer than two are.
    pub slope: Option<f64>,
    /// Finite-difference noise level below which residuals count as zero.
    pub noise_floor: f64,
    pub points_used: usize,
    pub discarded: usize,
}

impl FirstOrderReport {
    /// All residuals at the noise floor: the deformation solves the equation exactly.
    pub fn exact(&self) -> bool {
        self.slope.is_none()
    }

    pub fn passed(&self, min_slope: f64) -> bool {
        self.slope.is_none_or(|s| s >= min_slope)
    }
}

/// Deforms `f` along `gen`: `f_eps(p) = (1 - eps A0(p)) f(p - eps A(p))`, which is
/// `f - eps (gen f) + O(eps^2)`, and measures `max |B f_eps|` over the cloud.
///
/// For a symmetry the first-order term cancels and the residual is `O(eps^2)`.
pub fn symmetry_firstorder_check_field(
    boltzmann: &VectorField,
    gen: &VectorField,
    f: &ExactSolution,
    eps_list: &[f64],
    params: Params<'_>,
    cloud: &PointCloud,
) -> Result<FirstOrderReport, VlasovError> {
    let deformed = |eps: f64| {
        move |q: Point| -> Option<f64> {
            let a = eval4(gen, q, params)?;
            let s = Point::new(q.t - eps * a[0], q.r - eps * a[1], q.v - eps * a[2]);
            if !(s.r > 0.0) {
                return None;
            }
            let y = (1.0 - eps * a[3]) * f.eval(s.t, s.r, s.v);
            y.is_finite().then_some(y)
        }
    };
    let base = |q: Point| -> Option<f64> {
        let y = f.eval(q.t, q.r, q.v);
        y.is_finite().then_some(y)
    };
    let per_point: Vec<Option<(Vec<f64>, f64)>> = cloud
        .points
        .par_iter()
        .map(|&p| {
            let c = eval4(boltzmann, p, params)?;
            let g = gradient_fd(&base, p)?;
            let scale = (0..3).map(|i| (c[i] * g[i]).abs()).sum::<f64>() + base(p)?.abs();
            let mut rs = Vec::with_capacity(eps_list.len());
            for &e in eps_list {
                let fe = deformed(e);
                rs.push(boltzmann_residual_fd(boltzmann, params, &fe, p)?.abs());
            }
            Some((rs, scale))
        })
        .collect();
    let mut maxima = vec![0.0f64; eps_list.len()];
    let mut scale: f64 = 0.0;
    let mut used = 0;
    for (rs, s) in per_point.iter().flatten() {
        used += 1;
        scale = scale.max(*s);
        for (m, r) in maxima.iter_mut().zip(rs) {
            *m = m.max(*r);
        }
    }
    let discarded = cloud.points.len() - used;
    if used == 0 {
        return Err(VlasovError::EmptyCloud { discarded });
    }
    let noise_floor = 1e-8 * scale.max(1.0);
    let fit: Vec<(f64, f64)> = eps_list
        .iter()
        .zip(&maxima)
        .filter(|(_, r)| **r > noise_floor)
        .map(|(e, r)| (e.ln(), r.ln()))
        .collect();
    let slope = (fit.len() >= 2).then(|| {
        let n = fit.len() as f64;
        let mx = fit.iter().map(|p| p.0).sum::<f64>() / n;
        let my = fit.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = fit.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = fit.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        sxy / sxx
    });
    Ok(FirstOrderReport {
        residuals: eps_list.iter().copied().zip(maxima).collect(),
        slope,
        noise_floor,
        points_used: used,
        discarded,
    })
}

/// [`symmetry_firstorder_check_field`] for generator `index` of `rep` and its
/// transport operator.
pub fn symmetry_firstorder_check(
    rep: &Representation,
    f: &ExactSolution,
    index: usize,
    eps_list: &[f64],
    params: Params<'_>,
    cloud: &PointCloud,
) -> Result<FirstOrderReport, VlasovError> {
    symmetry_firstorder_check_field(&rep.boltzmann, &rep.basis[index], f, eps_list, params, cloud)
}
