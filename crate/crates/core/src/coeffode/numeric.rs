use std::fmt::Write as _;

use super::CoeffError;

/// Strictly increasing sample points.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid(Vec<f64>);

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Grid, CoeffError> {
        if points.len() < 5 {
            return Err(CoeffError::BadGrid("at least five points are needed".into()));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(CoeffError::BadGrid("non-finite point".into()));
        }
        if let Some(w) = points.windows(2).find(|w| w[1] <= w[0]) {
            return Err(CoeffError::BadGrid(format!("not increasing at {} -> {}", w[0], w[1])));
        }
        Ok(Grid(points))
    }

    /// `a, a + h, ...` up to `b`; the last step is shortened to land on `b`.
    pub fn uniform(a: f64, b: f64, h: f64) -> Result<Grid, CoeffError> {
        if !(h > 0.0) || !(b > a) {
            return Err(CoeffError::BadGrid(format!("need a < b and h > 0 (a={a}, b={b}, h={h})")));
        }
        let n = ((b - a) / h - 1e-9).ceil().max(1.0) as usize;
        let step = (b - a) / n as f64;
        Grid::new((0..=n).map(|i| if i == n { b } else { a + step * i as f64 }).collect())
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.0[0]
    }

    pub fn end(&self) -> f64 {
        self.0[self.0.len() - 1]
    }

    /// Derivative of order `m` at point `i` from the five nearest samples.
    pub fn stencil_derivative(&self, values: &[f64], i: usize, m: usize) -> f64 {
        let n = self.0.len();
        let lo = i.saturating_sub(2).min(n - 5);
        let xs = &self.0[lo..lo + 5];
        let w = fornberg_weights(self.0[i], xs, m);
        w.iter().zip(&values[lo..lo + 5]).map(|(a, b)| a * b).sum()
    }
}

/// Finite-difference weights for the `m`-th derivative at `x0` from nodes `xs`.
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Tabulated solution with cubic Hermite interpolation.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericFn1D {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub derivatives: Vec<f64>,
    /// Residual of the defining equation at each grid point.
    pub residuals: Vec<f64>,
    pub residual_max: f64,
}

impl NumericFn1D {
    pub fn new(grid: Grid, values: Vec<f64>, derivatives: Vec<f64>, residuals: Vec<f64>) -> Self {
        let residual_max = residuals.iter().fold(0.0f64, |a, r| a.max(r.abs()));
        NumericFn1D {
            grid,
            values,
            derivatives,
            residuals,
            residual_max,
        }
    }

    fn locate(&self, u: f64) -> Option<usize> {
        let g = self.grid.points();
        if !(u >= g[0] && u <= g[g.len() - 1]) {
            return None;
        }
        Some(g.partition_point(|x| *x <= u).saturating_sub(1).min(g.len() - 2))
    }

    /// Hermite interpolant; `None` outside the grid.
    pub fn eval(&self, u: f64) -> Option<f64> {
        let i = self.locate(u)?;
        let g = self.grid.points();
        let h = g[i + 1] - g[i];
        let s = (u - g[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Some(
            h00 * self.values[i]
                + h10 * h * self.derivatives[i]
                + h01 * self.values[i + 1]
                + h11 * h * self.derivatives[i + 1],
        )
    }

    /// Derivative of the Hermite interpolant.
    pub fn eval_derivative(&self, u: f64) -> Option<f64> {
        let i = self.locate(u)?;
        let g = self.grid.points();
        let h = g[i + 1] - g[i];
        let s = (u - g[i]) / h;
        let s2 = s * s;
        let d00 = (6.0 * s2 - 6.0 * s) / h;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = (-6.0 * s2 + 6.0 * s) / h;
        let d11 = 3.0 * s2 - 2.0 * s;
        Some(
            d00 * self.values[i]
                + d10 * self.derivatives[i]
                + d01 * self.values[i + 1]
                + d11 * self.derivatives[i + 1],
        )
    }

    /// Largest `|self - f|` over the grid points.
    pub fn max_deviation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.grid
            .points()
            .iter()
            .zip(&self.values)
            .fold(0.0f64, |a, (u, y)| a.max((y - f(*u)).abs()))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("u,value,derivative,residual\n");
        for i in 0..self.grid.len() {
            let _ = writeln!(
                s,
                "{:e},{:e},{:e},{:e}",
                self.grid.points()[i],
                self.values[i],
                self.derivatives[i],
                self.residuals[i]
            );
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stencils_are_exact_on_quartics() {
        let g = Grid::new(vec![0.0, 0.1, 0.25, 0.3, 0.5, 0.55, 0.9]).unwrap();
        let f = |x: f64| 1.0 - 2.0 * x + x.powi(3) - 0.5 * x.powi(4);
        let df = |x: f64| -2.0 + 3.0 * x * x - 2.0 * x.powi(3);
        let d2f = |x: f64| 6.0 * x - 6.0 * x * x;
        let vals: Vec<f64> = g.points().iter().map(|x| f(*x)).collect();
        for i in 0..g.len() {
            let x = g.points()[i];
            assert!((g.stencil_derivative(&vals, i, 1) - df(x)).abs() < 1e-11);
            assert!((g.stencil_derivative(&vals, i, 2) - d2f(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn hermite_reproduces_cubics() {
        let g = Grid::uniform(0.0, 1.0, 0.2).unwrap();
        let f = |x: f64| x.powi(3) - x;
        let v = g.points().iter().map(|x| f(*x)).collect();
        let d = g.points().iter().map(|x| 3.0 * x * x - 1.0).collect();
        let n = NumericFn1D::new(g, v, d, vec![0.0; 6]);
        for u in [0.0, 0.13, 0.5, 0.77, 1.0] {
            assert!((n.eval(u).unwrap() - f(u)).abs() < 1e-14);
            assert!((n.eval_derivative(u).unwrap() - (3.0 * u * u - 1.0)).abs() < 1e-12);
        }
        assert!(n.eval(1.5).is_none());
        assert!(n.to_csv().starts_with("u,value,derivative,residual\n"));
    }

    #[test]
    fn grid_validation() {
        assert!(Grid::new(vec![0.0, 1.0, 1.0, 2.0, 3.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0]).is_err());
        let g = Grid::uniform(0.5, 5.0, 1e-3).unwrap();
        assert_eq!(g.len(), 4501);
        assert_eq!(g.end(), 5.0);
    }
}
