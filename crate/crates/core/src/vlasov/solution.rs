use std::fmt;
use std::sync::Arc;

use super::{ForceField, VlasovError};

type Fn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Profile `g(a, b)` of two characteristic invariants.
#[derive(Clone)]
pub enum Profile {
    /// `g = a`.
    First,
    /// `g = b`.
    Second,
    /// `exp(-((a-a0)/sa)^2 - ((b-b0)/sb)^2)`.
    Gaussian { a0: f64, b0: f64, sa: f64, sb: f64 },
    /// Arbitrary profile; partial derivatives by centered differences.
    Custom(Fn2),
}

impl Profile {
    pub fn custom(g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Profile {
        Profile::Custom(Arc::new(g))
    }

    pub fn eval(&self, a: f64, b: f64) -> f64 {
        match self {
            Profile::First => a,
            Profile::Second => b,
            Profile::Gaussian { a0, b0, sa, sb } => {
                let (x, y) = ((a - a0) / sa, (b - b0) / sb);
                (-x * x - y * y).exp()
            }
            Profile::Custom(g) => g(a, b),
        }
    }

    /// `(g_a, g_b)`.
    pub fn gradient(&self, a: f64, b: f64) -> (f64, f64) {
        match self {
            Profile::First => (1.0, 0.0),
            Profile::Second => (0.0, 1.0),
            Profile::Gaussian { a0, b0, sa, sb } => {
                let g = self.eval(a, b);
                (-2.0 * (a - a0) / (sa * sa) * g, -2.0 * (b - b0) / (sb * sb) * g)
            }
            Profile::Custom(g) => {
                let h = super::FD_H;
                (
                    (g(a + h, b) - g(a - h, b)) / (2.0 * h),
                    (g(a, b + h) - g(a, b - h)) / (2.0 * h),
                )
            }
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::First => write!(f, "First"),
            Profile::Second => write!(f, "Second"),
            Profile::Gaussian { a0, b0, sa, sb } => write!(f, "Gaussian({a0}, {b0}, {sa}, {sb})"),
            Profile::Custom(_) => write!(f, "Custom"),
        }
    }
}

/// Invariant pair `(a, b)` for each force family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SolutionFamily {
    /// `a = r - v t/mu`, `b = v`.
    Zero,
    /// `a = u = r^(z-1) v`, `b = r^z - z u t/mu`.
    Example1 { z: f64 },
    /// Force `phi0 r^(-3)` (`z = 2`): `a = v^2/2 + phi0/(2 r^2)`, `b = r v - 2 a t/mu`.
    InverseCube { phi0: f64 },
}

/// `f = g(a, b)` for an invariant pair of the family.
#[derive(Clone, Debug)]
pub struct ExactSolution {
    pub family: SolutionFamily,
    pub mu: f64,
    pub profile: Profile,
}

impl ExactSolution {
    pub fn new(family: SolutionFamily, mu: f64, profile: Profile) -> Self {
        ExactSolution { family, mu, profile }
    }

    /// Picks the family matching a force field. Non-constant `phi`, or constant
    /// `phi` away from `z = 2`, has no closed invariants here.
    pub fn for_force(force: &ForceField, mu: f64, profile: Profile) -> Result<Self, VlasovError> {
        let family = match force {
            ForceField::Zero => SolutionFamily::Zero,
            ForceField::Example1 { z } => SolutionFamily::Example1 { z: *z },
            ForceField::GeneralPhi { z, phi } => {
                let c = phi.eval(0.0);
                let constant = [0.3, 1.0, 2.7].iter().all(|u| phi.eval(*u) == c);
                if !constant || *z != 2.0 {
                    return Err(VlasovError::Unsupported(
                        "no closed invariants for this force; use constancy_along_characteristics".into(),
                    ));
                }
                SolutionFamily::InverseCube { phi0: c }
            }
        };
        Ok(ExactSolution::new(family, mu, profile))
    }

    pub fn force(&self) -> ForceField {
        match self.family {
            SolutionFamily::Zero => ForceField::Zero,
            SolutionFamily::Example1 { z } => ForceField::Example1 { z },
            SolutionFamily::InverseCube { phi0 } => ForceField::const_phi(2.0, phi0),
        }
    }

    /// `(a, b)` with gradients `[d/dt, d/dr, d/dv]`.
    #[allow(clippy::type_complexity)]
    pub fn invariants(&self, t: f64, r: f64, v: f64) -> ((f64, [f64; 3]), (f64, [f64; 3])) {
        let mu = self.mu;
        match self.family {
            SolutionFamily::Zero => ((r - v * t / mu, [-v / mu, 1.0, -t / mu]), (v, [0.0, 0.0, 1.0])),
            SolutionFamily::Example1 { z } => {
                let a = r.powf(z - 1.0) * v;
                let ga = [0.0, (z - 1.0) * r.powf(z - 2.0) * v, r.powf(z - 1.0)];
                let b = r.powf(z) - z * a * t / mu;
                let gb = [-z * a / mu, z * r.powf(z - 1.0) - z * t * ga[1] / mu, -z * t * ga[2] / mu];
                ((a, ga), (b, gb))
            }
            SolutionFamily::InverseCube { phi0 } => {
                let a = 0.5 * v * v + 0.5 * phi0 / (r * r);
                let ga = [0.0, -phi0 / (r * r * r), v];
                let b = r * v - 2.0 * a * t / mu;
                let gb = [-2.0 * a / mu, v - 2.0 * t * ga[1] / mu, r - 2.0 * t * ga[2] / mu];
                ((a, ga), (b, gb))
            }
        }
    }

    pub fn eval(&self, t: f64, r: f64, v: f64) -> f64 {
        let ((a, _), (b, _)) = self.invariants(t, r, v);
        self.profile.eval(a, b)
    }

    /// Chain-rule gradient `[f_t, f_r, f_v]`.
    pub fn gradient(&self, t: f64, r: f64, v: f64) -> [f64; 3] {
        let ((a, ga), (b, gb)) = self.invariants(t, r, v);
        let (pa, pb) = self.profile.gradient(a, b);
        std::array::from_fn(|i| pa * ga[i] + pb * gb[i])
    }

    /// `mu f_t + v f_r + F f_v` from the chain-rule gradient.
    pub fn residual(&self, t: f64, r: f64, v: f64) -> f64 {
        let g = self.gradient(t, r, v);
        self.mu * g[0] + v * g[1] + self.force().eval(t, r, v) * g[2]
    }
}
