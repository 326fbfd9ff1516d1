//! Python module `vlasym`.

use std::fmt::Display;

use num_bigint::BigInt;
use pyo3::exceptions::{PyValueError, PyZeroDivisionError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use vlasym::catalog::{self, Assignments, RepKind, Representation, BASIS_NAMES};
use vlasym::coeffode::{self, Grid, NumericFn1D, ScalarFn};
use vlasym::exprparse::{parse_expr, parse_vfield, print_expr, print_vfield};
use vlasym::symexpr::{parse_rational, rational_to_f64, Expr, Param, ParamRat, Point, Rational, Var};
use vlasym::vectorfield::{expand_in_basis, VectorField};
use vlasym::vlasov::{self, CharState, ExactSolution, ForceField, PointCloud, Profile, SolutionFamily};

fn err(e: impl Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `int`, `Fraction`, `float` or a string `p/q`; the string `symbolic` gives `None`.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Option<Rational>> {
    if let Ok(s) = obj.extract::<String>() {
        let s = s.trim();
        if s == "symbolic" {
            return Ok(None);
        }
        if let Some(r) = parse_rational(s) {
            return Ok(Some(r));
        }
        let f: f64 = s.parse().map_err(|_| err(format!("`{s}` is not a number")))?;
        return Rational::from_float(f).map(Some).ok_or_else(|| err("non-finite value"));
    }
    if obj.is_instance_of::<pyo3::types::PyBool>() {
        return Err(err("expected a number, got a bool"));
    }
    if let Ok(n) = obj.extract::<i64>() {
        return Ok(Some(Rational::from_integer(n.into())));
    }
    if obj.hasattr("numerator")? && obj.hasattr("denominator")? {
        let n: BigInt = obj.getattr("numerator")?.str()?.to_str()?.parse().map_err(err)?;
        let d: BigInt = obj.getattr("denominator")?.str()?.to_str()?.parse().map_err(err)?;
        return Ok(Some(Rational::new(n, d)));
    }
    if let Ok(f) = obj.extract::<f64>() {
        return Rational::from_float(f).map(Some).ok_or_else(|| err("non-finite value"));
    }
    Err(err("expected int, float, Fraction or str"))
}

fn to_z(obj: Option<&Bound<'_, PyAny>>) -> PyResult<Option<Rational>> {
    match obj {
        None => Ok(None),
        Some(o) => to_rational(o)?.map(Some).ok_or_else(|| err("z must be a number")),
    }
}

fn param(name: &str) -> PyResult<Param> {
    Param::from_name(name).ok_or_else(|| err(format!("unknown parameter `{name}`")))
}

fn assignments(params: Option<&Bound<'_, PyDict>>) -> PyResult<Assignments> {
    let mut a = Assignments::new();
    if let Some(d) = params {
        for (k, v) in d.iter() {
            let p = param(&k.extract::<String>()?)?;
            if let Some(r) = to_rational(&v)? {
                a = a.with(p, r);
            }
        }
    }
    Ok(a)
}

fn numeric(params: Option<&Bound<'_, PyDict>>) -> PyResult<impl Fn(Param) -> Option<f64> + Sync> {
    let a = assignments(params)?;
    Ok(move |p| a.get(p).map(rational_to_f64))
}

fn var(name: &str) -> PyResult<Var> {
    match name {
        "t" => Ok(Var::T),
        "r" => Ok(Var::R),
        "v" => Ok(Var::V),
        _ => Err(err(format!("unknown variable `{name}` (use t, r or v)"))),
    }
}

/// Exact rational function of `(t, r, v)` with parameter-rational coefficients.
#[pyclass(name = "Expr", module = "vlasym", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyExpr {
    inner: Expr,
}

#[pymethods]
impl PyExpr {
    #[staticmethod]
    #[pyo3(signature = (text, z = None))]
    fn parse(text: &str, z: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let z = to_z(z)?;
        Ok(PyExpr {
            inner: parse_expr(text, z.as_ref()).map_err(err)?,
        })
    }

    fn __str__(&self) -> String {
        print_expr(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", print_expr(&self.inner))
    }

    fn __add__(&self, o: PyRef<'_, PyExpr>) -> PyExpr {
        PyExpr {
            inner: self.inner.add(&o.inner),
        }
    }

    fn __sub__(&self, o: PyRef<'_, PyExpr>) -> PyExpr {
        PyExpr {
            inner: self.inner.sub(&o.inner),
        }
    }

    fn __mul__(&self, o: PyRef<'_, PyExpr>) -> PyExpr {
        PyExpr {
            inner: self.inner.mul(&o.inner),
        }
    }

    fn __truediv__(&self, o: PyRef<'_, PyExpr>) -> PyResult<PyExpr> {
        let inner = self
            .inner
            .div(&o.inner)
            .map_err(|e| PyZeroDivisionError::new_err(e.to_string()))?;
        Ok(PyExpr { inner })
    }

    fn __neg__(&self) -> PyExpr {
        PyExpr {
            inner: self.inner.neg(),
        }
    }

    fn __eq__(&self, o: PyRef<'_, PyExpr>) -> bool {
        self.inner == o.inner
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn diff(&self, x: &str) -> PyResult<PyExpr> {
        Ok(PyExpr {
            inner: self.inner.diff(var(x)?),
        })
    }

    /// Substitutes a parameter by a number.
    fn subst(&self, name: &str, value: &Bound<'_, PyAny>) -> PyResult<PyExpr> {
        let r = to_rational(value)?.ok_or_else(|| err("value must be a number"))?;
        let inner = self
            .inner
            .subst_param(param(name)?, &ParamRat::from_rational(r))
            .map_err(err)?;
        Ok(PyExpr { inner })
    }

    #[pyo3(signature = (t, r, v, params = None))]
    fn eval(&self, t: f64, r: f64, v: f64, params: Option<&Bound<'_, PyDict>>) -> PyResult<f64> {
        let p = numeric(params)?;
        self.inner.eval(Point::new(t, r, v), &p).map_err(err)
    }
}

/// `a_t Dt + a_r Dr + a_v Dv + a_0`.
#[pyclass(name = "VectorField", module = "vlasym", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyVectorField {
    inner: VectorField,
}

fn wrap_field(inner: VectorField) -> PyVectorField {
    PyVectorField { inner }
}

#[pymethods]
impl PyVectorField {
    #[staticmethod]
    #[pyo3(signature = (text, z = None))]
    fn parse(text: &str, z: Option<&Bound<'_, PyAny>>) -> PyResult<Self> {
        let z = to_z(z)?;
        Ok(wrap_field(parse_vfield(text, z.as_ref()).map_err(err)?))
    }

    fn __str__(&self) -> String {
        print_vfield(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("VectorField('{}')", print_vfield(&self.inner))
    }

    fn __add__(&self, o: PyRef<'_, PyVectorField>) -> PyVectorField {
        wrap_field(self.inner.add(&o.inner))
    }

    fn __sub__(&self, o: PyRef<'_, PyVectorField>) -> PyVectorField {
        wrap_field(self.inner.sub(&o.inner))
    }

    fn __neg__(&self) -> PyVectorField {
        wrap_field(self.inner.neg())
    }

    fn __eq__(&self, o: PyRef<'_, PyVectorField>) -> bool {
        self.inner.sub(&o.inner).is_zero()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// `(a_t, a_r, a_v, a_0)`.
    fn components(&self) -> (PyExpr, PyExpr, PyExpr, PyExpr) {
        let c = self.inner.components().map(|e| PyExpr { inner: e.clone() });
        let [a, b, d, e] = c;
        (a, b, d, e)
    }

    fn bracket(&self, o: PyRef<'_, PyVectorField>) -> PyVectorField {
        wrap_field(self.inner.bracket(&o.inner))
    }

    /// The operator applied to a function: `a_t f_t + a_r f_r + a_v f_v + a_0 f`.
    fn apply(&self, f: PyRef<'_, PyExpr>) -> PyExpr {
        PyExpr {
            inner: self.inner.apply(&f.inner),
        }
    }

    fn symmetry_multiplier<'py>(&self, py: Python<'py>, op: PyRef<'_, PyVectorField>) -> PyResult<Bound<'py, PyDict>> {
        let r = vlasym::vectorfield::symmetry_multiplier(&op.inner, &self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("lambda", print_expr(&r.lambda))?;
        d.set_item("rho", r.rho.map(|x| x.to_string()))?;
        d.set_item("ok", r.ok)?;
        Ok(d)
    }
}

#[pyclass(name = "Representation", module = "vlasym", frozen)]
pub struct PyRepresentation {
    inner: Representation,
}

#[pymethods]
impl PyRepresentation {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(PyRepresentation {
            inner: Representation::from_text(text).map_err(err)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    #[getter]
    fn z(&self) -> Option<String> {
        self.inner.z.as_ref().map(|z| z.to_string())
    }

    /// `X[-1], X[0], X[1], Y[-1], Y[0], Y[1]`.
    #[getter]
    fn basis(&self) -> Vec<PyVectorField> {
        self.inner.basis.iter().cloned().map(wrap_field).collect()
    }

    #[getter]
    fn boltzmann(&self) -> PyVectorField {
        wrap_field(self.inner.boltzmann.clone())
    }

    #[getter]
    fn force(&self) -> PyExpr {
        PyExpr {
            inner: self.inner.force.clone(),
        }
    }

    /// Generator by label, e.g. `X1` or `Y[-1]`.
    fn generator(&self, label: &str) -> PyResult<PyVectorField> {
        let i = Representation::index_of(label).ok_or_else(|| err(format!("unknown generator `{label}`")))?;
        Ok(wrap_field(self.inner.basis[i].clone()))
    }

    fn __repr__(&self) -> String {
        match &self.inner.z {
            Some(z) => format!("Representation('{}', z={z})", self.inner.name),
            None => format!("Representation('{}')", self.inner.name),
        }
    }
}

fn kind(name: &str) -> PyResult<RepKind> {
    RepKind::from_name(name).ok_or_else(|| err(format!("unknown representation `{name}`")))
}

/// Catalog representation; `params` maps names to numbers or `"symbolic"`.
#[pyfunction]
#[pyo3(signature = (name, z = None, params = None))]
fn make_rep(name: &str, z: Option<&Bound<'_, PyAny>>, params: Option<&Bound<'_, PyDict>>) -> PyResult<PyRepresentation> {
    let k = kind(name)?;
    let z = match to_z(z)? {
        Some(z) => z,
        None if k.uses_z() => return Err(err(format!("{name} needs z"))),
        None => Rational::from_integer(2.into()),
    };
    let inner = catalog::make_rep(k, &z, &assignments(params)?).map_err(err)?;
    Ok(PyRepresentation { inner })
}

#[pyfunction]
fn verify_table<'py>(py: Python<'py>, rep: PyRef<'_, PyRepresentation>) -> PyResult<Bound<'py, PyDict>> {
    let t = catalog::verify_table(&rep.inner).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("k", t.k.to_string())?;
    d.set_item("q", t.q.to_string())?;
    d.set_item("inferred", t.inferred)?;
    d.set_item("ok", t.ok)?;
    let pairs = PyList::empty(py);
    for p in &t.pairs {
        let e = PyDict::new(py);
        e.set_item("pair", p.label())?;
        e.set_item("ok", p.ok)?;
        e.set_item("residual", print_vfield(&p.residual))?;
        pairs.append(e)?;
    }
    d.set_item("pairs", pairs)?;
    Ok(d)
}

#[pyfunction]
fn verify_symmetries<'py>(py: Python<'py>, rep: PyRef<'_, PyRepresentation>) -> PyResult<Bound<'py, PyList>> {
    let checks = catalog::verify_symmetries(&rep.inner).map_err(err)?;
    let out = PyList::empty(py);
    for c in checks {
        let d = PyDict::new(py);
        d.set_item("generator", BASIS_NAMES[c.index])?;
        d.set_item("lambda", print_expr(&c.report.lambda))?;
        d.set_item("rho", c.report.rho.as_ref().map(|r| r.to_string()))?;
        d.set_item("ok", c.ok)?;
        out.append(d)?;
    }
    Ok(out)
}

/// Coefficients of `field` in the basis of `rep` (labels to strings) and the remainder.
#[pyfunction]
fn expand_in_rep_basis<'py>(
    py: Python<'py>,
    field: PyRef<'_, PyVectorField>,
    rep: PyRef<'_, PyRepresentation>,
) -> PyResult<Bound<'py, PyDict>> {
    let e = expand_in_basis(&field.inner, &rep.inner.basis).map_err(err)?;
    let coeffs = PyDict::new(py);
    for (i, c) in &e.coefficients {
        coeffs.set_item(BASIS_NAMES[*i], c.to_string())?;
    }
    let d = PyDict::new(py);
    d.set_item("coefficients", coeffs)?;
    d.set_item("remainder", print_vfield(&e.remainder))?;
    d.set_item("in_span", e.in_span())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (z, params = None))]
fn nogo<'py>(py: Python<'py>, z: &Bound<'_, PyAny>, params: Option<&Bound<'_, PyDict>>) -> PyResult<Bound<'py, PyDict>> {
    let z = to_rational(z)?.ok_or_else(|| err("z must be a number"))?;
    let r = catalog::nogo_obstruction(&z, &assignments(params)?).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("z", r.z.to_string())?;
    d.set_item("obstructed", r.obstructed())?;
    d.set_item("projection", print_vfield(&r.projection))?;
    d.set_item("sample", r.sample.to_vec())?;
    Ok(d)
}

fn solution_dict<'py>(py: Python<'py>, s: &NumericFn1D) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("u", s.grid.points().to_vec())?;
    d.set_item("value", s.values.clone())?;
    d.set_item("derivative", s.derivatives.clone())?;
    d.set_item("residual", s.residuals.clone())?;
    d.set_item("residual_max", s.residual_max)?;
    Ok(d)
}

/// RK4 solution of `z u d + Phi d' + 2 mu x / z = 0` with constant `phi = phi0`.
#[pyfunction]
#[pyo3(signature = (z, phi0, mu, x, u_from = 0.5, u_to = 4.0, step = 1e-3, anchor = 0.0))]
#[allow(clippy::too_many_arguments)]
fn solve_d12<'py>(
    py: Python<'py>,
    z: &Bound<'_, PyAny>,
    phi0: f64,
    mu: f64,
    x: f64,
    u_from: f64,
    u_to: f64,
    step: f64,
    anchor: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let z = to_rational(z)?.ok_or_else(|| err("z must be a number"))?;
    let g = Grid::uniform(u_from, u_to, step).map_err(err)?;
    let s = coeffode::solve_d12(&z, &ScalarFn::constant(phi0), mu, x, &g, anchor).map_err(err)?;
    solution_dict(py, &s)
}

/// RK4 solution of the b12 equation from `init = (b, b')` at `u_from`.
#[pyfunction]
#[pyo3(signature = (z, phi0, mu, init, u_from = 0.5, u_to = 4.0, step = 1e-3))]
#[allow(clippy::too_many_arguments)]
fn solve_b12<'py>(
    py: Python<'py>,
    z: &Bound<'_, PyAny>,
    phi0: f64,
    mu: f64,
    init: (f64, f64),
    u_from: f64,
    u_to: f64,
    step: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let z = to_rational(z)?.ok_or_else(|| err("z must be a number"))?;
    let g = Grid::uniform(u_from, u_to, step).map_err(err)?;
    let s = coeffode::solve_b12(&z, &ScalarFn::constant(phi0), mu, &g, init).map_err(err)?;
    solution_dict(py, &s)
}

/// `-mu x u / (u^2 + phi0)`.
#[pyfunction]
fn closed_d12_z2(mu: f64, x: f64, phi0: f64, u: f64) -> f64 {
    coeffode::closed_d12_z2(mu, x, phi0).eval(u)
}

/// `(b120 u + b121 (u^2 - phi0)) / (u^2 + phi0)^2`.
#[pyfunction]
fn closed_b12_z2(b120: f64, b121: f64, phi0: f64, u: f64) -> f64 {
    coeffode::closed_b12_z2(b120, b121, phi0).eval(u)
}

fn profile(name: &str) -> PyResult<Profile> {
    Ok(match name {
        "first" => Profile::First,
        "second" => Profile::Second,
        "gaussian" => Profile::Gaussian {
            a0: 1.0,
            b0: 0.8,
            sa: 1.1,
            sb: 0.9,
        },
        _ => return Err(err(format!("unknown profile `{name}` (first, second, gaussian)"))),
    })
}

/// First-order symmetry test of one generator against an exact solution.
/// Parameters default to one; `corrupt` doubles the generator's Dr coefficient.
#[pyfunction]
#[pyo3(signature = (rep, generator, z = 2, params = None, eps = vec![1e-2, 5e-3, 2.5e-3], points = 64, seed = 7, profile_name = "gaussian", corrupt = false))]
#[allow(clippy::too_many_arguments)]
fn symmetry_check<'py>(
    py: Python<'py>,
    rep: &str,
    generator: &str,
    z: i64,
    params: Option<&Bound<'_, PyDict>>,
    eps: Vec<f64>,
    points: usize,
    seed: u64,
    profile_name: &str,
    corrupt: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let k = kind(rep)?;
    let mut a = assignments(params)?;
    for p in k.params() {
        if a.get(*p).is_none() {
            a = a.with(*p, Rational::from_integer(1.into()));
        }
    }
    let zr = Rational::from_integer(z.into());
    let r = catalog::make_rep(k, &zr, &a).map_err(err)?;
    let v = |p: Param| a.get(p).map(rational_to_f64);
    let fam = match k {
        RepKind::CaseA | RepKind::CaseB1 | RepKind::CaseB2 => SolutionFamily::Zero,
        RepKind::Example1 => SolutionFamily::Example1 { z: z as f64 },
        RepKind::Example2Z2 => SolutionFamily::InverseCube {
            phi0: v(Param::Phi0).expect("assigned"),
        },
        RepKind::Standard => return Err(err("no exact solution family for the standard representation")),
    };
    let f = ExactSolution::new(fam, v(Param::Mu).expect("assigned"), profile(profile_name)?);
    let i = Representation::index_of(generator).ok_or_else(|| err(format!("unknown generator `{generator}`")))?;
    let mut gen = r.basis[i].clone();
    if corrupt {
        gen.ar = gen.ar.scale(&ParamRat::from_int(2));
    }
    let cloud = PointCloud::standard(points, seed);
    let report = py
        .detach(|| vlasov::symmetry_firstorder_check_field(&r.boltzmann, &gen, &f, &eps, &v, &cloud))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("slope", report.slope)?;
    d.set_item("residuals", report.residuals.clone())?;
    d.set_item("noise_floor", report.noise_floor)?;
    d.set_item("points_used", report.points_used)?;
    d.set_item("passed", report.passed(1.9))?;
    Ok(d)
}

/// RK4 characteristic `dr/dt = v/mu`, `dv/dt = F/mu`; returns `[(t, r, v), ...]`.
#[pyfunction]
#[pyo3(signature = (force, start, t_end, mu = 1.0, z = 2.0, phi0 = 1.0, step = 1e-3))]
fn integrate_characteristic(
    force: &str,
    start: (f64, f64, f64),
    t_end: f64,
    mu: f64,
    z: f64,
    phi0: f64,
    step: f64,
) -> PyResult<Vec<(f64, f64, f64)>> {
    let force = match force {
        "zero" => ForceField::Zero,
        "example1" => ForceField::Example1 { z },
        "const_phi" => ForceField::const_phi(z, phi0),
        _ => return Err(err(format!("unknown force `{force}` (zero, example1, const_phi)"))),
    };
    let traj = vlasov::integrate_trajectory(&force, mu, CharState::new(start.0, start.1, start.2), t_end, step)
        .map_err(err)?;
    Ok(traj.into_iter().map(|s| (s.t, s.r, s.v)).collect())
}

#[pymodule]
#[pyo3(name = "vlasym")]
fn vlasym_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyExpr>()?;
    m.add_class::<PyVectorField>()?;
    m.add_class::<PyRepresentation>()?;
    m.add("BASIS_NAMES", BASIS_NAMES.to_vec())?;
    m.add_function(wrap_pyfunction!(make_rep, m)?)?;
    m.add_function(wrap_pyfunction!(verify_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify_symmetries, m)?)?;
    m.add_function(wrap_pyfunction!(expand_in_rep_basis, m)?)?;
    m.add_function(wrap_pyfunction!(nogo, m)?)?;
    m.add_function(wrap_pyfunction!(solve_d12, m)?)?;
    m.add_function(wrap_pyfunction!(solve_b12, m)?)?;
    m.add_function(wrap_pyfunction!(closed_d12_z2, m)?)?;
    m.add_function(wrap_pyfunction!(closed_b12_z2, m)?)?;
    m.add_function(wrap_pyfunction!(symmetry_check, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_characteristic, m)?)?;
    Ok(())
}
