use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use vlasym::catalog::{make_rep, numeric_params, RepKind, Representation, BASIS_NAMES};
use vlasym::coeffode::{
    c12_from_b12, closed_b12_z2, closed_c12_z2, closed_d12_z2, fit_quadrature, quadrature_d12, solve_b0, solve_b12,
    solve_d12, Grid, NumericFn1D, ScalarFn,
};
use vlasym::symexpr::{rational_to_f64, Param, ParamRat, Rational};
use vlasym::vlasov::{
    integrate_trajectory, symmetry_firstorder_check_field, trajectory_csv, CharState, ExactSolution, ForceField,
    PointCloud, Profile, SolutionFamily,
};

use crate::params::{parse_rational_arg, value_f64};
use crate::report::{Record, Report};
use crate::symbolic::rep_kind;
use crate::{write_file, CliError, ForceArg, OdeArgs, OdeCmd, ProfileArg, SymcheckArgs, TraceArgs};

fn fmt_e(x: f64) -> String {
    format!("{x:.3e}")
}

fn grid_of(a: &OdeArgs) -> Result<Grid, CliError> {
    Ok(Grid::uniform(a.grid.from, a.grid.to, a.grid.step)?)
}

fn base_config(a: &OdeArgs, z: &Rational) -> BTreeMap<String, String> {
    let mut cfg = BTreeMap::new();
    cfg.insert("z".into(), z.to_string());
    cfg.insert("from".into(), a.grid.from.to_string());
    cfg.insert("to".into(), a.grid.to.to_string());
    cfg.insert("step".into(), a.grid.step.to_string());
    cfg.insert("tol".into(), a.grid.tol.to_string());
    cfg
}

/// Sup-norm deviation from `exact`, relative to `max(1, sup |exact|)`.
fn deviation(sol: &NumericFn1D, exact: &ScalarFn) -> f64 {
    let scale = sol.grid.points().iter().fold(1.0f64, |m, u| m.max(exact.eval(*u).abs()));
    sol.max_deviation(|u| exact.eval(u)) / scale
}

fn is_two(z: &Rational) -> bool {
    *z == Rational::from_integer(2.into())
}

fn closed_required(a: &OdeArgs, z: &Rational) -> Result<(), CliError> {
    if a.compare_closed && !is_two(z) {
        return Err(CliError::Usage("--compare-closed: closed forms exist only at z = 2".into()));
    }
    Ok(())
}

pub fn ode(cmd: &OdeCmd) -> Result<Report, CliError> {
    let (which, a) = match cmd {
        OdeCmd::D12(a) => ("d12", a),
        OdeCmd::B12(a) => ("b12", a),
        OdeCmd::B0(a) => ("b0", a),
        OdeCmd::Quadrature(a) => ("quadrature", a),
    };
    let z = parse_rational_arg("--z", &a.z)?;
    let mut cfg = base_config(a, &z);
    let params: &[Param] = match which {
        "d12" | "quadrature" => &[Param::Mu, Param::X, Param::Phi0],
        "b12" if a.compare_closed || a.init.is_empty() => &[Param::Mu, Param::Phi0, Param::B120, Param::B121],
        "b12" => &[Param::Mu, Param::Phi0],
        _ => &[Param::Phi0],
    };
    let asg = a.params.numeric(params, &[], &format!("ode {which}"))?;
    for p in params {
        cfg.insert(p.name().into(), asg.get(*p).expect("numeric").to_string());
    }
    if which == "b0" {
        cfg.insert("s".into(), a.s.to_string());
    }
    if a.compare_closed {
        cfg.insert("compare_closed".into(), "true".into());
        cfg.insert("compare_tol".into(), a.compare_tol.to_string());
    }
    let v = |p| value_f64(&asg, p);
    let phi0 = v(Param::Phi0);
    let phi = ScalarFn::constant(phi0);
    let grid = grid_of(a)?;
    let u0 = grid.start();
    let tol = a.grid.tol;
    let mut report = Report::new(&format!("ode {which}"), cfg);
    let csv;

    match which {
        "d12" => {
            closed_required(a, &z)?;
            let (mu, x) = (v(Param::Mu), v(Param::X));
            let closed = is_two(&z).then(|| closed_d12_z2(mu, x, phi0));
            let anchor = match (a.init.as_slice(), &closed) {
                ([d], _) => *d,
                ([], Some(c)) => c.eval(u0),
                ([], None) => 0.0,
                _ => return Err(CliError::Usage("ode d12: --init takes one value".into())),
            };
            let start = Instant::now();
            let sol = solve_d12(&z, &phi, mu, x, &grid, anchor)?;
            report.push(
                Record::measured("d12/residual", sol.residual_max, tol, format!("max |residual| = {}", fmt_e(sol.residual_max)))
                    .timed(start),
            );
            if a.compare_closed {
                let c = closed.expect("z = 2");
                let d = deviation(&sol, &c);
                report.push(Record::measured("d12/closed_form", d, a.compare_tol, format!("max |delta| = {}", fmt_e(d))).timed(start));
            }
            csv = Some(sol.to_csv());
        }
        "b12" => {
            closed_required(a, &z)?;
            let mu = v(Param::Mu);
            let closed = match (asg.get(Param::B120), asg.get(Param::B121)) {
                (Some(b0), Some(b1)) if is_two(&z) => {
                    let (b0, b1) = (rational_to_f64(b0), rational_to_f64(b1));
                    Some((closed_b12_z2(b0, b1, phi0), closed_c12_z2(mu, b0, b1, phi0)))
                }
                _ => None,
            };
            let init = match (a.init.as_slice(), &closed) {
                ([b, db], _) => (*b, *db),
                ([], Some((c, _))) => (c.eval(u0), c.derivative(u0)),
                ([], None) => {
                    return Err(CliError::Usage("ode b12: give --init b,b' (closed forms exist only at z = 2)".into()))
                }
                _ => return Err(CliError::Usage("ode b12: --init takes two values b,b'".into())),
            };
            let start = Instant::now();
            let sol = solve_b12(&z, &phi, mu, &grid, init)?;
            report.push(
                Record::measured("b12/residual", sol.residual_max, tol, format!("max |residual| = {}", fmt_e(sol.residual_max)))
                    .timed(start),
            );
            let c12 = c12_from_b12(&z, &phi, mu, &sol)?;
            if a.compare_closed {
                let (cb, cc) = closed.expect("z = 2 with b120, b121");
                let d = deviation(&sol, &cb);
                report.push(Record::measured("b12/closed_form", d, a.compare_tol, format!("max |delta| = {}", fmt_e(d))).timed(start));
                let scale = grid.points().iter().fold(1.0f64, |m, u| m.max(cc.eval(*u).abs()));
                let dc = grid
                    .points()
                    .iter()
                    .zip(&c12)
                    .fold(0.0f64, |m, (u, c)| m.max((c - cc.eval(*u)).abs()))
                    / scale;
                report.push(Record::measured("c12/closed_form", dc, a.compare_tol, format!("max |delta| = {}", fmt_e(dc))).timed(start));
            }
            let mut s = String::from("u,b12,b12_prime,residual,c12\n");
            for (i, u) in grid.points().iter().enumerate() {
                let _ = writeln!(s, "{u:e},{:e},{:e},{:e},{:e}", sol.values[i], sol.derivatives[i], sol.residuals[i], c12[i]);
            }
            csv = Some(s);
        }
        "b0" => {
            if a.compare_closed {
                return Err(CliError::Usage("ode b0 has no closed form to compare with".into()));
            }
            let start = Instant::now();
            let b = solve_b0(&z, &phi, a.s, &grid)?;
            for (name, sol) in [("b0/first", &b.first), ("b0/second", &b.second)] {
                report.push(
                    Record::measured(name, sol.residual_max, tol, format!("max |residual| = {}", fmt_e(sol.residual_max)))
                        .timed(start),
                );
            }
            let mut w = Record::new(
                "b0/wronskian",
                !b.dependent,
                format!("min |W| = {}{}", fmt_e(b.min_abs_wronskian), if b.dependent { " (dependent)" } else { "" }),
            );
            w.residual = Some(b.min_abs_wronskian);
            report.push(w.timed(start));
            let mut s = String::from("u,first,second,wronskian\n");
            for (i, u) in grid.points().iter().enumerate() {
                let _ = writeln!(s, "{u:e},{:e},{:e},{:e}", b.first.values[i], b.second.values[i], b.wronskian.values[i]);
            }
            csv = Some(s);
        }
        _ => {
            if a.compare_closed {
                return Err(CliError::Usage("ode quadrature compares with the RK4 solution, not a closed form".into()));
            }
            let (mu, x) = (v(Param::Mu), v(Param::X));
            let zf = rational_to_f64(&z);
            let delta0 = 2.0 * mu * x / zf;
            let start = Instant::now();
            let q = quadrature_d12(&z, phi0, delta0, u0, &grid)?;
            report.push(
                Record::measured("quadrature/residual", q.residual_max, tol, format!("max |residual| = {}", fmt_e(q.residual_max)))
                    .timed(start),
            );
            let anchor = a.init.first().copied().unwrap_or(0.0);
            let rk = solve_d12(&z, &phi, mu, x, &grid, anchor)?;
            let fit = fit_quadrature(&z, phi0, u0, &rk)?;
            let rel = (fit.delta0 - delta0).abs() / delta0.abs().max(1.0);
            report.push(
                Record::measured(
                    "quadrature/fit",
                    rel,
                    1e-7,
                    format!("fitted delta0 = {:.10}, 2 mu x / z = {delta0:.10}, misfit {}", fit.delta0, fmt_e(fit.max_misfit)),
                )
                .timed(start),
            );
            csv = Some(q.to_csv());
        }
    }
    if let (Some(path), Some(text)) = (&a.grid.csv, csv) {
        write_file(path, &text)?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report)
}

fn profile(p: ProfileArg) -> Profile {
    match p {
        ProfileArg::First => Profile::First,
        ProfileArg::Second => Profile::Second,
        ProfileArg::Gaussian => Profile::Gaussian {
            a0: 1.0,
            b0: 0.8,
            sa: 1.1,
            sb: 0.9,
        },
    }
}

fn family(kind: RepKind, z: f64, phi0: Option<f64>) -> Result<SolutionFamily, CliError> {
    Ok(match kind {
        RepKind::CaseA | RepKind::CaseB1 | RepKind::CaseB2 => SolutionFamily::Zero,
        RepKind::Example1 => SolutionFamily::Example1 { z },
        RepKind::Example2Z2 => SolutionFamily::InverseCube {
            phi0: phi0.expect("example2_z2 has phi0"),
        },
        RepKind::Standard => {
            return Err(CliError::Usage(
                "pde symcheck: the standard representation has no exact solution family here".into(),
            ))
        }
    })
}

fn generator_index(label: &str) -> Result<usize, CliError> {
    Representation::index_of(label)
        .ok_or_else(|| CliError::Usage(format!("unknown generator `{label}` (use X-1, X0, X1, Y-1, Y0, Y1)")))
}

pub fn symcheck(a: &SymcheckArgs) -> Result<Report, CliError> {
    let kind = rep_kind(&a.rep)?;
    let z = parse_rational_arg("--z", &a.z)?;
    if kind == RepKind::Example2Z2 && !is_two(&z) {
        return Err(CliError::Usage("example2_z2 is fixed at z = 2".into()));
    }
    let defaults: Vec<(Param, i64)> = kind.params().iter().map(|p| (*p, 1)).collect();
    let asg = a.params.numeric(kind.params(), &defaults, "pde symcheck")?;
    if a.eps.len() < 2 || a.eps.iter().any(|e| !(*e > 0.0)) {
        return Err(CliError::Usage("--eps needs at least two positive values".into()));
    }
    let rep = make_rep(kind, &z, &asg)?;
    let zf = rational_to_f64(&z);
    let phi0 = asg.get(Param::Phi0).map(rational_to_f64);
    let fam = family(kind, zf, phi0)?;
    let f = ExactSolution::new(fam, value_f64(&asg, Param::Mu), profile(a.profile));
    let params = numeric_params(&asg);
    let cloud = PointCloud::standard(a.points, a.seed);

    let indices: Vec<usize> = if a.gen == "all" { (0..6).collect() } else { vec![generator_index(&a.gen)?] };
    let corrupt = a.corrupt.as_deref().map(generator_index).transpose()?;

    let mut cfg = BTreeMap::new();
    cfg.insert("rep".into(), kind.name().into());
    cfg.insert("z".into(), z.to_string());
    for p in kind.params() {
        cfg.insert(p.name().into(), asg.get(*p).expect("numeric").to_string());
    }
    cfg.insert("gen".into(), a.gen.clone());
    if let Some(i) = corrupt {
        cfg.insert("corrupt".into(), BASIS_NAMES[i].into());
    }
    cfg.insert("points".into(), a.points.to_string());
    cfg.insert("seed".into(), a.seed.to_string());
    cfg.insert("eps".into(), a.eps.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(","));
    cfg.insert("min_slope".into(), a.min_slope.to_string());
    cfg.insert("profile".into(), format!("{:?}", a.profile).to_lowercase());
    let mut report = Report::new("pde symcheck", cfg);

    for i in indices {
        let start = Instant::now();
        let mut gen = rep.basis[i].clone();
        let mut name = format!("symcheck/{}", BASIS_NAMES[i]);
        if corrupt == Some(i) {
            gen.ar = gen.ar.scale(&ParamRat::from_int(2));
            name += " (corrupted)";
        }
        let r = symmetry_firstorder_check_field(&rep.boltzmann, &gen, &f, &a.eps, &params, &cloud)?;
        let res: Vec<String> = r.residuals.iter().map(|(_, x)| fmt_e(*x)).collect();
        let slope = match r.slope {
            Some(s) => format!("slope {s:.3}"),
            None => "exact (residuals at noise floor)".into(),
        };
        let summary = format!(
            "{slope}; max residuals [{}]; {} points, {} discarded",
            res.join(", "),
            r.points_used,
            r.discarded
        );
        let mut rec = Record::new(name, r.passed(a.min_slope), summary);
        rec.residual = r.slope;
        rec.tolerance = Some(a.min_slope);
        report.push(rec.timed(start));
    }
    Ok(report)
}

pub fn trace(a: &TraceArgs) -> Result<Report, CliError> {
    let params: &[Param] = match a.force {
        ForceArg::InverseCube => &[Param::Mu, Param::Phi0],
        _ => &[Param::Mu],
    };
    let asg = a.params.numeric(params, &[(Param::Mu, 1), (Param::Phi0, 1)], "pde trace")?;
    let mu = value_f64(&asg, Param::Mu);
    let (force, fam) = match a.force {
        ForceArg::Zero => (ForceField::Zero, SolutionFamily::Zero),
        ForceArg::Example1 => (ForceField::Example1 { z: a.z }, SolutionFamily::Example1 { z: a.z }),
        ForceArg::InverseCube => {
            if a.z != 2.0 {
                return Err(CliError::Usage("the inverse-cube force has z = 2".into()));
            }
            let phi0 = value_f64(&asg, Param::Phi0);
            (ForceField::const_phi(2.0, phi0), SolutionFamily::InverseCube { phi0 })
        }
    };
    let mut cfg = BTreeMap::new();
    cfg.insert("force".into(), force.tag().into());
    cfg.insert("z".into(), a.z.to_string());
    for p in params {
        cfg.insert(p.name().into(), asg.get(*p).expect("numeric").to_string());
    }
    for (k, v) in [("t0", a.t0), ("r0", a.r0), ("v0", a.v0), ("t_end", a.t_end), ("step", a.step), ("tol", a.tol)] {
        cfg.insert(k.into(), v.to_string());
    }
    let mut report = Report::new("pde trace", cfg);

    let start = Instant::now();
    let traj = integrate_trajectory(&force, mu, CharState::new(a.t0, a.r0, a.v0), a.t_end, a.step)?;
    let sol_a = ExactSolution::new(fam, mu, Profile::First);
    let sol_b = ExactSolution::new(fam, mu, Profile::Second);
    for (name, sol) in [("trace/first_invariant", &sol_a), ("trace/second_invariant", &sol_b)] {
        let f0 = sol.eval(a.t0, a.r0, a.v0);
        let drift = traj.iter().fold(0.0f64, |m, s| m.max((sol.eval(s.t, s.r, s.v) - f0).abs()));
        let scale = f0.abs().max(1.0);
        report.push(
            Record::measured(name, drift / scale, a.tol, format!("max relative drift {}", fmt_e(drift / scale))).timed(start),
        );
    }
    if let Some(path) = &a.csv {
        let csv = trajectory_csv(&traj, &|s| sol_a.eval(s.t, s.r, s.v));
        write_file(path, &csv)?;
        report.artifacts.push(path.display().to_string());
    }
    Ok(report)
}
