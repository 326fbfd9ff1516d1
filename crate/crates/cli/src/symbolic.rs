use std::collections::BTreeMap;
use std::time::Instant;

use vlasym::catalog::{
    make_rep, nogo_obstruction, verify_example1_system, verify_example2_odes_z2, verify_symmetries, verify_table,
    Assignments, RepKind, Representation, BASIS_NAMES,
};
use vlasym::exprparse::{parse_vfield, print_expr, print_vfield};
use vlasym::symexpr::{ParamRat, Rational};
use vlasym::vectorfield::{expand_in_basis, BasisExpansion, VectorField};

use crate::params::{default_z, echo_params, parse_rational_arg, parse_z_list};
use crate::report::{Record, Report};
use crate::{read_file, BracketArgs, CliError, NogoArgs, VerifyArgs};

pub fn rep_kind(name: &str) -> Result<RepKind, CliError> {
    RepKind::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = RepKind::ALL.iter().map(|k| k.name()).collect();
        CliError::Usage(format!("unknown representation `{name}` (expected one of {})", names.join(", ")))
    })
}

fn paren(c: &ParamRat) -> String {
    let s = c.to_string();
    if s.contains([' ', '/']) {
        format!("({s})")
    } else {
        s
    }
}

/// `c1*B1 + c2*B2 + ...` with unit coefficients left out.
pub fn format_combination(e: &BasisExpansion, names: &[&str]) -> String {
    let terms: Vec<String> = e
        .coefficients
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if c.is_one() {
                names[*i].to_string()
            } else if c.neg().is_one() {
                format!("-{}", names[*i])
            } else {
                format!("{}*{}", paren(c), names[*i])
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Apply assignments to a representation read from a file.
fn assign_rep(rep: &mut Representation, a: &Assignments) -> Result<(), CliError> {
    for b in rep.basis.iter_mut() {
        *b = a.apply_field(b)?;
    }
    rep.boltzmann = a.apply_field(&rep.boltzmann)?;
    rep.force = a.apply_expr(&rep.force)?;
    for (p, v) in rep.params.iter_mut() {
        if let Some(r) = a.get(*p) {
            *v = Some(r.clone());
        }
    }
    Ok(())
}

fn check_rep(rep: &Representation, prefix: &str, report: &mut Report) -> Result<(), CliError> {
    let start = Instant::now();
    let table = verify_table(rep)?;
    let kq = format!("(k, q) = ({}, {})", table.k, table.q);
    let failing: Vec<String> = table.pairs.iter().filter(|p| !p.ok).map(|p| p.label()).collect();
    let mut summary = format!("{}/{} pairs, inferred {kq}", table.passed(), table.pairs.len());
    if !table.inferred {
        summary += &format!("; [Y[0], Y[-1]] leaves {}", print_vfield(&table.inference_remainder));
    }
    if !failing.is_empty() {
        summary += &format!("; failing {}", failing.join(" "));
    }
    report.push(Record::new(format!("{prefix}table"), table.ok, summary).timed(start));

    if let Some(ex) = &rep.expected {
        let ok = table.inferred && table.k == ex.k && table.q == ex.q;
        let summary = format!("inferred {kq}, predicted ({}, {})", ex.k, ex.q);
        report.push(Record::new(format!("{prefix}table/constants"), ok, summary).timed(start));
    }

    let start = Instant::now();
    let checks = verify_symmetries(rep)?;
    for c in checks {
        let rho = c.report.rho.as_ref().map(|r| r.to_string()).unwrap_or_else(|| {
            format!("not constant: {}", print_expr(&c.report.residual_scalar))
        });
        let mut summary = format!("lambda = {}, rho = {rho}", print_expr(&c.report.lambda));
        if !c.report.residual_r.is_zero() || !c.report.residual_v.is_zero() {
            summary += &format!(
                "; residual Dr: {}, Dv: {}",
                print_expr(&c.report.residual_r),
                print_expr(&c.report.residual_v)
            );
        }
        if let Some(l) = &c.expected_lambda {
            if *l != c.report.lambda {
                summary += &format!("; predicted lambda {}", print_expr(l));
            }
        }
        if let (Some(e), Some(r)) = (&c.expected_rho, &c.report.rho) {
            if e != r {
                summary += &format!("; predicted rho {e}");
            }
        }
        let name = format!("{prefix}symmetry/{}", BASIS_NAMES[c.index]);
        report.push(Record::new(name, c.ok, summary).timed(start));
    }
    Ok(())
}

fn system_record(name: String, res: &[vlasym::catalog::SystemResidual], start: Instant) -> Record {
    let bad: Vec<&str> = res.iter().filter(|r| !r.ok()).map(|r| r.name).collect();
    let zero = res.len() - bad.len();
    let mut summary = format!("{zero}/{} residuals exactly zero", res.len());
    if !bad.is_empty() {
        summary += &format!("; nonzero: {}", bad.join(" "));
    }
    Record::new(name, bad.is_empty(), summary).timed(start)
}

pub fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let mut cfg = BTreeMap::new();
    if let Some(path) = &a.rep_file {
        let text = read_file(path)?;
        let mut rep = Representation::from_text(&text)?;
        let allowed: Vec<_> = rep.params.iter().map(|(p, _)| *p).collect();
        let asg = a.params.assignments(&allowed, &rep.name)?;
        assign_rep(&mut rep, &asg)?;
        if !a.z.is_empty() {
            return Err(CliError::Usage("--z does not apply to a representation file; set z in the file".into()));
        }
        cfg.insert("rep_file".into(), path.display().to_string());
        cfg.insert("rep".into(), rep.name.clone());
        if let Some(z) = &rep.z {
            cfg.insert("z".into(), z.to_string());
        }
        for (p, v) in &rep.params {
            cfg.insert(p.name().into(), v.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "symbolic".into()));
        }
        let mut report = Report::new("verify", cfg);
        check_rep(&rep, "", &mut report)?;
        return Ok(report);
    }

    let name = a.rep.as_deref().expect("clap requires --rep or --rep-file");
    let kind = rep_kind(name)?;
    let asg = a.params.assignments(kind.params(), kind.name())?;
    cfg.insert("rep".into(), kind.name().into());
    echo_params(&mut cfg, &asg, kind.params());
    let zs = if kind.uses_z() {
        if a.z.is_empty() {
            default_z()
        } else {
            parse_z_list(&a.z)?
        }
    } else {
        let zs = parse_z_list(&a.z)?;
        let fixed = match kind {
            RepKind::Example2Z2 => Some(Rational::from_integer(2.into())),
            _ => None,
        };
        if zs.iter().any(|z| Some(z) != fixed.as_ref()) {
            let msg = match &fixed {
                Some(f) => format!("{} is fixed at z = {f}", kind.name()),
                None => format!("{} does not depend on z", kind.name()),
            };
            return Err(CliError::Usage(msg));
        }
        vec![fixed.unwrap_or_else(|| Rational::from_integer(1.into()))]
    };
    if kind.uses_z() {
        let list: Vec<String> = zs.iter().map(|z| z.to_string()).collect();
        cfg.insert("z".into(), list.join(","));
    }

    let mut report = Report::new("verify", cfg);
    for z in &zs {
        let prefix = if kind.uses_z() { format!("z={z}/") } else { String::new() };
        let rep = make_rep(kind, z, &asg)?;
        check_rep(&rep, &prefix, &mut report)?;
        let start = Instant::now();
        match kind {
            RepKind::Example1 => {
                let res = verify_example1_system(z, &asg)?;
                report.push(system_record(format!("{prefix}system"), &res, start));
            }
            RepKind::Example2Z2 => {
                let res = verify_example2_odes_z2()?;
                report.push(system_record(format!("{prefix}closed_forms"), &res, start));
            }
            _ => {}
        }
    }
    Ok(report)
}

fn read_field(path: &std::path::PathBuf, z: Option<&Rational>) -> Result<VectorField, CliError> {
    let text = read_file(path)?;
    parse_vfield(&text, z).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn bracket(a: &BracketArgs) -> Result<Report, CliError> {
    let mut cfg = BTreeMap::new();
    let z = a.z.as_deref().map(|s| parse_rational_arg("--z", s)).transpose()?;
    cfg.insert("first".into(), a.first.display().to_string());
    cfg.insert("second".into(), a.second.display().to_string());
    if let Some(z) = &z {
        cfg.insert("z".into(), z.to_string());
    }

    let basis: Option<(String, Representation)> = match (&a.basis, &a.basis_file) {
        (Some(name), _) => {
            let kind = rep_kind(name)?;
            let asg = a.params.assignments(kind.params(), kind.name())?;
            echo_params(&mut cfg, &asg, kind.params());
            let zz = match (&z, kind.uses_z()) {
                (Some(z), _) => z.clone(),
                (None, false) => Rational::from_integer(2.into()),
                (None, true) => return Err(CliError::Usage(format!("--basis {} needs --z", kind.name()))),
            };
            Some((kind.name().to_string(), make_rep(kind, &zz, &asg)?))
        }
        (None, Some(path)) => {
            let mut rep = Representation::from_text(&read_file(path)?)?;
            let allowed: Vec<_> = rep.params.iter().map(|(p, _)| *p).collect();
            let asg = a.params.assignments(&allowed, &rep.name)?;
            assign_rep(&mut rep, &asg)?;
            Some((path.display().to_string(), rep))
        }
        (None, None) => None,
    };
    let asg = match &basis {
        Some((_, rep)) => {
            let mut asg = Assignments::new();
            for (p, v) in &rep.params {
                if let Some(v) = v {
                    asg = asg.with(*p, v.clone());
                }
            }
            asg
        }
        None => {
            let all = vlasym::symexpr::Param::ALL;
            let asg = a.params.assignments(&all, "bracket")?;
            for (p, v) in &asg.0 {
                cfg.insert(p.name().into(), v.to_string());
            }
            asg
        }
    };
    if let Some((label, _)) = &basis {
        cfg.insert("basis".into(), label.clone());
    }

    let start = Instant::now();
    let f = asg.apply_field(&read_field(&a.first, z.as_ref())?)?;
    let g = asg.apply_field(&read_field(&a.second, z.as_ref())?)?;
    let b = f.bracket(&g);
    let mut report = Report::new("bracket", cfg);
    report.push(Record::new("bracket", true, print_vfield(&b)).timed(start));
    if let Some((_, rep)) = &basis {
        let start = Instant::now();
        let e = expand_in_basis(&b, &rep.basis)?;
        let mut summary = format_combination(&e, &BASIS_NAMES);
        if !e.in_span() {
            summary += &format!(" + remainder {}", print_vfield(&e.remainder));
        }
        report.push(Record::new("expansion", e.in_span(), summary).timed(start));
    }
    Ok(report)
}

pub fn nogo(a: &NogoArgs) -> Result<Report, CliError> {
    let zs = if a.z.is_empty() { default_z() } else { parse_z_list(&a.z)? };
    let asg = a.params.assignments(RepKind::CaseA.params(), "nogo")?;
    let mut cfg = BTreeMap::new();
    cfg.insert("z".into(), zs.iter().map(|z| z.to_string()).collect::<Vec<_>>().join(","));
    echo_params(&mut cfg, &asg, RepKind::CaseA.params());
    let mut report = Report::new("nogo", cfg);
    for z in &zs {
        let start = Instant::now();
        let r = nogo_obstruction(z, &asg)?;
        let predicted = !num_traits::One::is_one(z);
        let sample = r.sample.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        // a nonzero exact projection must also be visible numerically
        let numeric_ok = !r.obstructed() || sample > 1e-6;
        let ok = r.obstructed() == predicted && numeric_ok;
        let summary = if r.obstructed() {
            format!(
                "nonzero: {}; max |component| at (1,1,1) = {sample:.6e}",
                print_vfield(&r.projection)
            )
        } else {
            "zero".to_string()
        };
        report.push(Record::new(format!("z={z}"), ok, summary).timed(start));
    }
    Ok(report)
}
