use vlasym::catalog::*;
use vlasym::exprparse::parse_vfield;
use vlasym::symexpr::{rat, Param, ParamRat, Rational};

fn zs() -> Vec<Rational> {
    vec![rat(2, 1), rat(3, 1), rat(-1, 1), rat(1, 2), rat(1, 1)]
}

fn reps_for(z: &Rational) -> Vec<Representation> {
    let a = Assignments::new();
    RepKind::ALL
        .into_iter()
        .filter(|k| !(*k == RepKind::CaseB1 && *z == rat(1, 1)))
        .map(|k| make_rep(k, z, &a).unwrap())
        .collect()
}

#[test]
fn structure_tables_close() {
    for z in zs() {
        for rep in reps_for(&z) {
            let t = verify_table(&rep).unwrap();
            let ex = rep.expected.as_ref().unwrap();
            assert!(t.ok, "{} z={z}: {}/15", rep.name, t.passed());
            assert_eq!(t.k, ex.k, "{} z={z}", rep.name);
            assert_eq!(t.q, ex.q, "{} z={z}", rep.name);
        }
    }
}

#[test]
fn multipliers_match() {
    for z in zs() {
        for rep in reps_for(&z) {
            for c in verify_symmetries(&rep).unwrap() {
                assert!(c.ok, "{} z={z} {}: {:?}", rep.name, BASIS_NAMES[c.index], c.report);
            }
        }
    }
}

#[test]
fn split_has_exact_witness() {
    let z = rat(3, 1);
    for rep in reps_for(&z) {
        let ex = rep.expected.clone().unwrap();
        let w = split_isomorphism(&ex.k, &ex.q, &rep).unwrap();
        assert!(w.ok(), "{}", rep.name);
        assert_eq!(w.alpha.mul(&w.beta), ex.k);
        assert_eq!(w.alpha.sub(&w.beta), ex.q);
    }
}

#[test]
fn nogo_vanishes_only_at_one() {
    let a = Assignments::new();
    for z in zs() {
        let r = nogo_obstruction(&z, &a).unwrap();
        assert_eq!(r.obstructed(), z != rat(1, 1), "z={z}");
        // the stated X2 has c2 at half the lowering-consistent value
        assert_eq!(lowering_defect(&z, &a).unwrap().is_zero(), z == rat(1, 1), "z={z}");
    }
    // independent oracle values of the projection
    let p = nogo_obstruction(&rat(2, 1), &a).unwrap().projection;
    let want = parse_vfield("(3/4*t^2*v - 3/2*mu*r*t)*Dr + 3/2*mu*t*v*Dv", None).unwrap();
    assert_eq!(p, want);
    let p = nogo_obstruction(&rat(-1, 1), &a).unwrap().projection;
    let want = parse_vfield("(3*t^2*v - 6*mu*r*t)*Dr + 6*mu*t*v*Dv", None).unwrap();
    assert_eq!(p, want);
}

#[test]
fn example1_system_residuals_vanish() {
    let a = Assignments::new();
    for z in zs() {
        for r in verify_example1_system(&z, &a).unwrap() {
            assert!(r.ok(), "z={z} {}: {}", r.name, r.residual);
        }
    }
}

#[test]
fn standard_family_witt_relations() {
    let a = Assignments::new();
    let fam: Vec<_> = (-1..=4).map(|n| make_standard_n(n, &a).unwrap()).collect();
    let rep = make_standard(&a).unwrap();
    for i in 0..3 {
        assert_eq!(fam[i].0, rep.basis[i]);
        assert_eq!(fam[i].1, rep.basis[i + 3]);
    }
    let mu = ParamRat::param(Param::Mu);
    for n in -1i64..=2 {
        for m in -1i64..=2 {
            if n + m < -1 {
                continue;
            }
            let (xn, yn) = &fam[(n + 1) as usize];
            let (xm, ym) = &fam[(m + 1) as usize];
            let (xs, ys) = &fam[(n + m + 1) as usize];
            let w = ParamRat::from_int(n - m);
            assert_eq!(xn.bracket(xm), xs.scale(&w));
            assert_eq!(xn.bracket(ym), ys.scale(&w));
            assert_eq!(yn.bracket(ym), ys.scale(&w.mul(&mu)));
        }
    }
    assert!(matches!(make_standard_n(-2, &a), Err(CatalogError::UnsupportedN(-2))));
}

#[test]
fn assigned_parameters_and_errors() {
    let a = Assignments::new().with(Param::Mu, rat(3, 2)).with(Param::X, rat(-1, 3));
    let rep = make_caseB2(&rat(2, 1), &a).unwrap();
    assert!(verify_table(&rep).unwrap().ok);
    let zero = Assignments::new().with(Param::Mu, rat(0, 1));
    assert_eq!(make_caseA(&rat(2, 1), &zero).unwrap_err(), CatalogError::ZeroMu);
    assert_eq!(make_caseA(&rat(0, 1), &Assignments::new()).unwrap_err(), CatalogError::ZeroZ);
    let e = make_caseB1(&rat(1, 1), &Assignments::new()).unwrap_err();
    assert!(e.to_string().contains("set A110=0 before z→1"));
}

#[test]
fn text_round_trip() {
    for z in [rat(2, 1), rat(-1, 2)] {
        for rep in reps_for(&z) {
            let s = rep.to_text();
            let back = Representation::from_text(&s).unwrap();
            assert_eq!(back.basis, rep.basis, "{}", rep.name);
            assert_eq!(back.boltzmann, rep.boltzmann);
            assert_eq!(back.force, rep.force);
            assert_eq!(back.z, rep.z);
            assert_eq!(back.params, rep.params);
        }
    }
    let bad = "name = x\nz = 2\nX[-1] = -Dt +\n";
    match Representation::from_text(bad) {
        Err(CatalogError::Text { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn example2_closed_forms_solve_their_odes() {
    for r in verify_example2_odes_z2().unwrap() {
        assert!(r.ok(), "{}: {}", r.name, r.residual);
    }
}

#[test]
fn split_witness_for_case_b2() {
    let rep = make_caseB2(&rat(2, 1), &Assignments::new()).unwrap();
    let ex = rep.expected.clone().unwrap();
    let w = split_isomorphism(&ex.k, &ex.q, &rep).unwrap();
    assert!(w.ok());
    assert_eq!(w.alpha, ParamRat::one());
    assert_eq!(w.beta, ParamRat::param(Param::Mu));
}

#[test]
fn case_b1_reduces_to_case_a() {
    for z in [rat(2, 1), rat(-1, 1), rat(1, 2)] {
        let a = Assignments::new().with(Param::A110, rat(0, 1));
        let b1 = make_caseB1(&z, &a).unwrap();
        let ca = make_caseA(&z, &Assignments::new()).unwrap();
        assert_eq!(b1.basis, ca.basis, "z={z}");
    }
}
