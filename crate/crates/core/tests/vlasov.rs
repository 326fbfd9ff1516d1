use vlasym::catalog::{make_rep, Assignments, RepKind, BASIS_NAMES};
use vlasym::symexpr::{int, Param, ParamRat};
use vlasym::vlasov::*;

fn ones(p: Param) -> Option<f64> {
    match p {
        Param::Mu | Param::X | Param::K | Param::Phi0 => Some(1.0),
        Param::A110 => Some(0.5),
        Param::B120 => Some(0.3),
        Param::B121 => Some(-0.2),
        _ => None,
    }
}

const EPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

#[test]
fn free_streaming() {
    let e = integrate_characteristic(&ForceField::Zero, 1.0, CharState::new(0.0, 1.0, 2.0), 1.0, 1e-2).unwrap();
    assert!((e.t - 1.0).abs() < 1e-15 && (e.r - 3.0).abs() < 1e-13 && (e.v - 2.0).abs() < 1e-15);
}

#[test]
fn example1_conserves_u() {
    let f = ForceField::Example1 { z: 2.0 };
    let s = CharState::new(0.0, 1.0, 0.8);
    let traj = integrate_trajectory(&f, 1.0, s, 1.0, 1e-4).unwrap();
    let u0 = s.r * s.v;
    let drift = traj.iter().fold(0.0f64, |m, p| m.max((p.r * p.v - u0).abs()));
    assert!(drift <= 1e-10, "{drift}");
}

#[test]
fn inverse_cube_energy_invariant() {
    let f = ForceField::const_phi(2.0, 1.0);
    let s = CharState::new(0.0, 1.0, 0.5);
    let e0 = energy_invariant(2.0, 1.0, s);
    let full = integrate_characteristic(&f, 1.0, s, 1.0, 1e-3).unwrap();
    let half = integrate_characteristic(&f, 1.0, s, 1.0, 5e-4).unwrap();
    assert!((energy_invariant(2.0, 1.0, full) - e0).abs() <= 1e-8);
    assert!((energy_invariant(2.0, 1.0, half) - e0).abs() <= 1e-8);
}

#[test]
fn integrator_is_fourth_order() {
    let f = ForceField::Example1 { z: 3.0 };
    let s = CharState::new(0.0, 1.0, 0.6);
    let fine = integrate_characteristic(&f, 1.0, s, 1.0, 1e-4).unwrap();
    let err = |h: f64| {
        let e = integrate_characteristic(&f, 1.0, s, 1.0, h).unwrap();
        (e.r - fine.r).abs().max((e.v - fine.v).abs())
    };
    let (a, b) = (err(0.1), err(0.05));
    assert!(a / b >= 8.0, "{a} {b}");
}

#[test]
fn nonpositive_radius_aborts() {
    let r = integrate_characteristic(&ForceField::Zero, 1.0, CharState::new(0.0, 0.5, -1.0), 2.0, 1e-2);
    match r {
        Err(VlasovError::NonPositiveRadius { t, .. }) => assert!((t - 0.5).abs() < 0.02, "{t}"),
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        integrate_characteristic(&ForceField::Zero, 1.0, CharState::new(0.0, 1.0, 1.0), 1.0, 0.0),
        Err(VlasovError::BadStep(_))
    ));
}

#[test]
fn exact_solutions_solve_the_equation() {
    let cloud = PointCloud::standard(1000, 3);
    let zero = ExactSolution::new(SolutionFamily::Zero, 1.3, Profile::First);
    let ex1 = ExactSolution::new(SolutionFamily::Example1 { z: 2.0 }, 1.0, Profile::Second);
    for p in &cloud.points {
        assert!(zero.residual(p.t, p.r, p.v).abs() < 1e-12);
        assert!(ex1.residual(p.t, p.r, p.v).abs() < 1e-12);
        let want = p.r * p.r - 2.0 * p.r * p.v * p.t;
        assert!((ex1.eval(p.t, p.r, p.v) - want).abs() < 1e-12);
    }
    let gauss = Profile::Gaussian { a0: 1.0, b0: 0.5, sa: 1.0, sb: 1.5 };
    let f = ExactSolution::new(SolutionFamily::Example1 { z: 2.0 }, 1.0, gauss.clone());
    let a = Assignments::new();
    let rep = make_rep(RepKind::Example1, &int(2), &a).unwrap();
    for p in &cloud.points {
        let r = boltzmann_residual_fd(&rep.boltzmann, &ones, &|q| Some(f.eval(q.t, q.r, q.v)), *p).unwrap();
        assert!(r.abs() <= 1e-10, "{r}");
    }
    let ic = ExactSolution::new(SolutionFamily::InverseCube { phi0: 0.7 }, 1.2, gauss);
    for p in &cloud.points {
        assert!(ic.residual(p.t, p.r, p.v).abs() < 1e-12);
    }
    assert!(ExactSolution::for_force(&ForceField::const_phi(3.0, 1.0), 1.0, Profile::First).is_err());
}

#[test]
fn constancy() {
    let starts: Vec<(CharState, f64)> = PointCloud::standard(20, 9)
        .points
        .iter()
        .map(|p| (CharState::new(p.t, p.r, p.v), p.t + 0.8))
        .collect();
    let f = ExactSolution::new(SolutionFamily::Example1 { z: 2.0 }, 1.0, Profile::Second);
    let force = f.force();
    let d = constancy_along_characteristics(&force, 1.0, &|s| f.eval(s.t, s.r, s.v), &starts, 1e-3).unwrap();
    assert!(d <= 1e-9, "{d}");
    let g = ExactSolution::new(
        SolutionFamily::Zero,
        1.0,
        Profile::Gaussian { a0: 1.0, b0: 1.0, sa: 0.7, sb: 0.9 },
    );
    let d = constancy_along_characteristics(&ForceField::Zero, 1.0, &|s| g.eval(s.t, s.r, s.v), &starts, 1e-2).unwrap();
    assert!(d <= 1e-11, "{d}");
    let one = [(CharState::new(0.0, 1.0, 1.0), 1.5)];
    let d = constancy_along_characteristics(&force, 1.0, &|s| s.t, &one, 1e-3).unwrap();
    assert!((d - 1.5).abs() < 1e-12);
    let traj = integrate_trajectory(&force, 1.0, one[0].0, 0.1, 0.05).unwrap();
    let csv = trajectory_csv(&traj, &|s| f.eval(s.t, s.r, s.v));
    assert!(csv.starts_with("t,r,v,f,residual\n"));
    assert_eq!(csv.lines().count(), 4);
}

fn family_for(kind: RepKind) -> Option<SolutionFamily> {
    match kind {
        RepKind::CaseA | RepKind::CaseB1 | RepKind::CaseB2 => Some(SolutionFamily::Zero),
        RepKind::Example1 => Some(SolutionFamily::Example1 { z: 2.0 }),
        RepKind::Example2Z2 => Some(SolutionFamily::InverseCube { phi0: 1.0 }),
        RepKind::Standard => None,
    }
}

#[test]
fn generators_are_first_order_symmetries() {
    let cloud = PointCloud::standard(64, 11);
    let a = Assignments::new();
    let gauss = Profile::Gaussian { a0: 1.0, b0: 0.8, sa: 1.1, sb: 0.9 };
    for kind in RepKind::ALL {
        let Some(fam) = family_for(kind) else { continue };
        let rep = make_rep(kind, &int(2), &a).unwrap();
        for profile in [Profile::First, gauss.clone()] {
            let f = ExactSolution::new(fam, 1.0, profile.clone());
            for i in 0..6 {
                let r = symmetry_firstorder_check(&rep, &f, i, &EPS, &ones, &cloud).unwrap();
                assert!(r.passed(1.9), "{} {} {:?}: {:?}", rep.name, BASIS_NAMES[i], profile, r);
            }
        }
    }
}

#[test]
fn spec_slopes_and_corruption() {
    let cloud = PointCloud::standard(64, 5);
    let a = Assignments::new();
    let rep = make_rep(RepKind::CaseA, &int(2), &a).unwrap();
    let f = ExactSolution::new(SolutionFamily::Zero, 1.0, Profile::First);
    let r = symmetry_firstorder_check(&rep, &f, 2, &EPS, &ones, &cloud).unwrap();
    let s = r.slope.expect("second-order residual");
    assert!((s - 2.0).abs() <= 0.1, "{r:?}");

    let ex = make_rep(RepKind::Example1, &int(2), &a).unwrap();
    let g = ExactSolution::new(SolutionFamily::Example1 { z: 2.0 }, 1.0, Profile::Second);
    let r = symmetry_firstorder_check(&ex, &g, 4, &EPS, &ones, &cloud).unwrap();
    assert!(r.passed(1.9), "{r:?}");

    // X1 with its Dr coefficient doubled
    let mut bad = rep.basis[2].clone();
    bad.ar = bad.ar.scale(&ParamRat::from_int(2));
    let r = symmetry_firstorder_check_field(&rep.boltzmann, &bad, &f, &EPS, &ones, &cloud).unwrap();
    let s = r.slope.expect("first-order residual");
    assert!((s - 1.0).abs() <= 0.1 && s <= 1.3, "{r:?}");
}

#[test]
fn parallel_reduction_is_deterministic() {
    let cloud = PointCloud::standard(64, 5);
    let rep = make_rep(RepKind::CaseB2, &int(3), &Assignments::new()).unwrap();
    let f = ExactSolution::new(SolutionFamily::Zero, 1.0, Profile::Gaussian { a0: 0.0, b0: 1.0, sa: 1.0, sb: 1.0 });
    let a = symmetry_firstorder_check(&rep, &f, 5, &EPS, &ones, &cloud).unwrap();
    let b = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| symmetry_firstorder_check(&rep, &f, 5, &EPS, &ones, &cloud).unwrap());
    assert_eq!(a, b);
}
