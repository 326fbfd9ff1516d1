use proptest::prelude::*;
use vlasym::catalog::{make_rep, Assignments, RepKind};
use vlasym::exprparse::{parse_expr, parse_vfield, print_expr, print_vfield};
use vlasym::symexpr::{rat, Expr, Param, ParamRat, Point, Rational, Var};
use vlasym::vectorfield::VectorField;

fn vals(p: Param) -> Option<f64> {
    match p {
        Param::Mu => Some(1.3),
        Param::X => Some(0.7),
        Param::K => Some(-0.4),
        _ => None,
    }
}

fn half_exp() -> impl Strategy<Value = Rational> {
    (-4i64..=4).prop_map(|n| rat(n, 2))
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::var(Var::T)),
        Just(Expr::var(Var::R)),
        Just(Expr::var(Var::V)),
        Just(Expr::param(Param::Mu)),
        Just(Expr::param(Param::X)),
        Just(Expr::param(Param::K)),
        (-5i64..=5, 1i64..=4).prop_map(|(n, d)| Expr::rational(rat(n, d))),
        (0i64..=2, half_exp(), half_exp()).prop_map(|(a, b, c)| Expr::tv(rat(a, 1), b, c)),
    ]
}

/// Denominators that cannot vanish on `t, r, v > 0` with the values above.
fn safe_den() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(parse_expr("1 + t^2", None).unwrap()),
        Just(parse_expr("r + v", None).unwrap()),
        Just(parse_expr("mu + t", None).unwrap()),
        Just(parse_expr("r^(1/2)*v + 2", None).unwrap()),
    ]
}

fn expr_with(depth: u32) -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            (inner, safe_den()).prop_map(|(a, d)| a.div(&d).unwrap()),
        ]
    })
}

fn expr() -> impl Strategy<Value = Expr> {
    expr_with(3)
}

fn point() -> impl Strategy<Value = Point> {
    (0.2f64..2.0, 0.3f64..2.0, 0.3f64..2.0).prop_map(|(t, r, v)| Point::new(t, r, v))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn ev(e: &Expr, p: Point) -> f64 {
    e.eval(p, &vals).unwrap()
}

fn small_field() -> impl Strategy<Value = VectorField> {
    (expr_with(1), expr_with(1), expr_with(1), expr_with(1)).prop_map(|(a, b, c, d)| VectorField::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_axioms(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Expr::one(), a.clone());
    }

    #[test]
    fn zero_test_agrees_with_evaluation(a in expr(), b in expr(), p in point()) {
        let d = &a - &b;
        let val = ev(&a, p) - ev(&b, p);
        if d.is_zero() {
            prop_assert!(close(ev(&a, p), ev(&b, p)));
        }
        prop_assert!(close(ev(&d, p), val));
        let prod = &a * &b;
        prop_assert!(close(ev(&prod, p), ev(&a, p) * ev(&b, p)));
    }

    #[test]
    fn nonzero_is_detected(a in expr()) {
        // a nonzero rational function cannot vanish at all of several generic points
        let pts = [Point::new(0.31, 0.77, 1.13), Point::new(1.7, 0.41, 0.59), Point::new(0.93, 1.61, 1.37)];
        if !a.is_zero() {
            prop_assert!(pts.iter().any(|p| ev(&a, *p).abs() > 1e-12));
        }
    }

    #[test]
    fn leibniz(a in expr(), b in expr()) {
        for x in Var::ALL {
            prop_assert_eq!((&a * &b).diff(x), &(&a.diff(x) * &b) + &(&a * &b.diff(x)));
        }
    }

    #[test]
    fn derivative_matches_difference_quotient(a in expr(), p in point()) {
        let h = 1e-6;
        let num = (ev(&a, Point::new(p.t, p.r + h, p.v)) - ev(&a, Point::new(p.t, p.r - h, p.v))) / (2.0 * h);
        let d = ev(&a.diff(Var::R), p);
        prop_assert!((num - d).abs() <= 1e-5 * (1.0 + d.abs()), "{} vs {}", num, d);
    }

    #[test]
    fn eval_commutes_with_substitution(a in expr(), n in -5i64..=5, d in 1i64..=3, p in point()) {
        let c = rat(n, d);
        let s = a.subst_param(Param::X, &ParamRat::from_rational(c.clone())).unwrap();
        let cf = n as f64 / d as f64;
        let direct = a.eval(p, &|q| if q == Param::X { Some(cf) } else { vals(q) }).unwrap();
        prop_assert!(close(ev(&s, p), direct));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_round_trip(a in expr()) {
        let s = print_expr(&a);
        let back = parse_expr(&s, None).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_identities(x in small_field(), y in small_field(), w in small_field(), f in expr_with(1)) {
        prop_assert_eq!(x.bracket(&y), y.bracket(&x).neg());
        let jac = x.bracket(&y.bracket(&w)).add(&y.bracket(&w.bracket(&x))).add(&w.bracket(&x.bracket(&y)));
        prop_assert!(jac.is_zero());
        // as first-order operators: [X, Y] f = X(Y f) - Y(X f)
        prop_assert_eq!(x.bracket(&y).apply(&f), &x.apply(&y.apply(&f)) - &y.apply(&x.apply(&f)));
    }

    #[test]
    fn field_round_trip(x in small_field()) {
        let s = print_vfield(&x);
        prop_assert_eq!(parse_vfield(&s, None).unwrap(), x);
    }
}

#[test]
fn catalog_generators_round_trip() {
    let a = Assignments::new();
    for z in [rat(2, 1), rat(3, 1), rat(-1, 1), rat(1, 2)] {
        for kind in RepKind::ALL {
            let rep = make_rep(kind, &z, &a).unwrap();
            for g in rep.basis.iter().chain([&rep.boltzmann]) {
                let s = print_vfield(g);
                assert_eq!(&parse_vfield(&s, None).unwrap(), g, "{}: {s}", rep.name);
            }
        }
    }
}
