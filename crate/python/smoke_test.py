"""Smoke test for the `vlasym` extension module.

Build and install first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/vlasym-*.whl

then run `python python/smoke_test.py`.
"""

from fractions import Fraction

import vlasym


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok    {what}")


def main():
    e = vlasym.Expr.parse("(t^2 - r^2)/(t - r)")
    check(e == vlasym.Expr.parse("t + r"), "cancellation to t + r")
    check(str(e.diff("t")) == "1", "d/dt (t + r) = 1")
    check(abs(e.eval(1.5, 2.0, 0.3) - 3.5) < 1e-15, "numeric evaluation")
    try:
        e / vlasym.Expr.parse("0")
        check(False, "division by zero raises")
    except ZeroDivisionError:
        check(True, "division by zero raises")

    std = vlasym.make_rep("standard")
    x0, xm1 = std.generator("X0"), std.generator("X-1")
    b = x0.bracket(xm1)
    check(b == xm1, "[X0, X-1] = X-1 in the standard representation")
    exp = vlasym.expand_in_rep_basis(b, std)
    check(exp["coefficients"] == {"X[-1]": "1"} and exp["in_span"], "expansion in the basis")

    rep = vlasym.make_rep("caseB2", z=2)
    t = vlasym.verify_table(rep)
    check(t["ok"] and len(t["pairs"]) == 15, "caseB2 table closes (15 pairs)")
    check((t["k"], t["q"]) == ("mu", "-mu + 1"), f"caseB2 (k, q) = ({t['k']}, {t['q']})")
    syms = vlasym.verify_symmetries(rep)
    check(all(s["ok"] for s in syms) and len(syms) == 6, "six symmetry multipliers")

    ex1 = vlasym.make_rep("example1", z=Fraction(1, 2), params={"mu": 2, "k": "symbolic"})
    check(vlasym.verify_table(ex1)["ok"], "example1 at z = 1/2, mu = 2")
    check(vlasym.make_rep("caseA", z=3).to_text().startswith("name = caseA"), "text form")
    round_trip = vlasym.Representation.from_text(rep.to_text())
    check(all(a == b for a, b in zip(round_trip.basis, rep.basis)), "text round trip")

    check(not vlasym.nogo(1)["obstructed"], "no obstruction at z = 1")
    check(vlasym.nogo(2)["obstructed"], "obstruction at z = 2")

    sol = vlasym.solve_d12(2, 1.0, 1.0, 1.0, anchor=vlasym.closed_d12_z2(1.0, 1.0, 1.0, 0.5))
    dev = max(abs(v - vlasym.closed_d12_z2(1.0, 1.0, 1.0, u)) for u, v in zip(sol["u"], sol["value"]))
    check(dev < 1e-8, f"d12 matches the closed form (max deviation {dev:.2e})")

    good = vlasym.symmetry_check("example1", "Y0", params={"k": 1})
    check(good["passed"] and good["slope"] > 1.9, f"Y0 residual is O(eps^2) (slope {good['slope']:.3f})")
    bad = vlasym.symmetry_check("example1", "X1", corrupt=True)
    check(not bad["passed"] and abs(bad["slope"] - 1.0) < 0.3, f"corrupted X1 is O(eps) (slope {bad['slope']:.3f})")

    traj = vlasym.integrate_characteristic("example1", (0.0, 1.0, 1.0), 1.0)
    u = [r * v for (_, r, v) in traj]
    check(max(u) - min(u) < 1e-9, "u = r v conserved along an example1 characteristic")

    try:
        vlasym.make_rep("caseB1", z=1)
        check(False, "caseB1 at z = 1 is refused")
    except ValueError as err:
        check("A110=0" in str(err), "caseB1 at z = 1 is refused")
    print("all smoke tests passed")


if __name__ == "__main__":
    main()
