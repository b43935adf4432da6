"""Quick check of the Python bindings.

Build first with `pip install --no-build-isolation -e crates/python`.
"""

from fractions import Fraction

import quartic_a3 as q


def main():
    assert q.count_direct(1) == 2
    assert q.count_torsor(1) == 1
    assert q.count_direct(100) == 2 * q.count_torsor(100)

    x = q.SurfacePoint([1, 1, 1, -1, -1])
    assert x.coords == [1, 1, 1, -1, -1]
    assert x.height() == 1 and x.in_counting_region()
    t = x.lift()
    assert t.eta == [1] * 7 and t.alpha == [-1, 0, 1]
    assert t.check_equations() and t.check_coprimality()
    assert t.to_point() == x
    assert x.mirror().coords == [1, 1, -1, -1, 1]

    pts = q.torsor_points(50)
    assert len(pts) == q.count_torsor(50)
    assert all(p.to_point().lift() == p for p in pts)

    assert q.polytope_alpha() == Fraction(1, 2160)
    assert q.omega_p(5) == Fraction(56, 25)
    assert q.phi_star(6) == Fraction(1, 3)
    assert isinstance(q.theta([1, 2, 3, 1, 1, 1, 1]), Fraction)
    assert all(q.local_factor_identity(p) for p in (2, 3, 5, 7))

    value, err = q.omega_infty()
    mean, se = q.omega_infty_monte_carlo(200_000, seed=42)
    assert abs(value - mean) <= 4 * se, (value, mean, se)

    c = q.peyre_constant(pmax=10_000)
    assert c["alpha_tilde"] == Fraction(1, 4320)
    assert c["assemblies_agree"]

    r = q.check_lemma_inter([1, 1, 1, 1, 1, 1, 1], 10_000)
    assert r["normalized_residual"] <= 2.0

    try:
        q.count_direct(0)
    except ValueError:
        pass
    else:
        raise AssertionError("count_direct(0) should raise")

    print("ok", value, c["c"][0])


if __name__ == "__main__":
    main()
