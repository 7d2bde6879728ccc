"""Smoke test for the blaschke_lab extension module.

Build and install first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o /tmp/wheels
    pip install /tmp/wheels/blaschke_lab-*.whl
    python python/smoke_test.py
"""

import cmath
import math

import blaschke_lab as bl


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    t = bl.DiscAutomorphism(0.5, 1)
    assert close(t(0), 0.5)
    assert close(t(0.5), 0)
    assert t.compose(t.inverse()).is_identity()

    b = bl.BlaschkeProduct(1, [0.5, -0.5])
    assert b.order == 2
    assert close(b(0), -0.25)
    interior, exterior = b.critical_points()
    assert len(interior) == 1 and close(interior[0][0], 0) and interior[0][1] == 1
    assert all(in_hull for _, _, in_hull in b.hull_check())

    sq = bl.BlaschkeProduct.monomial(2)
    assert close(sq(0.3), 0.09)
    assert close(sq.boundary_derivative_modulus(1.0), 2.0)
    assert close(sq.fatou_quotient(0.99), 2 * 0.99 / (1 + 0.99 ** 2))

    r = bl.BlaschkeProduct.random(6, seed=42)
    hull = bl.hyperbolic_convex_hull(r.zeros)
    for z, m, ok in r.hull_check():
        assert ok and hull.contains(z)
    assert sum(m for _, m in r.critical_points()[0]) == 5

    w = 0.3 - 0.2j
    count, residual, radius = bl.valence(r, w)
    assert count == 6 and residual < 0.05
    assert all(abs(r(z) - w) < 1e-8 for z in r.fiber(w))

    k = bl.poincare_to_klein(0.5)
    assert close(k, 0.8) and close(bl.klein_to_poincare(k), 0.5)
    assert close(bl.geodesic_point(0, 0.5, 1.0), 0.5)

    records = bl.convergence_experiment(sq, 1, "radial", 0.5, 12, radius=0.5)
    assert records[-1]["sup_deviation"] < 1e-6

    ce = bl.counterexample_run()
    assert ce["even_limit_deviation"] < 1e-6 and ce["odd_limit_deviation"] < 1e-6
    assert ce["unrenormalized_oscillation"] > 1

    delta, pair = bl.separation_estimate(sq, 0.8)
    assert delta >= 1.6 - 1e-9 and pair is not None

    for m, n, c, res in bl.density_family(0.5, -0.5, [(1, 1), (2, 3)]):
        assert res < 1e-8

    roots = bl.find_roots([-0.027, 0.27, -0.9, 1])
    assert roots == [(roots[0][0], 3)] and close(roots[0][0], 0.3, 1e-10)

    try:
        bl.BlaschkeProduct(1, [1.5])
    except ValueError:
        pass
    else:
        raise AssertionError("zero outside the disc accepted")

    for ident, name, passed, worst in bl.run_suites(trials=2):
        assert passed, (ident, name, worst)

    rotation = cmath.exp(1j * math.pi / 3)
    assert close(bl.DiscAutomorphism.rotation(rotation)(0.5), 0.5 * rotation)
    print("smoke test passed")


if __name__ == "__main__":
    main()
