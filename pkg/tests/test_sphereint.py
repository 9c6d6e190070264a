import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import integrate

from dunklpoly import DunklContext, Polynomial, SphericalIntegrator, build_named
from dunklpoly.errors import ExactModeUnavailable, NotHarmonic
from dunklpoly.liouville import random_h_harmonic, random_homogeneous
from dunklpoly.sphereint import (
    PiRational,
    exact_monomial_integral,
    m1,
    mean_value_check,
    positive_part_m1,
    sign_definite,
    sphere_area,
)

from .conftest import HALF, x

F = Fraction


def quad_circle(alpha):
    fn = lambda t: abs(math.cos(t)) ** alpha[0] * abs(math.sin(t)) ** alpha[1]
    return integrate.quad(fn, 0, 2 * math.pi, limit=200)[0]


def quad_sphere3(alpha):
    def fn(phi, theta):
        y = (math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta))
        return math.prod(abs(c) ** a for c, a in zip(y, alpha)) * math.sin(theta)

    return integrate.dblquad(fn, 0, math.pi, 0, 2 * math.pi, epsabs=1e-11)[0]


@pytest.mark.parametrize(
    "alpha,expected",
    [((0, 0), PiRational(2, 1)), ((1, 1), PiRational(2)), ((2, 0), PiRational(1, 1)),
     ((0, 0, 0), PiRational(4, 1)), ((1, 1, 1), PiRational(1))],
)
def test_known_values(alpha, expected):
    assert exact_monomial_integral(alpha) == expected


@pytest.mark.parametrize("alpha", [(0, 0), (1, 1), (2, 0), (3, 1), (4, 2), (5, 5), (1, 0), (HALF, F(3, 2))])
def test_circle_against_quadrature(alpha):
    got = float(exact_monomial_integral(alpha))
    assert got == pytest.approx(quad_circle([float(a) for a in alpha]), rel=1e-9)


@pytest.mark.parametrize("alpha", [(0, 0, 0), (1, 1, 1), (2, 0, 2), (3, 1, 0), (1, 2, 3), (HALF, 1, 0)])
def test_sphere_against_quadrature(alpha):
    got = float(exact_monomial_integral(alpha))
    assert got == pytest.approx(quad_sphere3([float(a) for a in alpha]), rel=1e-8)


def test_sphere_area():
    assert sphere_area(2) == PiRational(2, 1)
    assert sphere_area(4) == PiRational(2, 2)
    assert float(sphere_area(5)) == pytest.approx(8 * math.pi**2 / 3)


def test_bad_exponents():
    with pytest.raises(ValueError):
        exact_monomial_integral((-1, 0))
    with pytest.raises(ValueError):
        exact_monomial_integral(())


def test_pi_rational_arithmetic():
    a = PiRational(F(1, 2), 1)
    assert a + a == PiRational(1, 1)
    assert a * 4 == PiRational(2, 1)
    assert float(a) == pytest.approx(math.pi / 2)
    assert PiRational(0, 3) == PiRational(0)
    assert str(a) == "1/2*pi^1"


def test_exact_mode_needs_axis_roots():
    with pytest.raises(ExactModeUnavailable):
        SphericalIntegrator(build_named("A", 3, HALF), mode="exact")
    assert SphericalIntegrator(build_named("A", 3, HALF)).mode == "numeric"
    with pytest.raises(ValueError):
        SphericalIntegrator(build_named("Z2", 2, [1, 1]), mode="fast")


def test_constant_z2(z2_exact):
    # h^2 = |x1||x2| so c = int |y1 y2| dsigma = 2
    assert z2_exact.constant().value == 2


@pytest.mark.parametrize("kappa", [[HALF, HALF], [1, F(3, 2)], [F(1, 4), 2]])
def test_numeric_rule_calibrated_against_exact(kappa):
    ws = build_named("Z2", 2, kappa)
    exact = SphericalIntegrator(ws, mode="exact")
    numeric = SphericalIntegrator(ws, mode="numeric")
    g = x(2, 1) ** 4 - 3 * x(2, 1) ** 2 * x(2, 2) ** 2 + x(2, 2) + 2
    e = float(exact.integrate(g).value)
    q = numeric.integrate(g)
    assert q.method == "quadrature"
    assert abs(q.value - e) <= q.error


def test_numeric_rule_three_dim():
    ws = build_named("Z2", 3, [HALF, 1, F(3, 2)])
    exact = SphericalIntegrator(ws, mode="exact")
    numeric = SphericalIntegrator(ws, mode="numeric")
    g = x(3, 1) ** 2 * x(3, 3) ** 2 + 5 * x(3, 2) ** 2 - 1
    q = numeric.integrate(g)
    assert abs(q.value - float(exact.integrate(g).value)) <= q.error


@pytest.mark.parametrize("family,param,kappa", [("Z2", 2, [HALF, HALF]), ("Z2", 3, [1, HALF, 2]), ("B", 2, [HALF, 1])])
def test_mean_value_property(family, param, kappa):
    import random

    ws = build_named(family, param, kappa)
    ctx = DunklContext(ws)
    intg = SphericalIntegrator(ws)
    rng = random.Random(7)
    for d in range(0, 5):
        h = random_h_harmonic(ctx, d, rng)
        rep = mean_value_check(intg, h, ctx)
        assert rep.passed
        if intg.mode == "exact":
            assert rep.lhs == rep.rhs


def test_mean_value_rejects_non_harmonic(z2_exact):
    with pytest.raises(NotHarmonic):
        mean_value_check(z2_exact, Polynomial.norm_squared(2))


def test_orthogonality(z2_ctx, z2_exact, rng):
    for _ in range(10):
        d1, d2 = rng.sample(range(0, 6), 2)
        h1 = random_h_harmonic(z2_ctx, d1, rng)
        h2 = random_h_harmonic(z2_ctx, d2, rng)
        assert z2_exact.integrate(h1 * h2).value == 0


def test_growth_example_exact(z2_exact):
    f = x(2, 1) ** 2
    for r in (1, 2, 4, 8):
        res = m1(z2_exact, r, f)
        assert res.exact and res.value == PiRational(r**5)


def test_scaling_law_monte_carlo():
    ws = build_named("Z2", 2, [HALF, F(1, 3)])
    intg = SphericalIntegrator(ws, samples=100_000)
    f = x(2, 1) ** 3 - 2 * x(2, 1) * x(2, 2) ** 2
    base = m1(intg, 1, f)
    for r in (F(1, 2), 3, 10):
        res = m1(intg, r, f)
        expected = base.value * float(r) ** (3 + 1 + 2 * float(ws.gamma))
        assert res.value == pytest.approx(expected, rel=1e-12)


def test_monte_carlo_matches_exact(z2_exact):
    intg = SphericalIntegrator(z2_exact.ws, samples=200_000)
    g = x(2, 1) ** 2 - x(2, 2) ** 2 + 1
    assert sign_definite(g) is None
    # sign changes, but the signed integral has a closed form: the |.| estimate must bound it
    mc = intg.integrate(g, use_abs=True)
    assert mc.method == "monte-carlo" and mc.error > 0
    sq = x(2, 1) ** 2 * x(2, 2) ** 2
    mc_sq = intg.integrate(sq, use_abs=True)
    exact = float(z2_exact.integrate(sq).value)
    assert abs(mc_sq.value - exact) < 5 * mc_sq.error + 1e-12


def test_positive_part_identity():
    ws = build_named("Z2", 2, [HALF, HALF])
    intg = SphericalIntegrator(ws, samples=50_000)
    f = x(2, 1) * x(2, 2) - x(2, 1) + 2
    prof = intg.profile(f, [0.5, 1, 3])
    np.testing.assert_allclose(2 * prof["pos"], prof["abs"] + prof["signed"], rtol=1e-10)
    assert np.all(prof["pos"] >= 0) and np.all(prof["abs"] >= np.abs(prof["signed"]) - 1e-12)


def test_positive_part_m1_definite(z2_exact):
    f = Polynomial.norm_squared(2)
    assert positive_part_m1(z2_exact, 2, f) == m1(z2_exact, 2, f)
    assert positive_part_m1(z2_exact, 2, -f).value == 0


def test_m1_zero_and_bad_radius(z2_exact):
    assert m1(z2_exact, 3, Polynomial.zero(2)).value == 0
    with pytest.raises(ValueError):
        m1(z2_exact, 0, x(2, 1))


def test_sign_definite():
    assert sign_definite(Polynomial.norm_squared(3)) == 1
    assert sign_definite(-Polynomial.norm_squared(3) - 2) == -1
    assert sign_definite(x(2, 1)) is None
    assert sign_definite(x(2, 1) ** 2 - x(2, 2) ** 2) is None


def test_mc_reproducible():
    ws = build_named("A", 3, HALF)
    a = SphericalIntegrator(ws, samples=20_000, seed=3)
    b = SphericalIntegrator(ws, samples=20_000, seed=3)
    f = random_homogeneous(3, 3, __import__("random").Random(2))
    assert a.integrate(f, use_abs=True) == b.integrate(f, use_abs=True)
    assert np.all(np.abs(np.linalg.norm(a.mc_points(), axis=1) - 1) < 1e-12)
