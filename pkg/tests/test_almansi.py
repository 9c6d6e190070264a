from fractions import Fraction

import pytest
from hypothesis import given, settings

from dunklpoly import DunklContext, Polynomial, build_named
from dunklpoly.almansi import (
    almansi_decompose,
    h_harmonic_decompose,
    laplacian_shift,
    reconstruct,
    shift_factor,
)
from dunklpoly.dunkl import dunkl_laplacian
from dunklpoly.errors import NotHomogeneous, NotPolyharmonic, SingularSystem
from dunklpoly.liouville import random_h_harmonic, random_homogeneous, random_polyharmonic

from .conftest import HALF, polynomials, x

F = Fraction

CONTEXTS = [
    ("Z2", 2, [HALF, F(1, 3)]),
    ("Z2", 3, [1, 0, F(5, 2)]),
    ("A", 3, F(3, 4)),
    ("B", 2, [F(1, 3), 2]),
    ("D", 4, HALF),
]


@pytest.fixture(params=CONTEXTS, ids=lambda c: f"{c[0]}{c[1]}")
def ctx(request):
    fam, prm, k = request.param
    return DunklContext(build_named(fam, prm, k))


def test_shift_matches_brute_force(ctx, rng):
    r2 = Polynomial.norm_squared(ctx.n)
    for _ in range(6):
        d = rng.randint(0, 4)
        a = rng.randint(1, 3)
        q = random_homogeneous(ctx.n, d, rng)
        assert laplacian_shift(ctx, a, q) == dunkl_laplacian(ctx, r2**a * q)


def test_shift_rejects_inhomogeneous(z2_ctx):
    with pytest.raises(NotHomogeneous):
        laplacian_shift(z2_ctx, 1, x(2, 1) + 1)


def test_shift_factor_on_radial_powers(ctx):
    r2 = Polynomial.norm_squared(ctx.n)
    one = Polynomial.constant(ctx.n, 1)
    for a in range(1, 4):
        c = shift_factor(a, 0, ctx.n, ctx.gamma)
        assert dunkl_laplacian(ctx, r2**a) == r2 ** (a - 1) * c
    assert dunkl_laplacian(ctx, r2) == one * (2 * (ctx.n + 2 * ctx.gamma))


@pytest.mark.parametrize("k1,k2", [(HALF, HALF), (F(1, 3), 2), (0, 0)])
def test_square_splits_with_known_constant(k1, k2):
    ctx = DunklContext(build_named("Z2", 2, [k1, k2]))
    dec = h_harmonic_decompose(ctx, x(2, 1) ** 2)
    gamma = k1 + k2
    assert dec.part(1) == (1 + 2 * k1) / (2 + 2 * gamma)
    assert dunkl_laplacian(ctx, dec.part(0)).is_zero()


def test_parts_are_harmonic_and_reconstruct(ctx, rng):
    for d in range(0, 7):
        p = random_homogeneous(ctx.n, d, rng)
        dec = h_harmonic_decompose(ctx, p)
        assert dec.reconstruct(ctx.n) == p
        for j, h in dec.parts:
            assert dunkl_laplacian(ctx, h).is_zero()
            assert not h or (h.is_homogeneous() and h.degree == d - 2 * j)


def test_decompose_rejects_inhomogeneous(z2_ctx):
    with pytest.raises(NotHomogeneous):
        h_harmonic_decompose(z2_ctx, x(2, 1) ** 2 + x(2, 2))


def test_singular_multiplicity():
    # n + 2 gamma = 0 kills the shift factor for constants under |x|^2
    ws = build_named("Z2", 2, [-HALF, -HALF], unchecked_kappa=True)
    with pytest.raises(SingularSystem):
        h_harmonic_decompose(DunklContext(ws), x(2, 1) ** 2)


def test_almansi_round_trip(ctx, rng):
    for _ in range(5):
        f, truth = random_polyharmonic(ctx, rng, max_degree=6, max_p=3)
        dec = almansi_decompose(ctx, f, truth.order)
        assert dec.phi == truth.phi
        assert reconstruct(dec) == f


def test_almansi_padding_and_errors(z2_ctx):
    r2 = Polynomial.norm_squared(2)
    f = r2 * x(2, 1) * x(2, 2) + 3
    dec = almansi_decompose(z2_ctx, f, 4)
    assert dec.phi[0] == 3 and dec.phi[1] == x(2, 1) * x(2, 2)
    assert dec.phi[2].is_zero() and dec.phi[3].is_zero()
    with pytest.raises(NotPolyharmonic):
        almansi_decompose(z2_ctx, f, 1)
    with pytest.raises(ValueError):
        almansi_decompose(z2_ctx, f, 0)


def test_harmonic_generator(ctx, rng):
    for d in range(5):
        h = random_h_harmonic(ctx, d, rng)
        assert h and dunkl_laplacian(ctx, h).is_zero() and h.degree == d


@settings(max_examples=40, deadline=None)
@given(polynomials(2, max_degree=6, max_terms=8))
def test_every_polynomial_is_polyharmonic(f):
    ctx = DunklContext(build_named("B", 2, [HALF, F(3, 2)]))
    p = int(f.degree) // 2 + 1 if f else 1
    dec = almansi_decompose(ctx, f, p)
    assert reconstruct(dec) == f
    assert all(dunkl_laplacian(ctx, phi).is_zero() for phi in dec.phi)
